"""Exception taxonomy shared by all modules."""


class LucasDensityError(Exception):
    """Base class for every error raised by this package."""


class ReducibleError(LucasDensityError):
    """The characteristic polynomial has a rational double/split root (Δ a perfect square)."""


class TorsionError(LucasDensityError):
    """The root quotient is a root of unity; no density theory applies."""


class ZeroParameterError(LucasDensityError):
    """a1 = 0 or a2 = 0: the sequence is degenerate."""


class DiscMismatchError(LucasDensityError):
    """Binary field operation on elements of different quadratic fields."""


class DivisionByZeroError(LucasDensityError):
    """Inversion of the zero element."""


class PrecisionExhaustedError(LucasDensityError):
    """The numeric certification loop could not separate candidates (internal bug)."""


class DegenerateError(LucasDensityError):
    """Internal impossibility, e.g. c = 0 in the square-root data of a nontorsion element."""


class ShapeError(LucasDensityError):
    """A computed conductor violates its structural invariant."""


class CaseError(LucasDensityError):
    """A case formula was invoked outside its hypotheses."""


class HypothesisError(LucasDensityError):
    """S-sum evaluated outside the closed form's hypothesis (h, nu^inf) | nu."""


class OracleMismatchError(LucasDensityError):
    """A closed-form value fell outside the rigorous series-oracle interval."""


class UnreachableCaseError(LucasDensityError):
    """The dispatcher found no applicable route (must never happen)."""


class LimitError(LucasDensityError):
    """A sieve/limit request exceeds the configured ceiling."""
