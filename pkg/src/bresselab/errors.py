"""Exception hierarchy for bresselab."""


class BresseLabError(Exception):
    """Base class for all errors raised by bresselab."""


class ConfigError(BresseLabError):
    """Configuration could not be parsed or validated."""


class NonPositiveCoefficient(ConfigError):
    """A physical coefficient is zero, negative or not finite."""

    def __init__(self, name: str, value: float | None = None) -> None:
        self.name = name
        self.value = value
        detail = f" (got {value!r})" if value is not None else ""
        super().__init__(f"coefficient {name!r} must be strictly positive and finite{detail}")


class NonFiniteResult(BresseLabError):
    """Propagation overflowed or produced NaN."""


class EigenFailure(BresseLabError):
    """The dense eigenvalue solver did not converge."""


class WrongKind(BresseLabError):
    """A quantity was requested for the wrong system kind."""


class UnknownLemma(BresseLabError):
    """No inequality is registered under the given identifier."""


class NoDecay(BresseLabError):
    """No positive envelope rate is compatible with the sampled energies."""


class BadAssignment(BresseLabError):
    """An initial profile targets a slot the system kind does not have."""


class TailTooFat(BresseLabError):
    """The spectral tail beyond the frequency grid is not negligible."""


class InsufficientSamples(BresseLabError):
    """Too few samples inside the fitting window."""


class NonPositiveNorm(BresseLabError):
    """A norm series contains zero or negative values where logarithms are needed."""
