"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument or internal value broke a documented precondition."""


class ZeroProbabilityError(RuntimeError):
    """A projective measurement outcome had zero probability."""


class NoCrossoverError(RuntimeError):
    """Two fidelity curves do not cross inside the search bracket."""
