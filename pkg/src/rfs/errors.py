"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument or call broke a documented precondition."""


class SimulationIntegrityError(RuntimeError):
    """A simulated quantum state failed an exactness check it must satisfy.

    Raised when a register that must hold a single basis state does not,
    when an ancilla cannot be safely discarded, or when the statevector
    norm drifts outside tolerance.
    """
