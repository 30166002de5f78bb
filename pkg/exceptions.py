from typing import Any, Dict


class QMinSearchError(Exception):
    """
    Purpose:
        Base class for every domain error raised by the simulator.

        Subclasses set `exit_code` (2 = usage/domain error, 1 = verification
        failure) and may attach structured details that end up in the CLI's
        error JSON and in HTTP 400 bodies.
    """

    exit_code: int = 2

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.details}


# Dataset ingestion
class ParseError(QMinSearchError):
    pass


class DuplicateValue(QMinSearchError):
    def __init__(self, value: int):
        super().__init__(f"Duplicate value in dataset: {value}", value=value)


class ValueOutOfRange(QMinSearchError):
    def __init__(self, value: int, n_qubits: int):
        super().__init__(
            f"Value {value} does not fit in {n_qubits} qubits (must be < {2 ** n_qubits})",
            value=value,
            n_qubits=n_qubits,
        )


class EmptyDataset(QMinSearchError):
    def __init__(self):
        super().__init__("Dataset contains no values")


class UnknownDatasetSpec(QMinSearchError):
    pass


# Engines
class QubitLimitExceeded(QMinSearchError):
    def __init__(self, n_qubits: int, limit: int):
        super().__init__(
            f"{n_qubits} qubits is outside the supported range 1..{limit}",
            n_qubits=n_qubits,
            limit=limit,
        )


class DimensionMismatch(QMinSearchError):
    def __init__(self, expected: int, actual: int):
        super().__init__(
            f"Qubit count mismatch: expected {expected}, got {actual}",
            expected=expected,
            actual=actual,
        )


class InvalidCounts(QMinSearchError):
    pass


# Oracle synthesis
class ThresholdIsFullRange(QMinSearchError):
    def __init__(self, d_prime: int, n_qubits: int):
        super().__init__(
            f"Threshold {d_prime} marks every code of {n_qubits} qubits; the search is vacuous",
            d_prime=d_prime,
            n_qubits=n_qubits,
        )


class ThresholdOutOfRange(QMinSearchError):
    def __init__(self, d_prime: int, n_qubits: int):
        super().__init__(
            f"Threshold {d_prime} is outside [0, {2 ** n_qubits - 2}] for {n_qubits} qubits",
            d_prime=d_prime,
            n_qubits=n_qubits,
        )


# Grover-Long
class PhaseDomainError(QMinSearchError):
    def __init__(self, t: int, m_est: int, n_est: int, argument: float):
        super().__init__(
            f"Phase matching undefined for t={t}, M/N={m_est}/{n_est}: arcsin argument {argument:.6f} > 1",
            t=t,
            m_est=m_est,
            n_est=n_est,
            argument=argument,
        )


# Metrics / CLI
class InvalidRange(QMinSearchError):
    pass


class VerificationFailure(QMinSearchError):
    exit_code = 1
