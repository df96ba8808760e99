from typing import Any, Optional


class OrbitsError(Exception):
    """Base class for every error raised by the orbits package."""


class ExprSyntaxError(OrbitsError):
    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} at position {position}: {text!r}")


class InvalidExpressionError(OrbitsError):
    pass


class ShapeMismatchError(OrbitsError):
    pass


class InfiniteLeafError(OrbitsError):
    pass


class OrderCapExceeded(OrbitsError):
    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"Group order {order} exceeds the configured cap {cap}")


class HypothesisViolation(OrbitsError):
    def __init__(self, name: str, witness: Optional[Any] = None):
        self.name = name
        self.witness = witness
        message = f"Hypothesis '{name}' violated"
        if witness is not None:
            message += f" (witness: {witness})"
        super().__init__(message)


class NotNormalError(OrbitsError):
    def __init__(self, subgroup: str, witness: Any):
        self.subgroup = subgroup
        self.witness = witness
        super().__init__(f"Subgroup {subgroup} is not normal (witness: {witness})")


class EtaError(OrbitsError):
    pass


class NotSquarefreeError(OrbitsError):
    pass


class PolySyntaxError(OrbitsError):
    pass


class InvalidDecompositionError(OrbitsError):
    def __init__(self, report: Any):
        self.report = report
        failed = ", ".join(c.check_name for c in report.failures())
        super().__init__(f"Invalid decomposition: {failed}")


class ConstructionError(OrbitsError):
    pass


class NonCellularError(OrbitsError):
    def __init__(self, reason: str, witness: Optional[Any] = None):
        self.reason = reason
        self.witness = witness
        super().__init__(f"Non-cellular automorphism: {reason}")
