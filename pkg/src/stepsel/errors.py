"""Exception types.

Every error raised by the package derives from :class:`StepselError`.  The
three intermediate classes group errors by what went wrong (bad input data,
bad arguments, numerical breakdown); the CLI maps each group to an exit code.
"""


class StepselError(Exception):
    """Base class for all package errors."""


class DataError(StepselError, ValueError):
    """Input data violates a precondition (shape, finiteness, parse)."""


class UsageError(StepselError, ValueError):
    """Caller-supplied parameters are out of range."""


class NumericalError(StepselError, ArithmeticError):
    """A linear-algebra step could not be carried out reliably."""


# -- data errors -------------------------------------------------------------

class NonFiniteInput(DataError):
    def __init__(self, where="input"):
        super().__init__(f"non-finite value in {where}")


class ZeroVarianceFeature(DataError):
    def __init__(self, index, name=None):
        self.index = index
        self.name = name
        label = name if name is not None else f"#{index}"
        super().__init__(f"feature {label} has zero variance")


class EmptyInput(DataError):
    def __init__(self, path=None):
        super().__init__(f"no data in {path}" if path else "no data")


class RaggedRows(DataError):
    def __init__(self, row, expected, got):
        self.row = row
        super().__init__(f"row {row} has {got} cells, expected {expected}")


class ParseError(DataError):
    def __init__(self, row, col, text=""):
        self.row = row
        self.col = col
        super().__init__(f"cannot parse {text!r} as a number at row {row}, column {col}")


class NonPositivePrice(DataError):
    def __init__(self, feature, index):
        self.feature = feature
        self.index = index
        super().__init__(f"non-positive price for {feature} at index {index}")


class WindowTooLarge(DataError):
    def __init__(self, window, m):
        super().__init__(f"moving-average window {window} exceeds series length {m}")


# -- usage errors ------------------------------------------------------------

class TooLarge(UsageError):
    def __init__(self, n, limit):
        self.n = n
        super().__init__(f"exhaustive search refused for n={n} (limit {limit})")


# -- numerical errors --------------------------------------------------------

class SingularCorrelation(NumericalError):
    def __init__(self, detail=""):
        super().__init__("correlation matrix is singular" + (f": {detail}" if detail else ""))


class DegeneratePivot(NumericalError):
    def __init__(self, index, pivot=None):
        self.index = index
        self.pivot = pivot
        msg = f"degenerate pivot at feature {index}"
        if pivot is not None:
            msg += f" (pivot={pivot:.3e})"
        super().__init__(msg)


class NoValidCandidate(NumericalError):
    def __init__(self, direction):
        super().__init__(f"no valid {direction} candidate remains")


class RankDeficientAt(NumericalError):
    """Raised when a driver stalls; ``partial`` holds the ranking so far."""

    def __init__(self, step, partial=None):
        self.step = step
        self.partial = partial
        super().__init__(f"selection stalled at step {step}: remaining features are linearly dependent")


class SingularSubset(NumericalError):
    def __init__(self, subset):
        self.subset = tuple(subset)
        super().__init__(f"rows in subset {list(self.subset)} are linearly dependent")


class NotPositiveDefinite(NumericalError):
    def __init__(self, min_eig):
        self.min_eig = min_eig
        super().__init__(f"matrix is not positive definite (smallest eigenvalue {min_eig:.3e})")
