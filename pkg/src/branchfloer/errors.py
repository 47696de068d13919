"""Exception hierarchy.

Every failure the engine can report derives from BranchFloerError, so callers
(the CLI in particular) can separate engine diagnostics from programming
errors. Each subclass carries the ids needed to locate the problem.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from branchfloer.diagram import ValidationReport


class BranchFloerError(Exception):
    """Base class for all engine errors."""


class DiagramParseError(BranchFloerError, ValueError):
    """A diagram or grid file could not be read."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ExpectationsError(BranchFloerError, ValueError):
    """A check expectations file is not a JSON object keyed by check name."""


class DiagramValidationError(BranchFloerError):
    """A diagram violates one or more structural invariants."""

    def __init__(self, report: ValidationReport) -> None:
        self.report = report
        details = "; ".join(f"{issue.code}: {issue.message}" for issue in report.issues)
        super().__init__(f"invalid diagram ({details})")


class SpecError(BranchFloerError, ValueError):
    """Invalid grid, two-bridge or check-range parameters."""


class ComplexShapeError(BranchFloerError, ValueError):
    """Matrices in a chain complex do not compose."""


class NotAComplexError(BranchFloerError):
    """A composition d_{k-1} d_k is nonzero."""

    def __init__(self, pair: tuple[int, int]) -> None:
        self.pair = pair
        super().__init__(f"d_{pair[0]} * d_{pair[1]} is nonzero")


class NotNiceError(BranchFloerError):
    """The combinatorial differential needs bigon/square regions only."""

    def __init__(self, regions: Sequence[str]) -> None:
        self.regions = tuple(regions)
        super().__init__(f"diagram is not nice; offending regions: {', '.join(self.regions)}")


class NotComparableError(BranchFloerError):
    """Two generators lie in different spin^c classes."""

    def __init__(self, x: Sequence[int], y: Sequence[int]) -> None:
        self.x = tuple(x)
        self.y = tuple(y)
        super().__init__(f"generators {self.x} and {self.y} are not in the same spin^c class")


class CoverError(BranchFloerError):
    """The double branched cover cannot be built for this input."""


class MonodromyParityError(CoverError):
    """A monodromy assignment fails the per-region parity rule."""

    def __init__(self, regions: Sequence[str]) -> None:
        self.regions = tuple(regions)
        super().__init__(f"monodromy parity violated in regions: {', '.join(self.regions)}")


class DifferentialError(BranchFloerError):
    """The assembled differential is inconsistent (d^2 != 0 or grading drift)."""

    def __init__(self, message: str, witness: object = None) -> None:
        self.witness = witness
        super().__init__(message)


class ChainMapError(BranchFloerError):
    """tau^# does not commute with the differential."""

    def __init__(self, witness: int) -> None:
        self.witness = witness
        super().__init__(f"tau^# is not a chain map; witness generator index {witness}")


class EulerCharacteristicError(BranchFloerError):
    """Graded ranks are inconsistent with a V^(n-1) tensor factor."""


class VerdictInputError(BranchFloerError, ValueError):
    """Base and cover data cannot be compared."""
