"""Exception taxonomy for hyperlap.

Two broad families matter to callers (and to the CLI's exit codes):

* ``ValidationError`` — the input violated a documented precondition.  The
  CLI maps these to exit code 2.
* ``SolverError`` — a well-posed computation failed to converge.  The CLI
  maps these to exit code 3.
"""

__all__ = [
    "HyperlapError",
    "ValidationError",
    "SolverError",
    "SingletonEdge",
    "NonPositiveWeight",
    "Disconnected",
    "NodeIdOutOfRange",
    "DuplicateMember",
    "EmptyGraph",
    "LengthMismatch",
    "FieldMismatch",
    "InvalidP",
    "ZeroDiagonal",
    "TooFewLabels",
    "DegeneratePartition",
    "EmptyCluster",
    "TooLarge",
    "ZeroFunction",
    "DegenerateDirection",
    "SizeMismatch",
    "AsymmetricInput",
    "ParseError",
    "EmptyDataset",
    "SchemaVersionMismatch",
    "NoConvergence",
    "SolverStall",
]


class HyperlapError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HyperlapError, ValueError):
    """An input violated a documented precondition."""


class SolverError(HyperlapError, RuntimeError):
    """An iterative computation failed to reach its target accuracy."""


class SingletonEdge(ValidationError):
    """A hyperedge has fewer than two member nodes."""


class NonPositiveWeight(ValidationError):
    """An edge weight is zero, negative, or not finite."""


class Disconnected(ValidationError):
    """The hypergraph is not connected.

    Attributes
    ----------
    n_components : int
        Number of connected components found.
    """

    def __init__(self, n_components, message=None):
        self.n_components = int(n_components)
        super().__init__(
            message or f"hypergraph has {self.n_components} connected components"
        )


class NodeIdOutOfRange(ValidationError):
    """An edge references a node id outside ``range(num_nodes)``."""


class DuplicateMember(ValidationError):
    """An input edge lists the same node more than once."""


class EmptyGraph(ValidationError):
    """An operation requires at least one node (or one edge)."""


class LengthMismatch(ValidationError):
    """A node-indexed vector has the wrong length for this hypergraph."""


class FieldMismatch(ValidationError):
    """Two edge-vertex fields live on different hypergraphs or layouts."""


class InvalidP(ValidationError):
    """The exponent p is outside the operation's admissible range."""


class ZeroDiagonal(ValidationError):
    """A diagonal relaxation coefficient vanished; the sweep is undefined."""


class TooFewLabels(ValidationError):
    """Not enough labeled nodes per class to run cross-validation."""


class DegeneratePartition(ValidationError):
    """A two-way partition has an empty side."""


class EmptyCluster(ValidationError):
    """A multiway assignment leaves some cluster empty."""


class TooLarge(ValidationError):
    """The instance exceeds the size cap of an exhaustive operation."""


class ZeroFunction(ValidationError):
    """A node function is identically zero where a direction is required."""


class DegenerateDirection(ValidationError):
    """A node function is constant in the degree-weighted sense."""


class SizeMismatch(ValidationError):
    """Two label vectors being compared have different lengths."""


class AsymmetricInput(ValidationError):
    """A matrix that must be symmetric is not."""


class ParseError(ValidationError):
    """A data file line could not be parsed.

    Attributes
    ----------
    line : int or None
        One-based line number of the offending record, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDataset(ValidationError):
    """The data file contains no usable records."""


class SchemaVersionMismatch(ValidationError):
    """A serialized hypergraph file is missing or has an unsupported format tag."""


class NoConvergence(SolverError):
    """An eigenpair or descent computation missed its residual target."""


class SolverStall(SolverError):
    """A linear solve stopped progressing before reaching tolerance."""
