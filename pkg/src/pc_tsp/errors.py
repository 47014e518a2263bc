"""Exception hierarchy shared by the library and the CLI.

Every error carries a short machine-readable ``code`` and the process ``exit_code`` the CLI
returns when the error escapes a command.
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_MESH = 4
EXIT_NUMERICAL = 5


class PcTspError(Exception):
    """Base exception for pc-tsp errors."""

    def __init__(
        self,
        message: str,
        code: str,
        exit_code: int = EXIT_NUMERICAL,
        detail: str | None = None,
    ):
        self.message = message
        self.code = code
        self.exit_code = exit_code
        self.detail = detail
        super().__init__(message)


class ConfigError(PcTspError):
    """Raised when an experiment configuration or generator spec is invalid."""

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message, "INVALID_CONFIG", EXIT_CONFIG, detail)


class ConfigFileError(PcTspError):
    """Raised when a configuration or run manifest file cannot be read."""

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message, "CONFIG_IO", EXIT_IO, detail)


class MeshIOError(PcTspError):
    """Raised when a mesh or signal file cannot be read or written."""

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message, "MESH_IO", EXIT_IO, detail)


class MeshValidationError(PcTspError):
    """Raised when a mesh violates a structural invariant of the simplicial complex."""

    def __init__(self, message: str, code: str = "INVALID_MESH", detail: str | None = None):
        super().__init__(message, code, EXIT_MESH, detail)


class IndexOutOfRangeError(MeshValidationError):
    def __init__(self, message: str):
        super().__init__(message, "INDEX_OUT_OF_RANGE")


class DegenerateTriangleError(MeshValidationError):
    def __init__(self, message: str):
        super().__init__(message, "DEGENERATE_TRIANGLE")


class DuplicateTriangleError(MeshValidationError):
    def __init__(self, message: str):
        super().__init__(message, "DUPLICATE_TRIANGLE")


class IsolatedVertexError(MeshValidationError):
    def __init__(self, message: str):
        super().__init__(message, "ISOLATED_VERTEX")


class MeshQualityError(MeshValidationError):
    """Raised when a lumped metric entry is not strictly positive."""

    def __init__(self, message: str):
        super().__init__(message, "MESH_QUALITY")


class OffPlaneError(MeshValidationError):
    def __init__(self, message: str):
        super().__init__(message, "POINT_OFF_PLANE")


class NumericalError(PcTspError):
    """Raised when a numerical stage fails (assembly, eigensolver, linear solve)."""

    def __init__(self, message: str, code: str = "NUMERICAL_FAILURE", detail: str | None = None):
        super().__init__(message, code, EXIT_NUMERICAL, detail)


class DimensionMismatchError(NumericalError):
    def __init__(self, message: str):
        super().__init__(message, "DIMENSION_MISMATCH")


class AssemblyError(NumericalError):
    def __init__(self, message: str):
        super().__init__(message, "ASSEMBLY_ERROR")


class SpectralConvergenceError(NumericalError):
    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message, "EIGENSOLVER_NO_CONVERGENCE", detail)


class UnrecoverableSamplingError(NumericalError):
    def __init__(self, message: str, cond_estimate: float):
        self.cond_estimate = cond_estimate
        super().__init__(
            message,
            "UNRECOVERABLE_SAMPLING",
            "Use a larger sampling set or a different selection strategy.",
        )


class NonRecoverableVertexError(NumericalError):
    """Raised when the incident tangent planes of a vertex cannot determine its vector."""

    def __init__(self, vertex_ids: list[int]):
        self.vertex_ids = list(vertex_ids)
        preview = ", ".join(str(v) for v in self.vertex_ids[:10])
        more = "..." if len(self.vertex_ids) > 10 else ""
        super().__init__(
            f"Vertex field not recoverable at vertex {preview}{more}: incident faces are coplanar",
            "NON_RECOVERABLE_VERTEX",
            "Pass pseudoinverse=True to take the minimum-norm solution.",
        )
