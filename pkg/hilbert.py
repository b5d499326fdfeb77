"""
Finite-dimensional Hilbert space layer.

Vectors are read-only float64 numpy arrays. DenseLinearMap and MetricOperator
wrap dense matrices and are immutable after construction, so iterate histories
and metric schedules can hold on to them safely.

Dense matrices serialize to {"rows", "cols", "data"} with row-major data held
as float.hex strings, which round-trips every float64 bit for bit.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Iterable, Optional, Union

import numpy as np
from scipy import linalg

from config import LOEWNER_TOL
from errors import DimError, InvalidInput

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-12
PSD_RTOL = 1e-10
IDENTITY_RTOL = 1e-12

ArrayLike = Union[np.ndarray, Iterable[float], float]


def as_vector(x: ArrayLike, dim: Optional[int] = None) -> np.ndarray:
    """
    Validate and freeze a vector.

    Args:
        x: Anything numpy can turn into a 1-d float array.
        dim (int, optional): Required length.

    Returns:
        np.ndarray: Read-only float64 copy of x.
    """
    arr = np.array(x, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise InvalidInput("vector must have positive dimension")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("vector has non-finite entries")
    if dim is not None and arr.size != dim:
        raise DimError(f"expected a vector of dimension {dim}, got {arr.size}")
    arr.flags.writeable = False
    return arr


def _as_matrix(data: Any, what: str) -> np.ndarray:
    arr = np.array(data, dtype=np.float64)
    if arr.ndim == 1 and arr.size:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInput(f"{what} must be a non-empty 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{what} has non-finite coefficients")
    arr.flags.writeable = False
    return arr


def _check_dim(expected: int, got: int, what: str) -> None:
    if expected != got:
        raise DimError(f"{what}: expected dimension {expected}, got {got}")


@dataclass(frozen=True, eq=False)
class DenseLinearMap:
    """Dense m x n real matrix L with its adjoint L*."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_matrix(self.matrix, "linear map"))

    @classmethod
    def identity(cls, n: int) -> "DenseLinearMap":
        return cls(np.eye(n))

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def apply(self, x: np.ndarray) -> np.ndarray:
        _check_dim(self.cols, np.shape(x)[0], "apply")
        return self.matrix @ x

    def adjoint_apply(self, y: np.ndarray) -> np.ndarray:
        _check_dim(self.rows, np.shape(y)[0], "adjoint_apply")
        return self.matrix.T @ y

    def adjoint(self) -> "DenseLinearMap":
        return DenseLinearMap(self.matrix.T)

    def scaled(self, factor: float) -> "DenseLinearMap":
        return DenseLinearMap(factor * self.matrix)

    @cached_property
    def norm(self) -> float:
        return operator_norm(self)

    @cached_property
    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.matrix))

    def to_json(self) -> Dict[str, Any]:
        return matrix_to_json(self.matrix)

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "DenseLinearMap":
        return cls(matrix_from_json(payload))


@dataclass(frozen=True, eq=False)
class MetricOperator:
    """
    Self-adjoint dense operator U on R^n.

    With psd=True (the default) U is also checked to be positive semidefinite,
    i.e. an element of S_+. Combinations such as tau*LL* + M2 in the
    accelerated scheme may be indefinite and are built with psd=False.
    """

    matrix: np.ndarray
    psd: bool = True

    def __post_init__(self):
        arr = np.array(_as_matrix(self.matrix, "metric"))
        if arr.shape[0] != arr.shape[1]:
            raise DimError(f"metric must be square, got shape {arr.shape}")
        scale = 1.0 + float(np.max(np.abs(arr)))
        if float(np.max(np.abs(arr - arr.T))) > SYMMETRY_RTOL * scale:
            raise InvalidInput("metric is not symmetric")
        arr = 0.5 * (arr + arr.T)
        arr.flags.writeable = False
        object.__setattr__(self, "matrix", arr)
        if self.psd and self.min_eigenvalue < -PSD_RTOL * (1.0 + self.spectral_radius):
            raise InvalidInput(
                f"metric flagged PSD has eigenvalue {self.min_eigenvalue:.3e}"
            )

    @classmethod
    def identity(cls, n: int, scale: float = 1.0) -> "MetricOperator":
        return cls(scale * np.eye(n), psd=scale >= 0)

    @classmethod
    def zero(cls, n: int) -> "MetricOperator":
        return cls(np.zeros((n, n)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return linalg.eigvalsh(self.matrix)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    @cached_property
    def scaled_identity_factor(self) -> Optional[float]:
        """rho when U = rho*Id within IDENTITY_RTOL, otherwise None."""
        diag = np.diag(self.matrix)
        rho = float(diag[0])
        tol = IDENTITY_RTOL * (1.0 + abs(rho))
        off = self.matrix - np.diag(diag)
        if np.max(np.abs(diag - rho)) <= tol and np.max(np.abs(off)) <= tol:
            return rho
        return None

    def apply(self, x: np.ndarray) -> np.ndarray:
        _check_dim(self.dim, np.shape(x)[0], "metric apply")
        return self.matrix @ x

    def seminorm_sq(self, x: np.ndarray) -> float:
        return seminorm_sq(self, x)

    def __add__(self, other: "MetricOperator") -> "MetricOperator":
        _check_dim(self.dim, other.dim, "metric sum")
        return MetricOperator(self.matrix + other.matrix, psd=self.psd and other.psd)

    def __sub__(self, other: "MetricOperator") -> "MetricOperator":
        _check_dim(self.dim, other.dim, "metric difference")
        return MetricOperator(self.matrix - other.matrix, psd=False)

    def scaled(self, factor: float) -> "MetricOperator":
        return MetricOperator(factor * self.matrix, psd=self.psd and factor >= 0)

    def shifted(self, shift: float) -> "MetricOperator":
        """U + shift*Id."""
        return MetricOperator(self.matrix + shift * np.eye(self.dim), psd=False)

    def to_json(self) -> Dict[str, Any]:
        return matrix_to_json(self.matrix)

    @classmethod
    def from_json(cls, payload: Dict[str, Any], psd: bool = True) -> "MetricOperator":
        return cls(matrix_from_json(payload), psd=psd)


def operator_norm(L: Union[DenseLinearMap, np.ndarray]) -> float:
    """Largest singular value of L."""
    matrix = L.matrix if isinstance(L, DenseLinearMap) else _as_matrix(L, "linear map")
    return float(linalg.svdvals(matrix)[0])


def gram(L: DenseLinearMap) -> MetricOperator:
    """L*L, an n x n PSD metric on the domain of L."""
    return MetricOperator(L.matrix.T @ L.matrix)


def cogram(L: DenseLinearMap) -> MetricOperator:
    """LL*, an m x m PSD metric on the range space of L."""
    return MetricOperator(L.matrix @ L.matrix.T)


def seminorm_sq(U: MetricOperator, x: np.ndarray) -> float:
    """||x||_U^2 = <x, Ux>."""
    _check_dim(U.dim, np.shape(x)[0], "seminorm")
    return float(x @ (U.matrix @ x))


def default_tol(*metrics: MetricOperator) -> float:
    radius = max((m.spectral_radius for m in metrics), default=0.0)
    return LOEWNER_TOL * (1.0 + radius)


def loewner_geq(U1: MetricOperator, U2: MetricOperator, tol: Optional[float] = None) -> bool:
    """U1 >= U2 in the Loewner order, i.e. min eig(U1 - U2) >= -tol."""
    _check_dim(U1.dim, U2.dim, "loewner_geq")
    if tol is None:
        tol = default_tol(U1, U2)
    return (U1 - U2).min_eigenvalue >= -tol


def in_P_alpha(U: MetricOperator, alpha: float, tol: Optional[float] = None) -> bool:
    """U >= alpha*Id within tol."""
    if not alpha > 0:
        raise InvalidInput(f"alpha must be positive, got {alpha}")
    if tol is None:
        tol = default_tol(U)
    return U.min_eigenvalue >= alpha - tol


def float_to_json(value: float) -> str:
    return float(value).hex()


def float_from_json(value: Union[str, float, int]) -> float:
    if isinstance(value, str):
        return float.fromhex(value)
    return float(value)


def matrix_to_json(matrix: np.ndarray) -> Dict[str, Any]:
    rows, cols = matrix.shape
    return {
        "rows": int(rows),
        "cols": int(cols),
        "data": [float_to_json(v) for v in np.asarray(matrix, dtype=np.float64).ravel()],
    }


def matrix_from_json(payload: Dict[str, Any]) -> np.ndarray:
    try:
        rows, cols = int(payload["rows"]), int(payload["cols"])
        data = [float_from_json(v) for v in payload["data"]]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInput(f"malformed matrix payload: {e}") from e
    if len(data) != rows * cols:
        raise DimError(f"matrix payload has {len(data)} entries, expected {rows * cols}")
    return np.array(data, dtype=np.float64).reshape(rows, cols)


def vector_to_json(x: np.ndarray) -> list:
    return [float_to_json(v) for v in np.asarray(x, dtype=np.float64)]


def vector_from_json(values: list) -> np.ndarray:
    return as_vector([float_from_json(v) for v in values])
