"""Dense complex matrix helpers shared by the measurement backends."""

from __future__ import annotations

import numpy as np

from .errors import DimensionCap, InvalidMatrix

HERMITICITY_TOL = 1e-12
TENSOR_DIMENSION_CAP = 4096


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a 2d complex array, rejecting non-finite entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise InvalidMatrix(f"expected a 2d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix("matrix has non-finite entries")
    return arr


def as_hermitian(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return the symmetrized matrix (M + M*) / 2, rejecting asymmetry above ``tol``."""
    arr = as_complex_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {arr.shape}")
    asymmetry = float(np.abs(arr - arr.conj().T).max()) if arr.size else 0.0
    if asymmetry > tol:
        raise InvalidMatrix(f"matrix is not Hermitian (asymmetry {asymmetry:.3e})")
    return (arr + arr.conj().T) / 2


def eigenvalues(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(as_hermitian(m))


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(eigenvalues(m)[0])


def max_eigenvalue(m) -> float:
    """Largest eigenvalue of a Hermitian matrix."""
    return float(eigenvalues(m)[-1])


def is_psd(m, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol``."""
    return min_eigenvalue(m) >= -tol


def tensor(a, b, cap: int = TENSOR_DIMENSION_CAP) -> np.ndarray:
    """Kronecker product, guarded by a cap on the resulting dimensions."""
    left = as_complex_matrix(a)
    right = as_complex_matrix(b)
    rows = left.shape[0] * right.shape[0]
    cols = left.shape[1] * right.shape[1]
    if rows > cap or cols > cap:
        raise DimensionCap(f"tensor product shape ({rows}, {cols}) exceeds cap {cap}")
    return np.kron(left, right)


def rank(m, tol: float = 1e-8) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    arr = as_complex_matrix(m)
    singular = np.linalg.svd(arr, compute_uv=False)
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    return int(np.count_nonzero(singular > tol * singular[0]))


def partial_trace(m, dim_a: int, dim_b: int, keep: str) -> np.ndarray:
    """Partial trace of a matrix on a bipartite space of dimensions ``dim_a * dim_b``.

    ``keep="a"`` traces out the second factor, ``keep="b"`` the first.
    """
    arr = as_complex_matrix(m)
    total = dim_a * dim_b
    if arr.shape != (total, total):
        raise InvalidMatrix(
            f"expected shape ({total}, {total}) for dims ({dim_a}, {dim_b}), "
            f"got {arr.shape}"
        )
    blocks = arr.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "a":
        return np.einsum("abcb->ac", blocks)
    if keep == "b":
        return np.einsum("abad->bd", blocks)
    raise ValueError("keep must be 'a' or 'b'")


def matrix_to_dict(m) -> dict:
    """Serialize a complex matrix to a JSON-compatible dict, row-major."""
    arr = as_complex_matrix(m)
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "re": arr.real.ravel().tolist(),
        "im": arr.imag.ravel().tolist(),
    }


def matrix_from_dict(payload: dict) -> np.ndarray:
    """Inverse of :func:`matrix_to_dict`."""
    try:
        rows = int(payload["rows"])
        cols = int(payload["cols"])
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidMatrix(f"malformed matrix payload: {exc}") from exc
    if re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise InvalidMatrix("matrix payload length does not match rows * cols")
    return (re + 1j * im).reshape(rows, cols)
