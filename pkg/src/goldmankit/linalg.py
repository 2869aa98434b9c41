"""Dense tensor-space primitives.

Everything downstream works on the n^2-dimensional tensor space R^n (x) R^n,
realised concretely as Kronecker blocks of square numpy arrays.  The helpers
here are thin, contract-checked wrappers over numpy/scipy kernels.

Index convention: formulas in docstrings use 1-based entries e_{ij} (the
matrix with a single 1 at row i, column j); storage is ordinary 0-based numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class NumericError(RuntimeError):
    """A numeric kernel produced non-finite output or failed to converge."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative comparison thresholds used by the verification suites."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-9

    def __post_init__(self):
        if not (np.isfinite(self.abs_tol) and self.abs_tol >= 0):
            raise ValueError(f"abs_tol must be finite and >= 0, got {self.abs_tol}")
        if not (np.isfinite(self.rel_tol) and self.rel_tol >= 0):
            raise ValueError(f"rel_tol must be finite and >= 0, got {self.rel_tol}")


def unit_matrix(i: int, j: int, n: int, dtype=np.float64) -> np.ndarray:
    """e_{ij}: the n x n matrix with a 1 in (1-based) entry (i, j)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"unit matrix index ({i},{j}) out of range 1..{n}")
    m = np.zeros((n, n), dtype=dtype)
    m[i - 1, j - 1] = 1
    return m


def _require_square(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product A (x) B of two square matrices.

    Block convention: entry ((i-1)m+k, (j-1)m+l) equals A[i,j] * B[k,l]
    with 1-based i,j over A and k,l over the m x m factor B.
    """
    a = _require_square(a, "A")
    b = _require_square(b, "B")
    return np.kron(a, b)


def trace12(m: np.ndarray):
    """Trace on the tensor space (tr_12); plain matrix trace of the n^2 block.

    The argument is normally an n^2 x n^2 tensor-space operator, but the
    operation itself is the ordinary trace.
    """
    m = _require_square(m, "M")
    return np.trace(m)


def permutation_matrix(n: int) -> np.ndarray:
    """The tensor-swap operator P = sum_{k,j} e_{jk} (x) e_{kj}.

    Satisfies P(A (x) B)P = B (x) A, tr_12[(A (x) B)P] = tr(AB), P^2 = I,
    P^T = P.
    """
    if n < 1:
        raise ValueError(f"permutation_matrix requires n >= 1, got {n}")
    p = np.zeros((n * n, n * n))
    for j in range(n):
        for k in range(n):
            p[j * n + k, k * n + j] = 1.0
    return p


def mat_exp(x: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring Pade, via scipy).

    Samplers feed this arguments with norm O(1), where the result is accurate
    to ~1e-14.  Raises NumericError if the result is not finite.
    """
    x = _require_square(x, "X")
    if not np.all(np.isfinite(x)):
        raise NumericError("mat_exp input has non-finite entries")
    e = scipy.linalg.expm(x)
    if not np.all(np.isfinite(e)):
        raise NumericError(
            f"mat_exp did not converge: input norm {np.linalg.norm(x):.3e}, "
            "output has non-finite entries"
        )
    return e


def max_abs(a: np.ndarray) -> float:
    """Largest entry magnitude; the residual norm used across the suites."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def real_part(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Drop an imaginary part that is certified to be numerical noise."""
    a = np.asarray(a)
    if not np.iscomplexobj(a):
        return a
    imag = max_abs(a.imag)
    if imag >= tol:
        raise NumericError(f"imaginary part {imag:.3e} exceeds tolerance {tol:.1e}")
    return a.real.copy()
