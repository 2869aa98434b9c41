"""Octonion arithmetic and the seven 7x7 imaginary-unit operators.

The multiplication table is generated by

    e_i e_j = -delta_ij + eps_ijk e_k,

with eps totally antisymmetric and equal to +1 on the seven triples

    {123, 145, 176, 246, 257, 347, 365}.

The operators O_1..O_7 are the skew-symmetric 7x7 matrices obeying the
structure identity

    e_i e_j = sum_k e_k (O_i)_{kj} - delta_ij 1,

i.e. column j of O_i holds the imaginary part of e_i e_j.  They are stored
twice: once hard-coded entry by entry, once regenerated from the eps table;
``unit_matrices`` cross-checks the two on first use, guarding the 84 signed
entries against transcription slips.  (A common alternative convention
defines these operators through right multiplication, Im(phi e_i); with
this eps table that reading has the opposite orientation.  The structure
identity above -- left multiplication -- is what the hard-coded matrices
satisfy, and it is the convention used everywhere in this package.)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import max_abs, unit_matrix

#: +1 triples of the structure constants eps_ijk (1-based indices).
EPS_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5))


@lru_cache(maxsize=1)
def eps_table() -> np.ndarray:
    """Totally antisymmetric eps_ijk as an int array of shape (7, 7, 7), 0-based."""
    eps = np.zeros((7, 7, 7), dtype=np.int64)
    for (i, j, k) in EPS_TRIPLES:
        for (a, b, c), sign in (
            ((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
            ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1),
        ):
            eps[a - 1, b - 1, c - 1] = sign
    return eps


@dataclass(frozen=True)
class Octonion:
    """An octonion re + sum_i im[i] e_i with real components."""

    re: float = 0.0
    im: tuple = (0.0,) * 7

    def __post_init__(self):
        if len(self.im) != 7:
            raise ValueError(f"imaginary part must have 7 components, got {len(self.im)}")
        if not (np.isfinite(self.re) and np.all(np.isfinite(self.im))):
            raise ValueError("octonion components must be finite")
        object.__setattr__(self, "im", tuple(float(c) for c in self.im))

    @classmethod
    def unit(cls, i: int) -> "Octonion":
        """The imaginary unit e_i, 1 <= i <= 7."""
        if not 1 <= i <= 7:
            raise ValueError(f"imaginary unit index must be 1..7, got {i}")
        im = [0.0] * 7
        im[i - 1] = 1.0
        return cls(0.0, tuple(im))

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.re + other.re, tuple(a + b for a, b in zip(self.im, other.im)))

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion(self.re - other.re, tuple(a - b for a, b in zip(self.im, other.im)))

    def scale(self, c: float) -> "Octonion":
        return Octonion(c * self.re, tuple(c * a for a in self.im))


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    """Bilinear extension of the unit table, with 1 acting as identity."""
    eps = eps_table()
    xi = np.asarray(x.im)
    yi = np.asarray(y.im)
    re = x.re * y.re - float(xi @ yi)
    im = x.re * yi + y.re * xi + np.einsum("ijk,i,j->k", eps, xi, yi)
    return Octonion(re, tuple(im))


# The seven operators entry by entry, e.g. O_1 = e_32 - e_23 + e_54 - e_45
# - e_76 + e_67.  Entries are (i, j, sign) for sign * e_{ij}.
_UNIT_MATRIX_ENTRIES = (
    ((3, 2, 1), (2, 3, -1), (5, 4, 1), (4, 5, -1), (7, 6, -1), (6, 7, 1)),
    ((1, 3, 1), (3, 1, -1), (6, 4, 1), (4, 6, -1), (7, 5, 1), (5, 7, -1)),
    ((2, 1, 1), (1, 2, -1), (7, 4, 1), (4, 7, -1), (6, 5, -1), (5, 6, 1)),
    ((1, 5, 1), (2, 6, 1), (3, 7, 1), (5, 1, -1), (6, 2, -1), (7, 3, -1)),
    ((4, 1, 1), (7, 2, -1), (6, 3, 1), (1, 4, -1), (3, 6, -1), (2, 7, 1)),
    ((7, 1, 1), (4, 2, 1), (5, 3, -1), (2, 4, -1), (3, 5, 1), (1, 7, -1)),
    ((5, 2, 1), (6, 1, -1), (4, 3, 1), (3, 4, -1), (2, 5, -1), (1, 6, 1)),
)


def _hardcoded_unit_matrices() -> np.ndarray:
    out = np.zeros((7, 7, 7))
    for i, entries in enumerate(_UNIT_MATRIX_ENTRIES):
        for (a, b, sign) in entries:
            out[i] += sign * unit_matrix(a, b, 7)
    return out


def _rebuilt_unit_matrices() -> np.ndarray:
    # Structure identity: (O_i)_{kj} = eps_ijk.
    return np.transpose(eps_table(), (0, 2, 1)).astype(np.float64)


@lru_cache(maxsize=1)
def unit_matrices() -> np.ndarray:
    """Stack of the seven operators, shape (7, 7, 7); O_i = unit_matrices()[i-1].

    Raises NumericError-free AssertionError never in practice: the hard-coded
    table and the eps-table rebuild must agree entry for entry, which is
    checked here once per process.
    """
    hard = _hardcoded_unit_matrices()
    rebuilt = _rebuilt_unit_matrices()
    if not np.array_equal(hard, rebuilt):
        diff = np.argwhere(hard != rebuilt)
        raise RuntimeError(
            "hard-coded imaginary-unit matrices disagree with the eps-table "
            f"rebuild at (operator, row, col) = {diff[:5] + 1}"
        )
    hard.setflags(write=False)
    return hard


def structure_residual() -> float:
    """Deviation between e_i e_j and sum_k e_k (O_i)_{kj} - delta_ij, all 49 pairs.

    Exact integer arithmetic on both sides; the expected value is 0.0.
    """
    o = unit_matrices()
    worst = 0.0
    for i in range(1, 8):
        for j in range(1, 8):
            lhs = oct_mul(Octonion.unit(i), Octonion.unit(j))
            rhs_re = -1.0 if i == j else 0.0
            rhs_im = o[i - 1][:, j - 1]
            dev = max(abs(lhs.re - rhs_re), max_abs(np.asarray(lhs.im) - rhs_im))
            worst = max(worst, dev)
    return worst


def automorphism_residual(g: np.ndarray) -> float:
    """How far an orthogonal 7x7 matrix is from an octonion automorphism.

    g acts on imaginary units by g(e_i) = sum_j e_j g_{ji} and fixes 1; the
    residual is max_{i,j} |g(e_i) g(e_j) - g(e_i e_j)| over all components.
    Exactly the elements of the 14-dimensional exceptional group drive this
    to zero.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.shape != (7, 7):
        raise ValueError(f"expected a 7x7 matrix, got shape {g.shape}")
    ortho = max_abs(g.T @ g - np.eye(7))
    if ortho > 1e-8:
        raise ValueError(f"matrix is not orthogonal (||g^T g - I|| = {ortho:.3e})")
    eps = eps_table().astype(np.float64)
    # Imaginary part of g(e_i) g(e_j): columns of g multiply through the table.
    prod_im = np.einsum("abk,ai,bj->kij", eps, g, g)
    # Real part of g(e_i) g(e_j) is -<g e_i, g e_j> = -delta_ij by orthogonality.
    prod_re = -(g.T @ g)
    # g applied to e_i e_j = -delta_ij + eps_ijc e_c.
    target_im = np.einsum("ijc,kc->kij", eps, g)
    target_re = -np.eye(7)
    return max(max_abs(prod_im - target_im), max_abs(prod_re - target_re))


def conjugation_residual(g: np.ndarray) -> float:
    """Residual of the operator-transport identity g O_i g^{-1} = sum_k O_k g_{ki}.

    Only holds on the automorphism group, so g is rejected unless
    automorphism_residual(g) < 1e-8.
    """
    g = np.asarray(g, dtype=np.float64)
    res = automorphism_residual(g)
    if res >= 1e-8:
        raise ValueError(
            f"conjugation identity requires an automorphism; residual {res:.3e}"
        )
    o = unit_matrices()
    lhs = np.einsum("ab,ibc,dc->iad", g, o, g)  # g O_i g^T
    rhs = np.einsum("kad,ki->iad", o, g)
    return max_abs(lhs - rhs)
