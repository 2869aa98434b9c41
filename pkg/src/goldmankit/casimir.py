"""Casimir tensors Gamma = sum_a f(a) t_a (x) t_a and their closed forms.

Closed forms, per family (P is the tensor swap, I the n^2 x n^2 identity):

    GL, U :  Gamma = 2P
    SL, SU:  Gamma = 2P - (2/n) I
    SP    :  Gamma = P + chi      (chi the symplectic defect matrix)
    SO    :  Gamma = P + chi,     chi = - sum_{ij} e_ij (x) e_ij
    G2    :  Gamma = P - sum_{ij} e_ij (x) e_ij + (1/3) sum_i O_i (x) O_i

Comparison against the generator sum is entrywise on the full tensor so that
failures localize; the sizes involved (<= 49 x 49) make dense storage free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bases import Family, LieBasis, as_family, build_basis, matrix_side, normalization_residual
from .linalg import kron, max_abs, permutation_matrix, real_part, unit_matrix
from .octonions import unit_matrices
from .reports import VerificationReport, timed_report


class NormalizationError(ValueError):
    """Raised when a basis fails its normalization precondition."""

    def __init__(self, basis: LieBasis, residual: float):
        self.residual = residual
        super().__init__(
            f"{basis.family.value} (n={basis.n}) basis fails normalization: "
            f"residual {residual:.3e}"
        )


@dataclass(frozen=True)
class CasimirTensor:
    family: Family
    side: int  # side of the tensor itself, i.e. (matrix side)^2
    tensor: np.ndarray


def casimir_tensor(basis: LieBasis, abs_tol: float = 1e-12) -> CasimirTensor:
    """Gamma = sum_a f(a) kron(t_a, t_a); real even for complex generators."""
    residual = normalization_residual(basis)
    if residual >= abs_tol:
        raise NormalizationError(basis, residual)
    gamma = sum(
        sign * kron(g, g) for sign, g in zip(basis.signs, basis.generators)
    )
    gamma = real_part(gamma, abs_tol) if np.iscomplexobj(gamma) else gamma
    return CasimirTensor(basis.family, basis.side ** 2, gamma)


def defect_matrix(family, n: int) -> np.ndarray:
    """chi = Gamma - P for the SP and SO families, built from its literal sums."""
    family = as_family(family)
    if family is Family.SO:
        chi = np.zeros((n * n, n * n))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                e = unit_matrix(i, j, n)
                chi -= kron(e, e)
        return chi
    if family is not Family.SP:
        raise ValueError(f"defect matrix is defined for sp/so only, got {family.value}")
    d = 2 * n
    e = lambda i, j: unit_matrix(i, j, d)
    chi = np.zeros((d * d, d * d))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            chi += (
                kron(e(i, j + n), e(i + n, j))
                + kron(e(j, i + n), e(j + n, i))
                + kron(e(j + n, i), e(j, i + n))
                + kron(e(i + n, j), e(i, j + n))
                - kron(e(i, j), e(i + n, j + n))
                - kron(e(j + n, i + n), e(j, i))
                - kron(e(j, i), e(j + n, i + n))
                - kron(e(i + n, j + n), e(i, j))
            )
    for k in range(1, n + 1):
        chi += (
            kron(e(k, n + k), e(n + k, k))
            + kron(e(n + k, k), e(k, n + k))
            - kron(e(k, k), e(k + n, k + n))
            - kron(e(k + n, k + n), e(k, k))
        )
    return chi


def closed_form(family, n: int) -> np.ndarray:
    """The family's closed-form Casimir tensor."""
    family = as_family(family)
    side = matrix_side(family, n)
    p = permutation_matrix(side)
    if family in (Family.GL, Family.U):
        return 2.0 * p
    if family in (Family.SL, Family.SU):
        return 2.0 * p - (2.0 / n) * np.eye(side * side)
    if family in (Family.SP, Family.SO):
        return p + defect_matrix(family, n)
    # g2: P - sum e_ij (x) e_ij + (1/3) sum O_i (x) O_i
    ident_defect = np.zeros((49, 49))
    for i in range(1, 8):
        for j in range(1, 8):
            e = unit_matrix(i, j, 7)
            ident_defect += kron(e, e)
    o = unit_matrices()
    oct_term = sum(kron(o[i], o[i]) for i in range(7))
    return p - ident_defect + oct_term / 3.0


def verify_closed_form(family, n: int = 1, abs_tol: float = 1e-12) -> VerificationReport:
    """Entrywise |Gamma_from_basis - closed form| < abs_tol."""
    family = as_family(family)
    with timed_report() as clock:
        basis = build_basis(family, n)
        gamma = casimir_tensor(basis).tensor
        residual = max_abs(gamma - closed_form(family, n))
    return VerificationReport(
        check="casimir-closed-form",
        params={"group": family.value, "n": basis.n},
        seed=0,
        trials=1,
        max_abs_err=residual,
        max_rel_err=0.0,
        passed=residual < abs_tol,
        elapsed_ms=clock.ms,
    )


def tensor_lemma_residuals(n: int, rng: np.random.Generator | None = None) -> dict:
    """Residuals of the three tensor identities behind the GL/U closed form.

    h-lemma:   h_1 (x) h_1 + sum_{k>=2} h_k (x) h_k = 2 sum_k e_kk (x) e_kk
    f-lemma:   sum_{k!=j} f_kj (x) f_kj = 2 sum_{k!=j} e_jk (x) e_kj
    polarization: (a+b)(x)(a+b) - (a-b)(x)(a-b) = 2(a (x) b + b (x) a)
    """
    if n < 2:
        raise ValueError(f"tensor lemmas need n >= 2, got {n}")
    from .bases import gell_mann

    gm = gell_mann(n)
    hs = gm[:n]
    offs = gm[n:]
    h_lhs = sum(kron(h, h) for h in hs)
    h_rhs = 2.0 * sum(
        kron(unit_matrix(k, k, n), unit_matrix(k, k, n)) for k in range(1, n + 1)
    )
    f_lhs = sum(kron(f, f) for f in offs)
    f_rhs = np.zeros((n * n, n * n), dtype=complex)
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            if k != j:
                f_rhs += 2.0 * kron(unit_matrix(j, k, n), unit_matrix(k, j, n))
    if rng is None:
        rng = np.random.default_rng(0)
    a = rng.standard_normal((n, n))
    b = rng.standard_normal((n, n))
    pol_lhs = kron(a + b, a + b) - kron(a - b, a - b)
    pol_rhs = 2.0 * (kron(a, b) + kron(b, a))
    return {
        "h_lemma": max_abs(h_lhs - h_rhs),
        "f_lemma": max_abs(f_lhs - f_rhs),
        "polarization": max_abs(pol_lhs - pol_rhs),
    }


def verify_tensor_lemmas(n: int, seed: int = 0, abs_tol: float = 1e-13) -> VerificationReport:
    with timed_report() as clock:
        res = tensor_lemma_residuals(n, np.random.default_rng(np.random.SeedSequence(seed)))
        worst = max(res.values())
    return VerificationReport(
        check="tensor-lemmas",
        params={"n": n},
        seed=seed,
        trials=3,
        max_abs_err=worst,
        max_rel_err=0.0,
        passed=worst < abs_tol,
        elapsed_ms=clock.ms,
    )
