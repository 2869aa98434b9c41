"""Monte-Carlo verification of the trace-bracket identities.

For sampled group elements A, B the reduced bracket

    lhs = (1/2) tr_12[(A (x) B) Gamma]

must equal the family's resolved-loop form:

    GL, U :  tr(AB)
    SL, SU:  tr(AB) - (1/n) tr(A) tr(B)
    SP, SO:  (1/2) (tr(AB) - tr(A B^-1))
    G2    :  (1/2) (tr(AB) - tr(A B^-1) + (1/3) sum_i tr(A O_i) tr(B O_i))

Composite monodromies of the two intersection resolutions are realised
algebraically as AB and AB^-1; only a single transversal intersection is
modelled (reports carry an ``intersections`` field for a future summation
hook).  Elements are drawn as exp(sum_a c_a t_a) with c_a uniform, using
splittable per-trial substreams so results are schedule-independent.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bases import Family, LieBasis, as_family, build_basis, symplectic_form
from .casimir import casimir_tensor, defect_matrix
from .linalg import NumericError, kron, mat_exp, max_abs, trace12
from .octonions import automorphism_residual, unit_matrices
from .reports import VerificationReport, timed_report

_RESAMPLE_LIMIT = 8
_MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class GroupElement:
    family: Family
    n: int
    matrix: np.ndarray
    membership_residual: float


@dataclass(frozen=True)
class SplitLoopPair:
    """Two monodromies split at a common basepoint into transition factors.

    Loop 1 factors as T(x1,0) T(0,x2) Mtilde1 and loop 2 likewise; the
    reduced bracket operates on the cyclic rearrangements A and B below,
    which are group elements with the same traces as the full monodromies.
    """

    t_x1_0: np.ndarray
    t_0_x2: np.ndarray
    mtilde1: np.ndarray
    t_y1_0: np.ndarray
    t_0_y2: np.ndarray
    mtilde2: np.ndarray

    @property
    def a(self) -> np.ndarray:
        return self.t_0_x2 @ self.mtilde1 @ self.t_x1_0

    @property
    def b(self) -> np.ndarray:
        return self.t_0_y2 @ self.mtilde2 @ self.t_y1_0

    @property
    def monodromy1(self) -> np.ndarray:
        return self.t_x1_0 @ self.t_0_x2 @ self.mtilde1

    @property
    def monodromy2(self) -> np.ndarray:
        return self.t_y1_0 @ self.t_0_y2 @ self.mtilde2


def thread_budget() -> int:
    raw = os.environ.get("GOLDMANKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def membership_residual(family, n: int, g: np.ndarray) -> float:
    """Distance from the family's defining relations (0 means on the group)."""
    family = as_family(family)
    if family is Family.GL:
        return 0.0 if abs(np.linalg.det(g)) > 1e-8 else np.inf
    if family is Family.SL:
        return abs(np.linalg.det(g) - 1.0)
    if family is Family.U:
        return max_abs(g.conj().T @ g - np.eye(n))
    if family is Family.SU:
        return max(max_abs(g.conj().T @ g - np.eye(n)), abs(np.linalg.det(g) - 1.0))
    if family is Family.SP:
        j = symplectic_form(n)
        return max_abs(g.T @ j @ g - j)
    if family is Family.SO:
        return max(max_abs(g.T @ g - np.eye(n)), abs(np.linalg.det(g) - 1.0))
    return automorphism_residual(g)


def _draw(rng: np.random.Generator, basis: LieBasis, scale: float) -> np.ndarray:
    coeffs = rng.uniform(-scale, scale, size=len(basis))
    x = sum(c * g for c, g in zip(coeffs, basis.generators))
    return mat_exp(x)


def sample_element(family, n: int, seed, scale: float = 1.0,
                   basis: LieBasis | None = None) -> GroupElement:
    """Random group element exp(sum_a c_a t_a), c_a ~ U[-scale, scale].

    ``seed`` may be an int or a numpy SeedSequence; trial substreams are the
    caller's business.  Resamples a handful of times if the membership
    residual ever exceeds 1e-8 (it does not at these scales), then raises.
    """
    if not 0.0 < scale <= 2.0:
        raise ValueError(f"scale must lie in (0, 2], got {scale}")
    family = as_family(family)
    if basis is None:
        basis = build_basis(family, n)
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    rng = np.random.default_rng(seq)
    for _ in range(_RESAMPLE_LIMIT):
        g = _draw(rng, basis, scale)
        res = membership_residual(family, basis.n, g)
        if res < _MEMBERSHIP_TOL:
            return GroupElement(family, basis.n, g, res)
    raise NumericError(
        f"could not sample a {family.value} element within residual "
        f"{_MEMBERSHIP_TOL:.1e} (last residual {res:.3e})"
    )


def _trial_streams(seed: int, trial: int, count: int):
    return [
        np.random.SeedSequence(entropy=seed, spawn_key=(trial, k)) for k in range(count)
    ]


def bracket_sides(family, a: GroupElement, b: GroupElement,
                  gamma: np.ndarray | None = None):
    """(lhs, rhs) of the bracket identity for one sampled pair."""
    family = as_family(family)
    if not (a.family is family and b.family is family and a.n == b.n):
        raise ValueError("bracket_sides needs two elements of the same family and size")
    A, B = a.matrix, b.matrix
    n = A.shape[0]
    if gamma is None:
        gamma = casimir_tensor(build_basis(family, a.n)).tensor
    lhs = 0.5 * trace12(kron(A, B) @ gamma)
    if family in (Family.GL, Family.U):
        rhs = np.trace(A @ B)
    elif family in (Family.SL, Family.SU):
        rhs = np.trace(A @ B) - np.trace(A) * np.trace(B) / n
    elif family in (Family.SP, Family.SO):
        rhs = 0.5 * (np.trace(A @ B) - np.trace(A @ np.linalg.inv(B)))
    else:
        o = unit_matrices()
        oct_sum = sum(np.trace(A @ o[i]) * np.trace(B @ o[i]) for i in range(7))
        rhs = 0.5 * (np.trace(A @ B) - np.trace(A @ np.linalg.inv(B)) + oct_sum / 3.0)
    return lhs, rhs


def _max_reduce(pairs):
    worst_abs = 0.0
    worst_rel = 0.0
    for lhs, rhs in pairs:
        err = abs(lhs - rhs)
        worst_abs = max(worst_abs, err)
        worst_rel = max(worst_rel, err / max(abs(rhs), 1e-12))
    return worst_abs, worst_rel


def _run_trials(fn, trials: int):
    workers = thread_budget()
    if workers == 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def verify_bracket(family, n: int = 1, trials: int = 100, seed: int = 0,
                   scale: float = 1.0, rel_tol: float = 1e-9) -> VerificationReport:
    """Bracket identity on ``trials`` independently sampled pairs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    family = as_family(family)
    with timed_report() as clock:
        basis = build_basis(family, n)
        gamma = casimir_tensor(basis).tensor

        def one(trial: int):
            sa, sb = _trial_streams(seed, trial, 2)
            a = sample_element(family, n, sa, scale, basis)
            b = sample_element(family, n, sb, scale, basis)
            return bracket_sides(family, a, b, gamma)

        worst_abs, worst_rel = _max_reduce(_run_trials(one, trials))
    return VerificationReport(
        check="goldman-bracket",
        params={"group": family.value, "n": basis.n, "intersections": 1},
        seed=seed,
        trials=trials,
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        passed=worst_rel < rel_tol,
        elapsed_ms=clock.ms,
    )


def verify_defect(family, n: int = 1, trials: int = 100, seed: int = 0,
                  scale: float = 1.0, abs_tol: float = 1e-10) -> VerificationReport:
    """tr_12[(A (x) B) chi] = -tr(A B^-1) for the SP/SO defect matrices."""
    family = as_family(family)
    if family not in (Family.SP, Family.SO):
        raise ValueError(f"defect lemma applies to sp/so only, got {family.value}")
    with timed_report() as clock:
        basis = build_basis(family, n)
        chi = defect_matrix(family, n)

        def one(trial: int):
            sa, sb = _trial_streams(seed, trial, 2)
            a = sample_element(family, n, sa, scale, basis).matrix
            b = sample_element(family, n, sb, scale, basis).matrix
            lhs = trace12(kron(a, b) @ chi)
            return lhs, -np.trace(a @ np.linalg.inv(b))

        worst_abs, worst_rel = _max_reduce(_run_trials(one, trials))
    return VerificationReport(
        check="defect-lemma",
        params={"group": family.value, "n": basis.n},
        seed=seed,
        trials=trials,
        max_abs_err=worst_abs,
        max_rel_err=worst_rel,
        passed=worst_abs < abs_tol,
        elapsed_ms=clock.ms,
    )


def symplectic_inverse_residual(b: np.ndarray, n: int) -> float:
    """Worst deviation over the full entry-relation table for B in Sp(2n,R).

    The relations express B^-1 through transposed blocks of B with signs,
    e.g. (B^-1)_ij = B_{j+n,i+n} for i < j <= n and (B^-1)_{k,n+k} =
    -B_{k,n+k}; the inverse on the left is computed by dense inversion.
    """
    inv = np.linalg.inv(b)
    # 0-based block views of the 1-based entry relations.
    k = np.arange(n)
    relations = []
    for i in range(n):
        for j in range(i + 1, n):
            relations += [
                (inv[i, j], b[j + n, i + n]),
                (inv[j, i], b[i + n, j + n]),
                (inv[i, j + n], -b[j, i + n]),
                (inv[j, i + n], -b[i, j + n]),
                (inv[n + i, j], -b[j + n, i]),
                (inv[j + n, i], -b[n + i, j]),
                (inv[i + n, j + n], b[j, i]),
                (inv[j + n, i + n], b[i, j]),
            ]
    relations += list(zip(inv[k, k], b[k + n, k + n]))
    relations += list(zip(inv[k, n + k], -b[k, n + k]))
    relations += list(zip(inv[n + k, k], -b[n + k, k]))
    relations += list(zip(inv[k + n, k + n], b[k, k]))
    return max(abs(l - r) for l, r in relations)


def verify_symplectic_inverse(n: int = 1, trials: int = 100, seed: int = 0,
                              scale: float = 1.0, abs_tol: float = 1e-9) -> VerificationReport:
    with timed_report() as clock:
        basis = build_basis(Family.SP, n)

        def one(trial: int):
            (stream,) = _trial_streams(seed, trial, 1)
            b = sample_element(Family.SP, n, stream, scale, basis).matrix
            return symplectic_inverse_residual(b, n), 0.0

        worst_abs, _ = _max_reduce(_run_trials(one, trials))
    return VerificationReport(
        check="symplectic-inverse",
        params={"n": n},
        seed=seed,
        trials=trials,
        max_abs_err=worst_abs,
        max_rel_err=0.0,
        passed=worst_abs < abs_tol,
        elapsed_ms=clock.ms,
    )


def split_harness(family, n: int = 1, seed: int = 0, scale: float = 0.7,
                  abs_tol: float = 1e-9) -> VerificationReport:
    """Basepoint-split invariance of the bracket reduction.

    A loop's monodromy is split as M = T(x1, x2) Mtilde with the composition
    convention T(x1, x2) = T(x1, 0) T(0, x2).  The reduced bracket works on
    A = T(0, x2) Mtilde T(x1, 0), which must carry the same trace as M
    (cyclicity) and still satisfy the bracket identity.
    """
    family = as_family(family)
    with timed_report() as clock:
        basis = build_basis(family, n)
        gamma = casimir_tensor(basis).tensor
        streams = _trial_streams(seed, 0, 6)
        pair = SplitLoopPair(*(
            sample_element(family, n, s, scale, basis).matrix for s in streams
        ))
        a, b = pair.a, pair.b
        trace_dev = max(
            abs(np.trace(a) - np.trace(pair.monodromy1)),
            abs(np.trace(b) - np.trace(pair.monodromy2)),
        )
        res_a = membership_residual(family, basis.n, a)
        res_b = membership_residual(family, basis.n, b)
        lhs, rhs = bracket_sides(
            family,
            GroupElement(family, basis.n, a, res_a),
            GroupElement(family, basis.n, b, res_b),
            gamma,
        )
        bracket_dev = abs(lhs - rhs)
        worst = max(trace_dev, bracket_dev)
    return VerificationReport(
        check="split-harness",
        params={"group": family.value, "n": basis.n},
        seed=seed,
        trials=1,
        max_abs_err=worst,
        max_rel_err=worst / max(abs(rhs), 1e-12),
        passed=worst < abs_tol,
        elapsed_ms=clock.ms,
    )
