"""Convex geometry of the set of Wigner-positive states.

The central construction is the boundary map: given a strictly
Wigner-positive reference ``rho0`` (the vacuum by default) and any state
``rho1``, the segment ``[rho0, rho1]`` leaves the Wigner-positive set at

    t0 = 1 / (1 - k0),   k0 = min(0, inf_z W_rho1(z) / W_rho0(z)),

and ``rho_plus = (1 - t0) rho0 + t0 rho1`` is the unique state on the
segment whose Wigner function touches zero. With the vacuum as reference
the ratio ``W_rho1 / W_rho0`` is exactly the Wigner polynomial of ``rho1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fock
from .exceptions import ContractError, PreconditionError
from .positivity import (
    EPS_ZERO,
    GRID,
    NEGATIVE,
    NODAL,
    STRICTLY_POSITIVE,
    certify_polynomial,
    certify_segment,
    polynomial_zeros,
    ratio_min,
    search_radius,
)
from .wigner import PhasePoint, WignerPolynomial, wigner_polynomial

INTERIOR_POSITIVE = "interior_positive"
NOT_POSITIVE = "not_positive"
_LABELS = {STRICTLY_POSITIVE: INTERIOR_POSITIVE, NODAL: NODAL, NEGATIVE: NOT_POSITIVE}

MAX_FACE_ZEROS = 64
SV_THRESHOLD = 1e-8


@dataclass(frozen=True)
class BoundaryResult:
    k0: float
    t0: float
    rho_plus: np.ndarray
    witness: PhasePoint
    reference: np.ndarray

    def to_dict(self) -> dict:
        return {
            "k0": self.k0,
            "t0": self.t0,
            "witness": [self.witness.x, self.witness.xi],
            "rho_plus": fock.to_json_dict(self.rho_plus),
        }


def _is_vacuum(rho, tol: float = 1e-12) -> bool:
    R = np.asarray(rho)
    return bool(np.max(np.abs(R - fock.vacuum(R.shape[0]))) <= tol)


def _prepare(rho1, rho0):
    rho1 = fock.density_matrix(rho1)
    if rho0 is None:
        rho0 = fock.vacuum(rho1.shape[0])
    else:
        rho0 = fock.density_matrix(rho0)
        rho1, rho0 = fock.pad_common(rho1, rho0)
    return rho1, rho0


def _reference_polynomial(rho0, grid: int, eps_zero: float) -> WignerPolynomial:
    Q0 = wigner_polynomial(rho0)
    cert = certify_polynomial(Q0, grid, eps_zero)
    if cert.verdict != STRICTLY_POSITIVE:
        raise PreconditionError(
            f"reference state must be strictly Wigner-positive (verdict {cert.verdict})")
    return Q0


def k_zero(rho1, rho0=None, grid: int = GRID,
           eps_zero: float = EPS_ZERO) -> tuple[float, PhasePoint]:
    """Clamped minimum ``k0`` of ``W_rho1 / W_rho0`` and the point attaining it.

    Inputs certified as Wigner-positive (verdict outside ``negative``) give
    ``k0 = 0`` exactly.
    """
    rho1, rho0 = _prepare(rho1, rho0)
    Q1 = wigner_polynomial(rho1)
    cert1 = certify_polynomial(Q1, grid, eps_zero)
    if _is_vacuum(rho0):
        if cert1.verdict != NEGATIVE:
            return 0.0, cert1.argmin
        return min(0.0, cert1.min_value), cert1.argmin
    Q0 = _reference_polynomial(rho0, grid, eps_zero)
    if cert1.verdict != NEGATIVE:
        return 0.0, cert1.argmin
    # the ratio is negative only inside the negative region of rho1
    best = ratio_min(Q1, Q0, search_radius(Q1, floor=0.0), grid)
    return min(0.0, best.value), best.argmin


def boundary_state(rho1, rho0=None, grid: int = GRID,
                   eps_zero: float = EPS_ZERO) -> BoundaryResult:
    """Boundary map: the last Wigner-positive state on ``[rho0, rho1]``.

    Returns ``rho1`` itself (``t0 = 1``) when ``rho1`` is already
    Wigner-positive.
    """
    rho1, rho0 = _prepare(rho1, rho0)
    k0, witness = k_zero(rho1, rho0, grid, eps_zero)
    if k0 == 0.0:
        return BoundaryResult(0.0, 1.0, rho1, witness, rho0)
    t0 = 1.0 / (1.0 - k0)
    rho_plus = fock.density_matrix(fock.combine(rho0, rho1, t0))
    return BoundaryResult(k0, t0, rho_plus, witness, rho0)


@dataclass(frozen=True)
class SegmentClassification:
    t_values: np.ndarray
    labels: list
    crossing_t: float
    min_values: np.ndarray

    @property
    def straddling_cells(self) -> list[int]:
        """Indices ``i`` where the label leaves ``interior_positive`` between ``t_i`` and ``t_{i+1}``."""
        return [i for i in range(len(self.labels) - 1)
                if self.labels[i] == INTERIOR_POSITIVE and self.labels[i + 1] != INTERIOR_POSITIVE]

    @property
    def monotone(self) -> bool:
        """Positive labels first, at most one nodal label, then non-positive ones."""
        rank = {INTERIOR_POSITIVE: 0, NODAL: 1, NOT_POSITIVE: 2}
        r = [rank[lab] for lab in self.labels]
        return all(a <= b for a, b in zip(r, r[1:])) and r.count(1) <= 1


def classify_segment(rho0, rho1, t_grid: Sequence[float], grid: int = GRID,
                     eps_zero: float = EPS_ZERO) -> SegmentClassification:
    """Certify every state ``(1 - t) rho0 + t rho1`` for ``t`` in ``t_grid``."""
    rho1, rho0 = fock.pad_common(fock.density_matrix(rho1), fock.density_matrix(rho0))
    Q0 = _reference_polynomial(rho0, grid, eps_zero)
    Q1 = wigner_polynomial(rho1)
    ts = np.asarray(t_grid, dtype=float)
    if np.any((ts < 0) | (ts > 1)):
        raise ContractError("segment parameters must lie in [0, 1]")

    certs = certify_segment(Q0, Q1, ts, grid, eps_zero)
    crossing = boundary_state(rho1, rho0, grid, eps_zero).t0
    return SegmentClassification(
        t_values=ts,
        labels=[_LABELS[c.verdict] for c in certs],
        crossing_t=crossing,
        min_values=np.array([c.min_value for c in certs]),
    )


def _ambient_basis(rho: np.ndarray, ambient) -> tuple[np.ndarray, np.ndarray]:
    """State (zero-padded if needed) and an orthonormal basis of the ambient space."""
    dim = rho.shape[0]
    if ambient is None:
        return rho, np.eye(dim, dtype=complex)
    if np.isscalar(ambient):
        k = int(ambient)
        if k < 1:
            raise ContractError(f"ambient dimension must be >= 1, got {k}")
        if k > dim:
            rho, dim = fock.pad(rho, k), k
        return rho, np.eye(dim, dtype=complex)[:k]
    basis = np.atleast_2d(np.asarray(ambient, dtype=complex))
    if basis.shape[1] > dim:
        rho = fock.pad(rho, basis.shape[1])
    return rho, basis


def _membership_facts(rho, ambient, grid, eps_zero, eps_rank):
    rho, basis = _ambient_basis(fock.density_matrix(rho), ambient)
    if abs(fock.subspace_support(rho, basis) - 1.0) > 1e-9:
        raise ContractError("state is not supported on the ambient space")
    full = fock.rank(rho, eps_rank) == basis.shape[0]
    cert = certify_polynomial(wigner_polynomial(rho), grid, eps_zero)
    return full, cert.verdict


def interior_membership(rho, ambient=None, grid: int = GRID, eps_zero: float = EPS_ZERO,
                        eps_rank: float = fock.EPS_RANK) -> str:
    """``interior``, ``boundary`` or ``exterior`` relative to the Wigner-positive set.

    ``ambient`` is the dimension of the leading Fock block (default: the
    state's own dimension) or an explicit orthonormal basis. A state is
    interior exactly when it has full rank on the ambient space and a
    strictly positive Wigner function.
    """
    full, verdict = _membership_facts(rho, ambient, grid, eps_zero, eps_rank)
    if verdict == NEGATIVE:
        return "exterior"
    return "interior" if full and verdict == STRICTLY_POSITIVE else "boundary"


def boundary_classification(rho, ambient=None, grid: int = GRID, eps_zero: float = EPS_ZERO,
                            eps_rank: float = fock.EPS_RANK) -> str:
    """Which part of the relative boundary a state lies on.

    ``nodal_interior_of_D``: full rank and nodal; ``boundary_of_D``: rank
    deficient with strictly positive Wigner function; ``both``: rank
    deficient and nodal; ``not_in_D_plus`` for states with negativity and
    ``interior`` for interior points.
    """
    full, verdict = _membership_facts(rho, ambient, grid, eps_zero, eps_rank)
    if verdict == NEGATIVE:
        return "not_in_D_plus"
    if verdict == NODAL:
        return "nodal_interior_of_D" if full else "both"
    return "interior" if full else "boundary_of_D"


@dataclass(frozen=True)
class Decomposition:
    rho_plus: np.ndarray
    s: float
    reference: np.ndarray
    residual: float

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "t0": 1.0 / (1.0 + self.s),
            "residual": self.residual,
            "rho_plus": fock.to_json_dict(self.rho_plus),
            "reference": fock.to_json_dict(self.reference),
        }


def affine_generator_decomposition(rho, rho0=None, grid: int = GRID,
                                   eps_zero: float = EPS_ZERO) -> Decomposition:
    """Write a non-Wigner-positive ``rho`` as ``(1 + s) rho_plus - s rho0``, ``s > 0``."""
    rho, ref = _prepare(rho, rho0)
    res = boundary_state(rho, ref, grid, eps_zero)
    if res.k0 == 0.0:
        raise PreconditionError("state is Wigner-positive; no affine decomposition with s > 0")
    s = 1.0 / res.t0 - 1.0
    recon = (1.0 + s) * res.rho_plus - s * ref
    return Decomposition(res.rho_plus, s, ref, float(np.max(np.abs(recon - rho))))


def _require_positive(rho, grid, eps_zero) -> WignerPolynomial:
    Q = wigner_polynomial(fock.density_matrix(rho))
    if certify_polynomial(Q, grid, eps_zero).verdict == NEGATIVE:
        raise PreconditionError("state is not Wigner-positive")
    return Q


def face_membership(rho, points: Sequence, grid: int = GRID,
                    eps_zero: float = EPS_ZERO) -> bool:
    """True when the Wigner function of ``rho`` vanishes at every point given."""
    Q = _require_positive(rho, grid, eps_zero)
    tol = eps_zero * Q.scale
    return all(abs(float(Q(*z))) <= tol for z in points)


@dataclass(frozen=True)
class ExtremeReport:
    is_vacuum: bool
    nodal_nonempty: bool
    tangent_face_dim: int
    candidate: bool
    zeros_used: int


def hermitian_basis(r: int) -> list[np.ndarray]:
    """Real basis of the ``r^2``-dimensional space of ``r x r`` Hermitian matrices."""
    out = []
    for i in range(r):
        E = np.zeros((r, r), dtype=complex)
        E[i, i] = 1.0
        out.append(E)
    for i in range(r):
        for j in range(i + 1, r):
            E = np.zeros((r, r), dtype=complex)
            E[i, j] = E[j, i] = 1.0
            out.append(E)
            E = np.zeros((r, r), dtype=complex)
            E[i, j], E[j, i] = -1j, 1j
            out.append(E)
    return out


def tangent_constraints(rho, zeros: Sequence, eps_rank: float = fock.EPS_RANK,
                        gradients: bool = True) -> np.ndarray:
    """Linear system whose solutions are the directions of the face through ``rho``.

    Unknowns are real coordinates of a Hermitian ``X`` on the range of
    ``rho``; the direction is ``sigma = V X V^dag``. Rows impose
    ``tr sigma = 0`` and, at every zero, ``W_sigma = 0`` and (optionally)
    ``grad W_sigma = 0``.
    """
    rho = fock.density_matrix(rho)
    dec = fock.spectral(rho)
    V = dec.eigenvectors[:, dec.eigenvalues > eps_rank]
    pts = np.array([[z[0] for z in zeros], [z[1] for z in zeros]], dtype=float)
    cols = []
    for E in hermitian_basis(V.shape[1]):
        sigma = V @ E @ V.conj().T
        col = [np.trace(sigma).real]
        if len(zeros):
            Q = wigner_polynomial(0.5 * (sigma + sigma.conj().T))
            f, g, _ = Q.value_grad_hess(pts[0], pts[1])
            col.extend(f)
            if gradients:
                col.extend(g.ravel())
        cols.append(col)
    return np.array(cols, dtype=float).T


def _subsample(zeros: list, k: int) -> list:
    if len(zeros) <= k:
        return list(zeros)
    idx = np.linspace(0, len(zeros) - 1, k).round().astype(int)
    return [zeros[i] for i in idx]


def extreme_candidate_check(rho, grid: int = GRID, eps_zero: float = EPS_ZERO,
                            eps_rank: float = fock.EPS_RANK,
                            sv_threshold: float = SV_THRESHOLD) -> ExtremeReport:
    """Necessary condition for extremality plus a tangent-dimension heuristic.

    Extreme points of the Wigner-positive set are the vacuum or have
    nonempty nodal sets. ``tangent_face_dim`` is the numerical nullity of
    :func:`tangent_constraints` at up to 64 sampled zeros; 0 is consistent
    with (but does not prove) extremality.
    """
    Q = _require_positive(rho, grid, eps_zero)
    rho = fock.density_matrix(rho)
    zeros = polynomial_zeros(Q, grid, eps_zero).zeros
    used = _subsample(zeros, MAX_FACE_ZEROS)
    M = tangent_constraints(rho, used, eps_rank)
    s = np.linalg.svd(M, compute_uv=False)
    nullity = M.shape[1] - int(np.sum(s > sv_threshold * s.max())) if s.size else M.shape[1]
    vac = _is_vacuum(rho, 1e-10)
    return ExtremeReport(
        is_vacuum=vac,
        nodal_nonempty=bool(zeros),
        tangent_face_dim=int(nullity),
        candidate=vac or bool(zeros),
        zeros_used=len(used),
    )
