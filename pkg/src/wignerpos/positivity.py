"""Global minimisation of Wigner polynomials and Wigner-positivity verdicts.

For a state with finite Fock support the sign of the Wigner function is the
sign of its polynomial part ``Q``. ``Q`` grows like ``r^(2N)`` so its negative
region is bounded; :func:`search_radius` produces a disk outside of which
``Q`` provably exceeds a floor, and :func:`global_min` scans that disk on a
grid and polishes the best cells with a damped Newton iteration.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from ._parallel import pmap
from .exceptions import ContractError
from .fock import density_matrix
from .wigner import PhasePoint, WignerPolynomial, wigner_polynomial

EPS_ZERO = 1e-7
R_MIN = 4.0
GRID = 801
N_STARTS = 32
NEWTON_ITERS = 50
ZERO_MERGE_DIST = 1e-3
MAX_NODAL_STARTS = 256
_THETA_SAMPLES = 1 << 14
_MAX_HALVINGS = 40
_HALVING_BATCH = 10

STRICTLY_POSITIVE = "strictly_positive"
NODAL = "nodal"
NEGATIVE = "negative"


@lru_cache(maxsize=16)
def _circle_powers(n: int) -> np.ndarray:
    """``T[j, l, s] = cos(theta_s)^j sin(theta_s)^l`` on a uniform angle grid."""
    theta = (np.arange(_THETA_SAMPLES) + 0.5) * (2 * np.pi / _THETA_SAMPLES)
    C = P.polyvander(np.cos(theta), n - 1).T
    S = P.polyvander(np.sin(theta), n - 1).T
    return C[:, None, :] * S[None, :, :]


def _degree_lower_bounds(Q: WignerPolynomial) -> np.ndarray:
    """``m[k] <= min over the unit circle of the degree-k homogeneous part``.

    The minimum is taken over a dense angle sample and lowered by a Lipschitz
    margin so that it stays a valid lower bound between samples.
    """
    c = Q.coeffs
    n = c.shape[0]
    T = _circle_powers(n)
    deg = np.add.outer(np.arange(n), np.arange(n))
    m = np.zeros(2 * n - 1)
    for k in range(2 * n - 1):
        mask = (deg == k) & (c != 0)
        if not mask.any():
            continue
        if k == 0:
            m[0] = c[0, 0]
            continue
        H = np.tensordot(c[mask], T[mask], axes=(0, 0))
        m[k] = H.min() - k * np.abs(c[mask]).sum() * (np.pi / _THETA_SAMPLES)
    return m


def search_radius(Q: WignerPolynomial, floor: float = 0.0, r_min: float = R_MIN,
                  eps: float = 1e-12) -> float:
    """Radius ``R >= r_min`` with ``Q(z) > floor`` whenever ``|z| >= R``.

    Uses the radial lower bound ``Q(r, theta) >= sum_k m_k r^k`` where ``m_k``
    bounds each homogeneous part from below on the unit circle. A top degree
    whose bound is not clearly positive (weight ``<= eps * scale``) is
    treated as numerically empty and dropped before bounding.
    """
    if not np.any(Q.coeffs):
        raise ContractError("search radius is undefined for the zero polynomial")
    m = _degree_lower_bounds(Q)
    d = int(np.max(np.nonzero(m)[0], initial=0))
    while d > 0 and m[d] <= eps * Q.scale:
        d -= 1
    if d == 0:
        return float(r_min)
    g = m[:d + 1].copy()
    g[0] -= floor
    roots = np.roots(g[::-1])
    real = roots[np.abs(roots.imag) <= 1e-9 * (1 + np.abs(roots))].real
    pos = [float(x) for x in real if x > 0]
    r = max([r_min] + [x * (1 + 1e-9) + 1e-12 for x in pos])

    def lower(rad):
        return np.polynomial.polynomial.polyval(rad, g)

    while lower(r) <= 0:
        r *= 1.01
    return float(r)


@dataclass(frozen=True)
class Minimum:
    value: float
    argmin: PhasePoint
    refinements: int


@lru_cache(maxsize=32)
def _disk_mask(n: int, half_width: float, R: float) -> np.ndarray:
    xs = np.linspace(-half_width, half_width, n)
    mask = xs[:, None] ** 2 + xs[None, :] ** 2 <= R * R
    mask.setflags(write=False)
    return mask


_local = threading.local()


def _scratch(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-thread float32 work arrays for the minimum filter, reused between calls."""
    buf = getattr(_local, "buf", None)
    if buf is None or buf[2].shape[0] != n:
        buf = (np.empty((n + 2, n + 2), np.float32), np.empty((n + 2, n), np.float32),
               np.empty((n, n), np.float32))
        _local.buf = buf
    return buf


def _scratch_grid(n: int) -> np.ndarray:
    G = getattr(_local, "grid", None)
    if G is None or G.shape[0] != n:
        G = _local.grid = np.empty((n, n))
    return G


def _disk_candidates(G: np.ndarray, xs: np.ndarray, R: float, k: int) -> np.ndarray:
    """Up to ``k`` lowest discrete local minima of ``G`` inside the disk.

    The 3x3 neighbourhood test runs on a float32 copy. Rounding is monotone,
    so every local minimum of ``G`` is still flagged (ties can add extra
    flags); candidates are then ranked by their float64 values with ties
    broken by row-major index.
    """
    n = len(xs)
    inside = _disk_mask(n, float(xs[-1]), R)
    Gp, rows, win = _scratch(n)
    Gp.fill(np.inf)
    Gm = Gp[1:-1, 1:-1]
    with np.errstate(over="ignore"):
        np.copyto(Gm, G, where=inside, casting="same_kind")
    # separable 3x3 minimum filter: rows then columns
    np.minimum(Gp[:, :-2], Gp[:, 1:-1], out=rows)
    np.minimum(rows, Gp[:, 2:], out=rows)
    np.minimum(rows[:-2], rows[1:-1], out=win)
    np.minimum(win, rows[2:], out=win)
    i, j = np.nonzero(inside & (Gm <= win))
    if i.size == 0:
        i, j = np.unravel_index([int(np.argmin(np.where(inside, G, np.inf)))], G.shape)
    order = np.argsort(G[i, j], kind="stable")[:k]
    return np.column_stack([xs[i[order]], xs[j[order]]])


def _newton_refine(value: Callable, vgh: Callable, z: np.ndarray, R: float,
                   iters: int = NEWTON_ITERS) -> tuple[np.ndarray, np.ndarray]:
    """Damped saddle-free Newton descent from each row of ``z``, kept in the disk.

    Steps are halved until the value does not increase; a point whose step
    cannot be accepted stays where it is, so the result is never worse than
    the start.
    """
    z = np.array(z, dtype=float)
    f, g, H = vgh(z)
    active = np.ones(len(z), dtype=bool)
    for _ in range(iters):
        if not active.any():
            break
        w, V = np.linalg.eigh(H[active])
        wmax = np.max(np.abs(w), axis=1, keepdims=True)
        w = np.maximum(np.abs(w), 1e-12 * np.maximum(wmax, 1.0))
        coef = np.einsum("kji,kj->ki", V, g[active]) / w
        step = -np.einsum("kij,kj->ki", V, coef)
        za, fa = z[active], f[active]
        lam = np.zeros(len(za))
        accepted = np.zeros(len(za), dtype=bool)
        # try step lengths 2^-k for a batch of k at once; keep the longest acceptable one
        for first in range(0, _MAX_HALVINGS, _HALVING_BATCH):
            todo = np.flatnonzero(~accepted)
            if todo.size == 0:
                break
            lams = 0.5 ** np.arange(first, first + _HALVING_BATCH)
            cand = za[todo, None, :] + lams[None, :, None] * step[todo, None, :]
            fc = value(cand.reshape(-1, 2)).reshape(len(todo), -1)
            ok = (np.einsum("kbi,kbi->kb", cand, cand) <= R * R) & (fc <= fa[todo, None])
            hit = ok.any(axis=1)
            sel = todo[hit]
            accepted[sel] = True
            lam[sel] = lams[np.argmax(ok[hit], axis=1)]
        moved = accepted & (lam * np.linalg.norm(step, axis=1) > 1e-15 * (1 + np.linalg.norm(za, axis=1)))
        new_z = np.where(accepted[:, None], za + lam[:, None] * step, za)
        idx = np.flatnonzero(active)
        z[idx] = new_z
        fn, gn, Hn = vgh(new_z)
        f[idx], g[idx], H[idx] = fn, gn, Hn
        active[idx[~moved]] = False
    return z, f


def minimize_on_disk(value: Callable, vgh: Callable, grid_fn: Callable, R: float,
                     grid: int = GRID, starts: int = N_STARTS,
                     grid_values: np.ndarray | None = None) -> Minimum:
    """Multistart minimum of a smooth function over the disk ``|z| <= R``.

    ``grid_fn(xs)`` returns values on ``xs x xs``; ``value(z)`` and
    ``vgh(z)`` act on ``(k, 2)`` arrays of points, ``vgh`` returning value,
    gradient ``(k, 2)`` and Hessian ``(k, 2, 2)``. Precomputed scan values
    on ``linspace(-R, R, grid)`` may be passed as ``grid_values``.
    """
    xs = np.linspace(-R, R, grid)
    G = grid_fn(xs) if grid_values is None else grid_values
    z0 = _disk_candidates(G, xs, R, starts)
    z, f = _newton_refine(value, vgh, z0, R)
    best = int(np.argmin(f))
    zb = z[best]
    return Minimum(float(value(zb[None, :])[0]), PhasePoint(float(zb[0]), float(zb[1])), len(z0))


def _poly_fns(Q: WignerPolynomial):
    def value(z):
        return Q.values(z[:, 0], z[:, 1])

    def vgh(z):
        return Q.value_grad_hess(z[:, 0], z[:, 1])

    return value, vgh, (lambda xs: Q.grid(xs, xs))


def global_min(Q: WignerPolynomial, R: float, grid: int = GRID,
               starts: int = N_STARTS) -> Minimum:
    """Minimum of ``Q`` over the disk of radius ``R``."""
    if R <= 0:
        raise ContractError("search radius must be positive")
    value, vgh, grid_fn = _poly_fns(Q)
    return minimize_on_disk(value, vgh, grid_fn, R, grid, starts)


def ratio_min(Q1: WignerPolynomial, Q0: WignerPolynomial, R: float, grid: int = GRID,
              starts: int = N_STARTS) -> Minimum:
    """Minimum of ``Q1 / Q0`` over the disk of radius ``R``; ``Q0 > 0`` required."""
    v1, vgh1, g1 = _poly_fns(Q1)
    v0, vgh0, g0 = _poly_fns(Q0)

    def value(z):
        return v1(z) / v0(z)

    def vgh(z):
        a, ga, Ha = vgh1(z)
        b, gb, Hb = vgh0(z)
        f = a / b
        gf = (ga - f[:, None] * gb) / b[:, None]
        Hf = (Ha - np.einsum("ki,kj->kij", gf, gb) - np.einsum("ki,kj->kij", gb, gf)
              - f[:, None, None] * Hb) / b[:, None, None]
        return f, gf, Hf

    return minimize_on_disk(value, vgh, lambda xs: g1(xs) / g0(xs), R, grid, starts)


def verdict_for(value: float, tol: float) -> str:
    if value < -tol:
        return NEGATIVE
    if value > tol:
        return STRICTLY_POSITIVE
    return NODAL


@dataclass(frozen=True)
class PositivityCertificate:
    """Outcome of the global minimisation of a Wigner polynomial.

    ``tolerance`` is the absolute width of the zero band, ``eps_zero * scale``.
    """

    min_value: float
    argmin: PhasePoint
    search_radius: float
    grid_resolution: int
    refinement_steps: int
    verdict: str
    tolerance: float = field(default=EPS_ZERO)

    @property
    def wigner_positive(self) -> bool:
        return self.verdict != NEGATIVE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "min_value": self.min_value,
            "argmin": [self.argmin.x, self.argmin.xi],
            "search_radius": self.search_radius,
            "grid": self.grid_resolution,
            "refinements": self.refinement_steps,
        }


def certify_polynomial(Q: WignerPolynomial, grid: int = GRID, eps_zero: float = EPS_ZERO,
                       radius: float | None = None) -> PositivityCertificate:
    tol = eps_zero * Q.scale
    R = search_radius(Q, floor=tol) if radius is None else float(radius)
    best = global_min(Q, R, grid)
    return PositivityCertificate(
        min_value=best.value,
        argmin=best.argmin,
        search_radius=R,
        grid_resolution=grid,
        refinement_steps=best.refinements,
        verdict=verdict_for(best.value, tol),
        tolerance=tol,
    )


def certify_segment(Q0: WignerPolynomial, Q1: WignerPolynomial, ts, grid: int = GRID,
                    eps_zero: float = EPS_ZERO) -> list[PositivityCertificate]:
    """Certificates for every ``(1 - t) Q0 + t Q1``, ``t`` in ``ts`` within ``[0, 1]``.

    One radius serves the whole segment: beyond the larger of the two
    endpoint radii (taken at the widest zero band) both endpoints, and hence
    every convex combination, exceed the band. The scan grid is then linear
    in ``t`` and is formed from two endpoint scans.
    """
    if Q0.coeffs.shape != Q1.coeffs.shape:
        raise ContractError("segment endpoints must have the same dimension")
    tol_max = eps_zero * max(Q0.scale, Q1.scale)
    R = max(search_radius(Q0, floor=tol_max), search_radius(Q1, floor=tol_max))
    xs = np.linspace(-R, R, grid)
    G0 = Q0.grid(xs, xs)
    dG = Q1.grid(xs, xs) - G0

    def one(t: float) -> PositivityCertificate:
        Qt = WignerPolynomial(Q0.dim, (1.0 - t) * Q0.coeffs + t * Q1.coeffs)
        G = _scratch_grid(grid)
        np.multiply(dG, t, out=G)
        G += G0
        value, vgh, grid_fn = _poly_fns(Qt)
        best = minimize_on_disk(value, vgh, grid_fn, R, grid, grid_values=G)
        tol = eps_zero * Qt.scale
        return PositivityCertificate(best.value, best.argmin, R, grid, best.refinements,
                                     verdict_for(best.value, tol), tol)

    return pmap(one, [float(t) for t in ts])


def is_wigner_positive(rho, grid: int = GRID, eps_zero: float = EPS_ZERO,
                       radius: float | None = None) -> PositivityCertificate:
    """Certificate for ``W_rho >= 0`` with a tolerance-banded verdict."""
    return certify_polynomial(wigner_polynomial(density_matrix(rho)), grid, eps_zero, radius)


@dataclass(frozen=True)
class NodalReport:
    zeros: list = field(default_factory=list)
    tolerance: float = 0.0

    @property
    def empty(self) -> bool:
        return not self.zeros


def polynomial_zeros(Q: WignerPolynomial, grid: int = GRID, eps_zero: float = EPS_ZERO,
                     max_starts: int = MAX_NODAL_STARTS,
                     merge_dist: float = ZERO_MERGE_DIST) -> NodalReport:
    """Near-zero local minima of ``Q``, merged when closer than ``merge_dist``.

    For a Wigner-positive state these are the points of the nodal set; a
    nodal curve shows up as a chain of samples along it. For states with
    negative regions only the near-zero local minima are found, not the
    full zero curve.
    """
    tol = eps_zero * Q.scale
    R = search_radius(Q, floor=tol)
    value, vgh, grid_fn = _poly_fns(Q)
    xs = np.linspace(-R, R, grid)
    z0 = _disk_candidates(grid_fn(xs), xs, R, max_starts)
    z, f = _newton_refine(value, vgh, z0, R)
    kept: list[np.ndarray] = []
    for zi, fi in zip(z, f):
        if abs(fi) <= tol and all(np.hypot(*(zi - k)) > merge_dist for k in kept):
            kept.append(zi)
    return NodalReport([PhasePoint(float(a), float(b)) for a, b in kept], tol)


def nodal_set(rho, grid: int = GRID, eps_zero: float = EPS_ZERO) -> NodalReport:
    """Sampled nodal set of ``W_rho`` (meaningful for Wigner-positive states)."""
    return polynomial_zeros(wigner_polynomial(density_matrix(rho)), grid, eps_zero)


def negative_region_bound(rho) -> float:
    """Radius of a disk containing the negative region of ``W_rho``."""
    return search_radius(wigner_polynomial(density_matrix(rho)), floor=0.0)
