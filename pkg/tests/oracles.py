"""Independent reference computations used by the test-suite.

Nothing here calls the package's eigensolver, Laguerre recurrence or
minimiser; each oracle takes a different numerical route to the same
quantity.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize, special


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_state(gen: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    G = gen.normal(size=(dim, rank)) + 1j * gen.normal(size=(dim, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_vector(gen: np.random.Generator, dim: int) -> np.ndarray:
    v = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(gen: np.random.Generator, dim: int) -> np.ndarray:
    Z = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
    Qm, R = np.linalg.qr(Z)
    return Qm * (np.diag(R) / np.abs(np.diag(R)))


def random_hermitian(gen: np.random.Generator, dim: int) -> np.ndarray:
    Z = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
    return 0.5 * (Z + Z.conj().T)


# eigenvalues ---------------------------------------------------------------

def charpoly_eigenvalues(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix as roots of its characteristic polynomial.

    Coefficients come from the Faddeev-LeVerrier recursion; roots from the
    companion matrix (``np.roots``). Sorted descending, imaginary noise dropped.
    """
    n = A.shape[0]
    coeffs = [1.0 + 0j]
    M = np.zeros_like(A)
    for k in range(1, n + 1):
        M = A @ M + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(A @ M) / k)
    roots = np.roots(np.array(coeffs))
    return np.sort(roots.real)[::-1]


# special functions ---------------------------------------------------------

def laguerre_series(m: int, alpha: int, t: float) -> float:
    """``sum_k (-1)^k C(m + alpha, m - k) t^k / k!``."""
    return sum((-1) ** k * math.comb(m + alpha, m - k) * t ** k / math.factorial(k)
               for k in range(m + 1))


def wigner_mn_scipy(m: int, n: int, x, xi):
    """Closed form via scipy's Laguerre and exact factorials (any order of m, n)."""
    if m > n:
        return np.conj(wigner_mn_scipy(n, m, x, xi))
    x, xi = np.asarray(x, float), np.asarray(xi, float)
    r2 = x * x + xi * xi
    pref = (-1) ** m * math.sqrt(math.factorial(m) / math.factorial(n))
    z = math.sqrt(2) * (x + 1j * xi)
    return pref * z ** (n - m) * special.eval_genlaguerre(m, n - m, 2 * r2) * np.exp(-r2) / np.pi


def wigner_scipy(rho: np.ndarray, x, xi):
    """``W_rho = sum rho[m, n] W_{|m><n|}`` evaluated term by term."""
    d = rho.shape[0]
    out = 0
    for m in range(d):
        for n in range(d):
            if rho[m, n] != 0:
                out = out + rho[m, n] * wigner_mn_scipy(m, n, x, xi)
    return np.real(out)


# phase-space quadrature ----------------------------------------------------

def phase_space_integral(f, nodes: int = 60, scale: float = 1.0) -> float:
    """``int_{R^2} f(x, xi) exp(-(x^2 + xi^2)/scale^2)`` by tensor Gauss-Hermite."""
    u, w = np.polynomial.hermite.hermgauss(nodes)
    X, XI = np.meshgrid(scale * u, scale * u, indexing="ij")
    return float(np.sum(np.outer(w, w) * f(X, XI)) * scale * scale)


def overlap_by_quadrature(rho: np.ndarray, eta: np.ndarray, nodes: int = 60) -> float:
    """``2 pi int W_rho W_eta``; the weight exp(-2 r^2) is split off for the quadrature."""
    s = 1 / math.sqrt(2)

    def f(x, xi):
        g = np.exp(x * x + xi * xi)
        return wigner_scipy(rho, x, xi) * g * wigner_scipy(eta, x, xi) * g

    return 2 * math.pi * phase_space_integral(f, nodes, s)


def hermite_overlap(n: int, m: int, nodes: int = 80) -> float:
    """``int h_n h_m dx`` using scipy's physicists' Hermite polynomials."""
    u, w = np.polynomial.hermite.hermgauss(nodes)
    norm = 1 / math.sqrt(2.0 ** n * math.factorial(n) * 2.0 ** m * math.factorial(m) * math.pi)
    return float(np.sum(w * special.eval_hermite(n, u) * special.eval_hermite(m, u)) * norm)


# brute-force minimisation --------------------------------------------------

def brute_force_min(poly_coeffs: np.ndarray, R: float, grid: int = 3001,
                    polish: int = 6, block: int = 100) -> tuple[float, np.ndarray]:
    """Dense-grid minimum over the disk, polished by Nelder-Mead.

    The grid is split into ``block x block`` tiles and the lowest cells of
    the ``polish`` best tiles seed the local searches. Values come from a
    plain Vandermonde product and ``polyval2d`` of the coefficient table.
    """
    P = np.polynomial.polynomial
    c = np.asarray(poly_coeffs, float)
    xs = np.linspace(-R, R, grid)
    V = P.polyvander(xs, c.shape[0] - 1)
    G = V @ c @ P.polyvander(xs, c.shape[1] - 1).T
    G[xs[:, None] ** 2 + xs[None, :] ** 2 > R * R] = np.inf
    nb = -(-grid // block)
    Gp = np.full((nb * block, nb * block), np.inf)
    Gp[:grid, :grid] = G
    tiles = Gp.reshape(nb, block, nb, block).transpose(0, 2, 1, 3).reshape(nb * nb, -1)
    arg = np.argmin(tiles, axis=1)
    vals = tiles[np.arange(nb * nb), arg]
    best_tiles = np.argsort(vals)[:polish]

    def f(z):
        if z[0] ** 2 + z[1] ** 2 > R * R:
            return np.inf
        return float(P.polyval2d(z[0], z[1], c))

    h = xs[1] - xs[0]
    best_v, best_z = np.inf, None
    for t in best_tiles:
        if not np.isfinite(vals[t]):
            continue
        bi, bj = divmod(int(t), nb)
        ii, jj = divmod(int(arg[t]), block)
        z0 = np.array([xs[bi * block + ii], xs[bj * block + jj]])
        simplex = np.array([z0, z0 + [h, 0], z0 + [0, h]])
        res = optimize.minimize(f, z0, method="Nelder-Mead",
                                options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000,
                                         "initial_simplex": simplex})
        v, z = (res.fun, res.x) if res.fun <= vals[t] else (vals[t], z0)
        if v < best_v:
            best_v, best_z = v, z
    return float(best_v), best_z


def k0_two_level_pure(n: int, p: float) -> float:
    """``k0`` of the pure state ``sqrt(1-p)|0> + sqrt(p)|n>`` by 1-D minimisation.

    On the ray where ``cos(n theta) = -1`` the Wigner polynomial is
    ``(1-p) + p (-1)^n L_n(2r^2) - 2 sqrt(p(1-p)) sqrt(2^n/n!) r^n``; that
    direction minimises over theta for every r.
    """
    c = 2 * math.sqrt(max(p * (1 - p), 0.0)) * math.sqrt(2.0 ** n / math.factorial(n))

    def g(r):
        return (1 - p) + p * (-1) ** n * special.eval_laguerre(n, 2 * r * r) - c * r ** n

    rs = np.linspace(0, 6, 60001)
    vals = g(rs)
    i = int(np.argmin(vals))
    lo, hi = rs[max(i - 1, 0)], rs[min(i + 1, len(rs) - 1)]
    res = optimize.minimize_scalar(g, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-13})
    return min(0.0, float(min(res.fun, vals[i])))
