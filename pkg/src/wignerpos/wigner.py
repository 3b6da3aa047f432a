"""Wigner functions of Fock-basis operators.

Conventions: phase-space points are real pairs ``(x, xi)`` with hbar = 1; the
complex variable ``z = x + i xi`` is used internally. For ``m <= n``

    W_{|m><n|}(x, xi) = (1/pi) (-1)^m sqrt(m!/n!) (sqrt2 z)^(n-m)
                        L_m^(n-m)(2 r^2) exp(-r^2),

and ``W_{|n><m|}`` is its complex conjugate. A Hermitian matrix ``A`` has
``W_A = sum_{m,n} A[m, n] W_{|m><n|}``, so every Wigner function of a
finite Fock-support operator is ``(1/pi) exp(-r^2) Q(x, xi)`` for a real
polynomial ``Q`` of degree at most ``2 (dim - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from .exceptions import ContractError
from .fock import TOL_HERM, as_square_matrix, hermiticity_error


class PhasePoint(NamedTuple):
    x: float
    xi: float

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.xi)

    @property
    def theta(self) -> float:
        return math.atan2(self.xi, self.x)

    @classmethod
    def polar(cls, r: float, theta: float) -> "PhasePoint":
        return cls(r * math.cos(theta), r * math.sin(theta))


def laguerre(m: int, alpha: int, t):
    """Generalised Laguerre polynomial ``L_m^(alpha)(t)`` by three-term recurrence."""
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if m == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - t
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _laguerre_table(mmax: int, alpha: int, t: np.ndarray) -> list[np.ndarray]:
    """``[L_0^(alpha)(t), ..., L_mmax^(alpha)(t)]`` from one recurrence sweep."""
    out = [np.ones_like(t)]
    if mmax >= 1:
        out.append(1.0 + alpha - t)
    for k in range(1, mmax):
        out.append(((2 * k + 1 + alpha - t) * out[k] - (k + alpha) * out[k - 1]) / (k + 1))
    return out


def sqrt_factorial_ratio(m: int, n: int) -> float:
    """``sqrt(m!/n!)`` as a product of square roots (no factorial overflow)."""
    if m <= n:
        return math.prod(1.0 / math.sqrt(k) for k in range(m + 1, n + 1))
    return 1.0 / sqrt_factorial_ratio(n, m)


def wigner_mn(m: int, n: int, x, xi):
    """Wigner function of the operator ``|m><n|`` (complex unless ``m == n``)."""
    if m > n:
        return np.conj(wigner_mn(n, m, x, xi))
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    r2 = x * x + xi * xi
    z = x + 1j * xi
    val = ((-1) ** m * sqrt_factorial_ratio(m, n) * (math.sqrt(2) * z) ** (n - m)
           * laguerre(m, n - m, 2 * r2) * np.exp(-r2) / math.pi)
    return val if np.ndim(val) else complex(val)


def _check_hermitian(A) -> np.ndarray:
    A = as_square_matrix(A)
    if hermiticity_error(A) > TOL_HERM:
        raise ContractError("Wigner functions are computed for Hermitian matrices only")
    return A


def wigner_eval(A, x, xi):
    """Wigner function of the Hermitian matrix ``A`` at ``(x, xi)``.

    ``x`` and ``xi`` may be arrays (broadcast together). Evaluation goes
    through the Laguerre recurrence directly, so it stays accurate at large
    truncation dimensions where the monomial form would not.
    """
    A = _check_hermitian(A)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    x, xi = np.broadcast_arrays(x, xi)
    r2 = x * x + xi * xi
    t = 2.0 * r2
    w = math.sqrt(2) * (x + 1j * xi)
    d = A.shape[0]
    total = np.zeros(x.shape, dtype=float)
    w_pow = np.ones(x.shape, dtype=complex)
    for alpha in range(d):
        L = _laguerre_table(d - 1 - alpha, alpha, t)
        acc = np.zeros(x.shape, dtype=complex)
        for m in range(d - alpha):
            c = A[m, m + alpha]
            if c != 0:
                acc += ((-1) ** m * sqrt_factorial_ratio(m, m + alpha) * c) * L[m]
        if alpha == 0:
            total += acc.real
        else:
            total += 2.0 * (acc * w_pow).real
        w_pow = w_pow * w
    out = total * np.exp(-r2) / math.pi
    return out if out.ndim else float(out)


def _polymul2d(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=np.result_type(a, b))
    for i, j in zip(*np.nonzero(a)):
        out[i:i + b.shape[0], j:j + b.shape[1]] += a[i, j] * b
    return out


@lru_cache(maxsize=None)
def _basis_poly(m: int, n: int) -> np.ndarray:
    """Complex coefficients of ``pi exp(r^2) W_{|m><n|}``, ``m <= n``.

    Entry ``[j, k]`` multiplies ``x^j xi^k``.
    """
    alpha = n - m
    # (x + i xi)^alpha
    zpow = np.zeros((alpha + 1, alpha + 1), dtype=complex)
    for j in range(alpha + 1):
        zpow[alpha - j, j] = math.comb(alpha, j) * (1j) ** j
    # L_m^(alpha)(2 r^2) = sum_k (-1)^k C(m+alpha, m-k) 2^k (x^2 + xi^2)^k / k!
    lag = np.zeros((2 * m + 1, 2 * m + 1))
    for k in range(m + 1):
        ck = (-1) ** k * math.comb(m + alpha, m - k) * 2.0 ** k / math.factorial(k)
        for i in range(k + 1):
            lag[2 * i, 2 * (k - i)] += ck * math.comb(k, i)
    pref = (-1) ** m * sqrt_factorial_ratio(m, n) * math.sqrt(2) ** alpha
    out = pref * _polymul2d(zpow, lag)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class WignerPolynomial:
    """Real polynomial ``Q`` with ``W(x, xi) = (1/pi) exp(-x^2 - xi^2) Q(x, xi)``.

    ``coeffs[j, k]`` multiplies ``x^j xi^k``; the table is square with side
    ``2 (dim - 1) + 1``.
    """

    dim: int
    coeffs: np.ndarray

    def __call__(self, x, xi):
        # same evaluation order as the minimizer, so certificates re-evaluate exactly
        x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        return self.values(x.ravel(), xi.ravel()).reshape(x.shape)[()]

    def grid(self, xs, xis) -> np.ndarray:
        """Values on the Cartesian grid, shape ``(len(xs), len(xis))``."""
        n = self.coeffs.shape[0]
        return _powers(xs, n) @ self.coeffs @ _powers(xis, n).T

    def wigner(self, x, xi):
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        return np.exp(-(x * x + xi * xi)) * self(x, xi) / math.pi

    @property
    def max_degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @cached_property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    @cached_property
    def scale(self) -> float:
        """``max(1, ||c||_1)``, the reference magnitude for zero tolerances."""
        return max(1.0, self.l1_norm)

    def homogeneous(self, k: int) -> list[tuple[int, int, float]]:
        """Terms ``(j, l, c)`` of total degree ``k``."""
        n = self.coeffs.shape[0]
        return [(j, k - j, float(self.coeffs[j, k - j]))
                for j in range(max(0, k - n + 1), min(k, n - 1) + 1)]

    def values(self, x, xi) -> np.ndarray:
        """``Q`` at the points ``(x[i], xi[i])`` of two 1-D arrays."""
        n = self.coeffs.shape[0]
        return np.einsum("ij,ij->i", _powers(x, n) @ self.coeffs, _powers(xi, n))

    def value_grad_hess(self, x, xi):
        """Value, gradient ``(k, 2)`` and Hessian ``(k, 2, 2)`` at 1-D point arrays."""
        Vx, dVx, d2Vx = _vander_derivs(np.asarray(x, dtype=float), self.coeffs.shape[0])
        Vy, dVy, d2Vy = _vander_derivs(np.asarray(xi, dtype=float), self.coeffs.shape[0])
        C = self.coeffs
        A0, A1, A2 = Vx @ C, dVx @ C, d2Vx @ C
        f = np.einsum("ij,ij->i", A0, Vy)
        gx = np.einsum("ij,ij->i", A1, Vy)
        gy = np.einsum("ij,ij->i", A0, dVy)
        hxx = np.einsum("ij,ij->i", A2, Vy)
        hxy = np.einsum("ij,ij->i", A1, dVy)
        hyy = np.einsum("ij,ij->i", A0, d2Vy)
        H = np.empty((len(f), 2, 2))
        H[:, 0, 0], H[:, 0, 1], H[:, 1, 0], H[:, 1, 1] = hxx, hxy, hxy, hyy
        return f, np.column_stack([gx, gy]), H

    def gradient(self, x, xi):
        _, g, _ = self.value_grad_hess(np.atleast_1d(x), np.atleast_1d(xi))
        return g[:, 0], g[:, 1]

    def hessian(self, x, xi):
        _, _, H = self.value_grad_hess(np.atleast_1d(x), np.atleast_1d(xi))
        return H[:, 0, 0], H[:, 0, 1], H[:, 1, 1]


def _powers(t, n: int) -> np.ndarray:
    """Vandermonde rows ``t^0 .. t^(n-1)`` by running products."""
    t = np.asarray(t, dtype=float).ravel()
    V = np.empty((t.size, n))
    V[:, 0] = 1.0
    if n > 1:
        V[:, 1:] = t[:, None]
        np.cumprod(V, axis=1, out=V)
    return V


def _vander_derivs(t: np.ndarray, n: int):
    """Rows ``t^j``, ``j t^(j-1)`` and ``j (j-1) t^(j-2)`` for ``j < n``."""
    V = _powers(t, n)
    j = np.arange(n)
    dV = np.zeros_like(V)
    d2V = np.zeros_like(V)
    if n > 1:
        dV[:, 1:] = V[:, :-1] * j[1:]
    if n > 2:
        d2V[:, 2:] = V[:, :-2] * (j[2:] * (j[2:] - 1))
    return V, dV, d2V


def wigner_polynomial(A, tol_imag: float = 1e-10) -> WignerPolynomial:
    """Exact monomial form of the Wigner function of a Hermitian matrix."""
    A = _check_hermitian(A)
    d = A.shape[0]
    size = 2 * (d - 1) + 1
    acc = np.zeros((size, size), dtype=complex)
    for m in range(d):
        for n in range(m, d):
            c = A[m, n]
            if c == 0:
                continue
            q = _basis_poly(m, n)
            block = c * q
            if n != m:
                # A[n, m] q_{nm} = conj(A[m, n] q_{mn})
                block = block + np.conj(block)
            acc[:q.shape[0], :q.shape[1]] += block
    resid = float(np.max(np.abs(acc.imag))) if acc.size else 0.0
    if resid > tol_imag * max(1.0, float(np.sum(np.abs(acc.real)))):
        raise ContractError(f"imaginary residue {resid:.3e} in Wigner polynomial")
    coeffs = np.ascontiguousarray(acc.real)
    coeffs.setflags(write=False)
    return WignerPolynomial(dim=d, coeffs=coeffs)


@dataclass(frozen=True)
class SymplecticMap:
    """Phase-space map ``z -> S (z - z0)`` with ``det S = 1``."""

    S: np.ndarray
    z0: PhasePoint = PhasePoint(0.0, 0.0)

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        if S.shape != (2, 2):
            raise ContractError("symplectic matrix must be 2x2")
        if abs(np.linalg.det(S) - 1.0) >= 1e-12:
            raise ContractError(f"det S = {np.linalg.det(S)!r}, not symplectic")
        S.setflags(write=False)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "z0", PhasePoint(*map(float, self.z0)))

    @classmethod
    def identity(cls) -> "SymplecticMap":
        return cls(np.eye(2))

    @classmethod
    def displacement(cls, x0: float, xi0: float) -> "SymplecticMap":
        return cls(np.eye(2), PhasePoint(x0, xi0))

    def __call__(self, x, xi):
        dx = np.asarray(x, dtype=float) - self.z0.x
        dxi = np.asarray(xi, dtype=float) - self.z0.xi
        S = self.S
        return S[0, 0] * dx + S[0, 1] * dxi, S[1, 0] * dx + S[1, 1] * dxi


def substitute_affine(coeffs, smap: SymplecticMap) -> np.ndarray:
    """Coefficients of ``z -> Q(S (z - z0))`` for a polynomial table ``coeffs``."""
    c = np.asarray(coeffs, dtype=float)
    S, (x0, xi0) = smap.S, smap.z0
    # u = S00 x + S01 xi - (S00 x0 + S01 xi0), likewise v
    u = np.array([[-(S[0, 0] * x0 + S[0, 1] * xi0), S[0, 1]], [S[0, 0], 0.0]])
    v = np.array([[-(S[1, 0] * x0 + S[1, 1] * xi0), S[1, 1]], [S[1, 0], 0.0]])
    n = c.shape[0]
    upow, vpow = [np.ones((1, 1))], [np.ones((1, 1))]
    for _ in range(1, n):
        upow.append(_polymul2d(upow[-1], u))
        vpow.append(_polymul2d(vpow[-1], v))
    out = np.zeros((2 * n - 1, 2 * n - 1))
    for j in range(n):
        for k in range(c.shape[1]):
            if c[j, k] != 0:
                term = c[j, k] * _polymul2d(upow[j], vpow[k])
                out[:term.shape[0], :term.shape[1]] += term
    size = max(n, c.shape[1])
    return out[:size, :size]


@dataclass(frozen=True)
class TransformedWigner:
    """Evaluator ``z -> W_A(S (z - z0))``."""

    A: np.ndarray
    smap: SymplecticMap

    def __call__(self, x, xi):
        return wigner_eval(self.A, *self.smap(x, xi))

    def polynomial_coeffs(self) -> np.ndarray:
        """Coefficients of ``Q_A(S (z - z0))``.

        The Gaussian factor becomes ``exp(-|S (z - z0)|^2)``, so the result is
        not itself a :class:`WignerPolynomial`.
        """
        return substitute_affine(wigner_polynomial(self.A).coeffs, self.smap)


def transform_evaluator(A, smap: SymplecticMap) -> TransformedWigner:
    return TransformedWigner(_check_hermitian(A), smap)


def displacement_matrix(alpha: complex, dim: int) -> np.ndarray:
    """Truncated Fock matrix ``<m|D(alpha)|n>``, ``m, n < dim``.

    ``D(alpha) = exp(alpha a^dag - conj(alpha) a)``. It shifts Wigner
    functions by ``z0 = sqrt2 (Re alpha, Im alpha)``. The truncated matrix is
    exact entrywise but only unitary in the limit ``dim -> inf``.
    """
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2
    D = np.zeros((dim, dim), dtype=complex)
    g = math.exp(-a2 / 2)
    for k in range(dim):
        L = _laguerre_table(dim - 1 - k, k, np.asarray(a2))
        for n in range(dim - k):
            m = n + k
            base = g * sqrt_factorial_ratio(n, m) * float(L[n])
            D[m, n] = base * alpha ** k
            if k:
                D[n, m] = base * (-alpha.conjugate()) ** k
    return D


def hermite_function(n: int, x):
    """Normalised Hermite function ``h_n(x)`` by recurrence on ``h_n`` itself."""
    x = np.asarray(x, dtype=float)
    h_prev = np.zeros_like(x)
    h = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    for k in range(n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * x * h - math.sqrt(k / (k + 1)) * h_prev
    return h if h.ndim else float(h)


def _wavefunction(coeffs, x):
    x = np.asarray(x, dtype=float)
    return sum(c * hermite_function(n, x) for n, c in enumerate(coeffs) if c != 0)


@lru_cache(maxsize=8)
def _gauss_hermite(nodes: int):
    return np.polynomial.hermite.hermgauss(nodes)


def cross_wigner_by_quadrature(psi, phi, x: float, xi: float, nodes: int = 64) -> complex:
    """Cross-Wigner function ``W(psi, phi)`` from its defining integral.

    With ``y = 2u`` the integrand carries the factor ``exp(-u^2)``, which is
    absorbed into Gauss-Hermite weights. Test oracle only.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    phi = np.asarray(phi, dtype=complex).ravel()
    u, w = _gauss_hermite(nodes)
    f = (np.exp(-2j * xi * u) * _wavefunction(psi, x + u)
         * np.conj(_wavefunction(phi, x - u)) * np.exp(u * u))
    return complex(np.sum(w * f) / math.pi)


def wigner_by_quadrature(psi, x: float, xi: float, nodes: int = 64) -> float:
    """Wigner function of the pure state ``psi`` (Fock coefficients) by quadrature."""
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return cross_wigner_by_quadrature(psi, psi, x, xi, nodes).real
