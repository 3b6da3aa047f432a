"""Parameterised state families and boundary sweeps.

Two families are provided:

* the two-level family on ``span{|0>, |n>}``

      rho(p, s) = (1 - p)|0><0| + p|n><n| + s|0><n| + conj(s)|n><0|,

  a state exactly when ``|s|^2 <= p (1 - p)``;
* the three-level cone with vertex ``|0><0|`` over the states supported
  on the plane orthogonal to ``v = bd|0> - ad|1> - bc|2>``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import fock
from ._parallel import pmap
from .exceptions import ContractError, DomainError
from .geometry import boundary_state, k_zero
from .positivity import EPS_ZERO, GRID

DOMAIN_TOL = 1e-12
HEADER_2D = ("p", "s", "t0", "p_plus", "s_plus")
HEADER_3D = ("p", "q", "t0")


def family_2d(n: int, p: float, s: complex = 0.0) -> np.ndarray:
    """State ``rho(p, s)`` on levels ``0`` and ``n`` (dimension ``n + 1``)."""
    if n < 1:
        raise ContractError(f"excited level must be >= 1, got {n}")
    if not -DOMAIN_TOL <= p <= 1 + DOMAIN_TOL:
        raise ContractError(f"p must lie in [0, 1], got {p}")
    if abs(s) ** 2 > p * (1 - p) + DOMAIN_TOL:
        raise ContractError(f"|s|^2 = {abs(s) ** 2:.6g} exceeds p(1-p) = {p * (1 - p):.6g}")
    rho = np.zeros((n + 1, n + 1), dtype=complex)
    rho[0, 0], rho[n, n] = 1 - p, p
    rho[0, n], rho[n, 0] = s, np.conj(s)
    return fock.density_matrix(rho)


def pure_s(p: float) -> float:
    """Real ``s >= 0`` putting ``rho(p, s)`` on the pure-state boundary."""
    return math.sqrt(max(p * (1.0 - p), 0.0))


def analytic_t0_2d(n: int, p: float) -> float:
    """Closed-form crossing parameter for the pure members of the family, ``n`` in {1, 2}."""
    if not 0 < p <= 1:
        raise ContractError(f"p must lie in (0, 1], got {p}")
    if n == 1:
        return 1.0 / (1.0 + p)
    if n == 2:
        return 1.0 / (1.0 + p + 2.0 * math.sqrt(2.0 * p * (1.0 - p)))
    raise NotImplementedError(f"no closed form for n = {n}; use boundary_state")


@dataclass(frozen=True)
class SweepTable:
    header: tuple
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.header.index(name)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.header) + "\n")
        for row in self.rows:
            buf.write(",".join("%.17g" % v for v in row) + "\n")
        return buf.getvalue()


def boundary_curve_2d(n: int, num_samples: int, grid: int = GRID,
                      eps_zero: float = EPS_ZERO) -> SweepTable:
    """Image under the boundary map of the pure states ``rho(p, sqrt(p(1-p)))``.

    ``p`` is uniform on ``[0, 1]``; columns are ``p, s, t0, t0 p, t0 s``.
    """
    if num_samples < 2:
        raise ContractError("num_samples must be >= 2")

    def row(p: float):
        s = pure_s(p)
        t0 = boundary_state(family_2d(n, p, s), grid=grid, eps_zero=eps_zero).t0
        return (p, s, t0, t0 * p, t0 * s)

    rows = pmap(row, np.linspace(0.0, 1.0, num_samples))
    return SweepTable(HEADER_2D, np.array(rows, dtype=float))


@dataclass(frozen=True)
class ConeSpec3D:
    """Cone ``conv({|0><0|} u D(<v>^perp))`` for ``v = bd|0> - ad|1> - bc|2>``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if self.b == 0 or self.d == 0:
            raise ContractError("cone parameters need b != 0 and d != 0")
        if abs(np.vdot(self.u, self.w)) > 1e-12:
            raise ContractError("u and w are not orthogonal; need a * c == 0")

    @property
    def u(self) -> np.ndarray:
        return np.array([self.a, self.b, 0.0], dtype=complex) / math.hypot(self.a, self.b)

    @property
    def w(self) -> np.ndarray:
        return np.array([self.c, 0.0, self.d], dtype=complex) / math.hypot(self.c, self.d)

    @property
    def v(self) -> np.ndarray:
        a, b, c, d = self.a, self.b, self.c, self.d
        return np.array([b * d, -a * d, -b * c], dtype=complex)

    @classmethod
    def parse(cls, text: str) -> "ConeSpec3D":
        parts = [float(t) for t in text.split(",")]
        if len(parts) != 4:
            raise ContractError(f"cone needs four numbers a,b,c,d, got {text!r}")
        return cls(*parts)


def family_3d(cone: ConeSpec3D, p: float, q: float, s: float = 0.0) -> np.ndarray:
    """``(1-p-q)|0><0| + q|u><u| + p|w><w| + s(|u><w| + |w><u|)`` (dimension 3)."""
    if p < -DOMAIN_TOL or q < -DOMAIN_TOL or p + q > 1 + DOMAIN_TOL:
        raise DomainError(f"need p, q >= 0 and p + q <= 1, got p={p}, q={q}")
    u, w = cone.u, cone.w
    uw = np.outer(u, w.conj())
    rho = ((1 - p - q) * fock.vacuum(3) + q * np.outer(u, u.conj())
           + p * np.outer(w, w.conj()) + s * (uw + uw.conj().T))
    return fock.density_matrix(rho)


@dataclass(frozen=True)
class ConeSweep(SweepTable):
    @property
    def frontier(self) -> np.ndarray:
        """Boundary coordinates ``(t0 p, t0 q)`` of the Wigner-positive part of the cone."""
        t0 = self.column("t0")
        return np.column_stack([t0 * self.column("p"), t0 * self.column("q")])


def cone_sweep_3d(cone: ConeSpec3D, num_samples: int, grid: int = GRID,
                  eps_zero: float = EPS_ZERO) -> ConeSweep:
    """Crossing parameter along the hypotenuse ``q = 1 - p`` with ``s = 0``."""
    if num_samples < 2:
        raise ContractError("num_samples must be >= 2")

    def row(p: float):
        k0, _ = k_zero(family_3d(cone, p, 1.0 - p), grid=grid, eps_zero=eps_zero)
        return (p, 1.0 - p, 1.0 / (1.0 - k0))

    rows = pmap(row, np.linspace(0.0, 1.0, num_samples))
    return ConeSweep(HEADER_3D, np.array(rows, dtype=float))
