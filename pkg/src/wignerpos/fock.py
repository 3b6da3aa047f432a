"""Finite-dimensional quantum states in the Fock basis {|0>, ..., |N>}.

States are plain complex ``numpy`` arrays; entry ``(m, n)`` is ``<m|rho|n>``.
The constructors :func:`hermitian_unit_trace` and :func:`density_matrix`
validate their input and return read-only arrays, so the results can be
shared freely between threads.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .exceptions import ContractError, DimensionError, DomainError

TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
EPS_RANK = 1e-9
TOL_SPEC = 1e-10


def as_square_matrix(M) -> np.ndarray:
    """Return ``M`` as a complex 2-D array, rejecting empty or non-square input."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] == 0:
        raise DimensionError("matrix must have dimension >= 1")
    return A


def _frozen(A: np.ndarray) -> np.ndarray:
    A = np.array(A, dtype=complex)
    A.setflags(write=False)
    return A


def hermiticity_error(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - A.conj().T)))


@dataclass(frozen=True)
class ValidationReport:
    hermitian: bool
    unit_trace: bool
    psd: bool
    min_eigenvalue: float
    trace_deviation: float

    @property
    def valid(self) -> bool:
        return self.hermitian and self.unit_trace and self.psd

    def to_dict(self) -> dict:
        d = asdict(self)
        d["valid"] = self.valid
        return d


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def validate(M, tol_herm: float = TOL_HERM, tol_trace: float = TOL_TRACE,
             tol_psd: float = TOL_PSD) -> ValidationReport:
    """Check Hermiticity, unit trace and positive semi-definiteness of ``M``.

    The PSD check is run on the Hermitian part of ``M``; a non-Hermitian
    matrix is never reported as PSD.
    """
    A = as_square_matrix(M)
    hermitian = hermiticity_error(A) <= tol_herm
    trace_deviation = float(abs(np.trace(A) - 1.0))
    H = 0.5 * (A + A.conj().T)
    min_eig = float(spectral(H).eigenvalues[-1])
    return ValidationReport(
        hermitian=hermitian,
        unit_trace=trace_deviation <= tol_trace,
        psd=hermitian and min_eig >= -tol_psd,
        min_eigenvalue=min_eig,
        trace_deviation=trace_deviation,
    )


def spectral(rho, tol_herm: float = TOL_HERM) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Ties are resolved by the eigensolver's (ascending) output order, which
    keeps the result deterministic.
    """
    A = as_square_matrix(rho)
    if hermiticity_error(A) > tol_herm:
        raise ContractError("spectral decomposition requires a Hermitian matrix")
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(eigenvalues=w[order], eigenvectors=V[:, order])


def hermitian_unit_trace(M, tol_herm: float = TOL_HERM,
                         tol_trace: float = TOL_TRACE) -> np.ndarray:
    """Validated self-adjoint unit-trace matrix (may be indefinite)."""
    A = as_square_matrix(M)
    if hermiticity_error(A) > tol_herm:
        raise ContractError("matrix is not Hermitian")
    if abs(np.trace(A) - 1.0) > tol_trace:
        raise DomainError(f"trace is {np.trace(A).real!r}, expected 1")
    return _frozen(0.5 * (A + A.conj().T))


def density_matrix(M, tol_herm: float = TOL_HERM, tol_trace: float = TOL_TRACE,
                   tol_psd: float = TOL_PSD) -> np.ndarray:
    """Validated density matrix.

    Eigenvalues in ``[-tol_psd, 0)`` are treated as rounding noise: they are
    set to zero and the trace renormalised. Anything more negative raises
    :class:`DomainError`.
    """
    A = hermitian_unit_trace(M, tol_herm, tol_trace)
    dec = spectral(A)
    lam = dec.eigenvalues
    if lam[-1] < -tol_psd:
        raise DomainError(f"matrix is not positive semi-definite (min eigenvalue {lam[-1]:.3e})")
    if lam[-1] < 0:
        lam = np.clip(lam, 0.0, None)
        lam = lam / lam.sum()
        A = SpectralDecomposition(lam, dec.eigenvectors).reconstruct()
        A = 0.5 * (A + A.conj().T)
    return _frozen(A)


def rank(rho, eps_rank: float = EPS_RANK) -> int:
    """Number of eigenvalues of ``rho`` strictly above ``eps_rank``."""
    return int(np.sum(spectral(rho).eigenvalues > eps_rank))


def trace_norm(A) -> float:
    """Trace norm ``tr|A|`` of a Hermitian matrix (sum of absolute eigenvalues)."""
    return float(np.sum(np.abs(spectral(A).eigenvalues)))


def hs_inner(rho, eta) -> float:
    """Hilbert-Schmidt inner product ``tr(rho eta)`` of two Hermitian matrices."""
    R, E = as_square_matrix(rho), as_square_matrix(eta)
    if R.shape != E.shape:
        raise DimensionError(f"dimension mismatch: {R.shape[0]} vs {E.shape[0]}")
    return float(np.sum(R * E.T).real)


def combine(rho0, rho1, t: float) -> np.ndarray:
    """Affine combination ``(1 - t) rho0 + t rho1``.

    For ``t`` outside ``[0, 1]`` the result is Hermitian with unit trace but
    not necessarily positive; callers that need a state validate it.
    """
    R0, R1 = as_square_matrix(rho0), as_square_matrix(rho1)
    if R0.shape != R1.shape:
        raise DimensionError(f"dimension mismatch: {R0.shape[0]} vs {R1.shape[0]}")
    return _frozen((1.0 - t) * R0 + t * R1)


def subspace_support(rho, basis, tol: float = 1e-10) -> float:
    """Weight ``tr(rho P)`` of ``rho`` on the span of an orthonormal ``basis``.

    ``basis`` is a sequence of coefficient vectors in the Fock basis. The
    value is 1 (within tolerance) exactly when ``rho`` is supported on the span.
    """
    R = as_square_matrix(rho)
    B = np.atleast_2d(np.asarray(basis, dtype=complex))
    if B.shape[1] != R.shape[0]:
        raise DimensionError(f"basis vectors have length {B.shape[1]}, state has dim {R.shape[0]}")
    gram = B.conj() @ B.T
    if np.max(np.abs(gram - np.eye(B.shape[0]))) > tol:
        raise ContractError("basis vectors are not orthonormal")
    return float(np.einsum("im,mn,in->", B.conj(), R, B).real)


def pad(A, dim: int) -> np.ndarray:
    """Embed ``A`` in a ``dim``-dimensional space by appending zero rows/columns."""
    A = as_square_matrix(A)
    n = A.shape[0]
    if dim < n:
        raise DimensionError(f"cannot pad dim {n} down to {dim}")
    if dim == n:
        return A
    out = np.zeros((dim, dim), dtype=complex)
    out[:n, :n] = A
    return _frozen(out)


def pad_common(*mats) -> list[np.ndarray]:
    """Zero-pad all operands to the largest dimension among them."""
    mats = [as_square_matrix(M) for M in mats]
    dim = max(M.shape[0] for M in mats)
    return [pad(M, dim) for M in mats]


def fock_vector(n: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def pure_state(psi) -> np.ndarray:
    """Projector onto the normalised vector ``psi``."""
    v = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DomainError("zero vector has no associated state")
    v = v / norm
    return _frozen(np.outer(v, v.conj()))


def fock_state(n: int, dim: int | None = None) -> np.ndarray:
    """``|n><n|`` in a space of dimension ``dim`` (default ``n + 1``)."""
    return pure_state(fock_vector(n, n + 1 if dim is None else dim))


def vacuum(dim: int = 1) -> np.ndarray:
    return fock_state(0, dim)


def mixture(weights: Sequence[float], states: Sequence) -> np.ndarray:
    """Convex mixture ``sum_i w_i rho_i`` after zero-padding to a common dim."""
    mats = pad_common(*states)
    out = sum(w * M for w, M in zip(weights, mats))
    return density_matrix(out)


# density-matrix JSON: {"dim": d, "re": [[...]], "im": [[...]]}, row-major

def to_json_dict(rho) -> dict:
    A = as_square_matrix(rho)
    return {"dim": int(A.shape[0]), "re": A.real.tolist(), "im": A.imag.tolist()}


def from_json_dict(obj) -> np.ndarray:
    """Parse the density-matrix JSON object into a complex matrix (unvalidated)."""
    if not isinstance(obj, dict) or not {"dim", "re", "im"} <= obj.keys():
        raise DimensionError('state JSON must be an object with keys "dim", "re", "im"')
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DimensionError(f'"dim" must be a positive integer, got {dim!r}')
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise DimensionError(f"matrix entries must be numeric: {exc}") from None
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise DimensionError(f"re/im must both be {dim}x{dim} arrays")
    return re + 1j * im


def load_state(path) -> np.ndarray:
    with open(path) as f:
        return from_json_dict(json.load(f))


def dump_state(rho, path) -> None:
    with open(path, "w") as f:
        json.dump(to_json_dict(rho), f)
        f.write("\n")
