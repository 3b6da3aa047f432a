"""Acceptance criteria, one test each, at the contracted tolerances.

Run on its own with ``pytest tests/test_acceptance.py`` (or execute this
file); the terminal summary lists one PASS/FAIL line per criterion.
"""

import math
import sys
import time

import numpy as np
import pytest

import oracles as O
from wignerpos import fock, geometry, positivity, scenarios, wigner
from wignerpos.positivity import NEGATIVE, NODAL, STRICTLY_POSITIVE

P_GRID = np.round(np.arange(1, 21) * 0.05, 10)


def _negative_states(seed: int, count: int, dims=(2, 3, 4, 5)):
    gen = O.rng(seed)
    out = []
    while len(out) < count:
        dim = int(gen.choice(dims))
        rho = fock.density_matrix(O.random_state(gen, dim, rank=int(gen.integers(1, dim + 1))))
        if positivity.is_wigner_positive(rho).verdict == NEGATIVE:
            out.append(rho)
    return out


def test_analytic_t0_n1(record):
    t = time.perf_counter()
    errs = [abs(geometry.boundary_state(scenarios.family_2d(1, p, scenarios.pure_s(p))).t0
                - 1 / (1 + p)) for p in P_GRID]
    elapsed = time.perf_counter() - t
    ok = max(errs) < 1e-5 and elapsed < 10
    record("analytic t0, n=1", ok, f"max err {max(errs):.2e}, {elapsed:.2f} s")
    assert ok


def test_analytic_t0_n2(record):
    t = time.perf_counter()
    errs = [abs(geometry.boundary_state(scenarios.family_2d(2, p, scenarios.pure_s(p))).t0
                - 1 / (1 + p + 2 * math.sqrt(2 * p * (1 - p)))) for p in P_GRID]
    elapsed = time.perf_counter() - t
    ok = max(errs) < 1e-5 and elapsed < 20
    record("analytic t0, n=2", ok, f"max err {max(errs):.2e}, {elapsed:.2f} s")
    assert ok


def test_boundary_state_exactness(record):
    res = geometry.boundary_state(fock.fock_state(1))
    entry_err = float(np.max(np.abs(res.rho_plus - np.diag([0.5, 0.5]))))
    cert = positivity.is_wigner_positive(res.rho_plus)
    Q = wigner.wigner_polynomial(res.rho_plus)
    q_at = abs(float(Q(*cert.argmin)))
    ok = (entry_err < 1e-9 and cert.verdict == NODAL and q_at < 1e-7
          and math.hypot(*cert.argmin) < 1e-6)
    record("boundary state of |1><1|", ok,
           f"entry err {entry_err:.1e}, verdict {cert.verdict}, |Q(argmin)| {q_at:.1e}")
    assert ok


def test_ratio_law(record):
    worst = 0.0
    for rho1 in _negative_states(101, 50):
        res = geometry.boundary_state(rho1)
        ratio = (fock.trace_norm(res.rho_plus - res.reference)
                 / fock.trace_norm(rho1 - res.reference))
        worst = max(worst, abs(res.t0 - ratio))
    ok = worst < 1e-8
    record("t0 equals trace-distance ratio", ok, f"max dev {worst:.1e} over 50 states")
    assert ok


def test_segment_monotonicity(record):
    ts = np.linspace(0.0, 1.0, 201)
    vac = fock.vacuum()
    bad = []
    for k, rho1 in enumerate(_negative_states(202, 25)):
        seg = geometry.classify_segment(vac, rho1, ts)
        if not (seg.monotone and len(seg.straddling_cells) == 1
                and seg.labels[0] == "interior_positive" and seg.labels[-1] == "not_positive"):
            bad.append(k)
            continue
        i = seg.straddling_cells[0]
        # the estimated crossing lies in (or on the edge of) the straddling cell
        if not ts[i] - 1e-12 <= seg.crossing_t <= ts[min(i + 2, 200)] + 1e-12:
            bad.append(k)
    ok = not bad
    record("segment labels monotone, one straddling cell", ok, f"25 segments, failures {bad}")
    assert ok


def test_overlap_identity(record):
    gen = O.rng(303)
    worst = 0.0
    for _ in range(20):
        d1, d2 = int(gen.integers(1, 7)), int(gen.integers(1, 7))
        rho, eta = fock.pad_common(O.random_state(gen, d1), O.random_state(gen, d2))
        worst = max(worst, abs(O.overlap_by_quadrature(rho, eta) - fock.hs_inner(rho, eta)))
    ok = worst < 1e-6
    record("overlap identity 2 pi <W, W> = tr", ok, f"max dev {worst:.1e} over 20 pairs")
    assert ok


def test_closed_form_vs_quadrature(record):
    pts = [(0, 0), (1, 0), (0, 1), (-0.7, 0.4), (1.3, -0.9), (0.25, 2.0),
           (-1.8, -1.1), (2.2, 0.3), (-0.4, -2.4)]
    worst = 0.0
    for m in range(6):
        for n in range(6):
            em, en = np.eye(6)[m], np.eye(6)[n]
            for x, xi in pts:
                q = wigner.cross_wigner_by_quadrature(em, en, x, xi)
                worst = max(worst, abs(complex(wigner.wigner_mn(m, n, x, xi)) - q))
    ok = worst < 1e-8
    record("closed form vs defining integral, m, n <= 5", ok, f"max dev {worst:.1e}")
    assert ok


def test_displacement_covariance(record):
    gen = O.rng(404)
    xs = np.linspace(-3, 3, 21)
    X, XI = np.meshgrid(xs, xs, indexing="ij")
    worst = 0.0
    for _ in range(5):
        dim = int(gen.integers(1, 6))
        rho = O.random_state(gen, dim)
        alpha = gen.uniform(0, 1) * np.exp(2j * np.pi * gen.uniform())
        D = wigner.displacement_matrix(alpha, dim + 20)
        big = fock.pad(rho, dim + 20)
        moved = D @ big @ D.conj().T
        moved = 0.5 * (moved + moved.conj().T)
        x0, xi0 = math.sqrt(2) * alpha.real, math.sqrt(2) * alpha.imag
        lhs = wigner.wigner_eval(moved, X, XI)
        rhs = wigner.wigner_eval(rho, X - x0, XI - xi0)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    ok = worst < 1e-6
    record("displacement covariance, 21x21 grid, +20 levels", ok, f"max dev {worst:.1e}")
    assert ok


def test_pure_non_gaussian_states(record):
    gen = O.rng(505)
    verdicts = []
    while len(verdicts) < 100:
        dim = int(gen.integers(2, 6))
        psi = O.random_unitary(gen, dim) @ O.random_vector(gen, dim)
        if abs(psi[0]) ** 2 >= 0.999:
            continue
        verdicts.append(positivity.is_wigner_positive(fock.pure_state(psi)).verdict)
    vac = positivity.is_wigner_positive(fock.vacuum()).verdict
    ok = all(v == NEGATIVE for v in verdicts) and vac == STRICTLY_POSITIVE
    record("pure non-Gaussian states are negative", ok,
           f"{verdicts.count(NEGATIVE)}/100 negative, vacuum {vac}")
    assert ok


def test_vacuum_orthogonal_span(record):
    verdicts = []
    for p in np.linspace(0, 1, 20):
        bound = math.sqrt(p * (1 - p))
        for u in np.linspace(-1, 1, 20):
            s = u * bound
            rho = np.array([[0, 0, 0], [0, 1 - p, s], [0, s, p]], dtype=complex)
            verdicts.append(positivity.is_wigner_positive(rho).verdict)
    ok = all(v == NEGATIVE for v in verdicts)
    record("states on span{|1>,|2>} are negative", ok,
           f"{verdicts.count(NEGATIVE)}/400 negative")
    assert ok


def test_affine_round_trip(record):
    worst, verdicts = 0.0, []
    for rho in _negative_states(606, 25):
        dec = geometry.affine_generator_decomposition(rho)
        recon = (1 + dec.s) * dec.rho_plus - dec.s * dec.reference
        worst = max(worst, float(np.max(np.abs(recon - rho))))
        verdicts.append(positivity.is_wigner_positive(dec.rho_plus).verdict)
    ok = worst < 1e-10 and all(v == NODAL for v in verdicts)
    record("(1+s) rho_plus - s rho0 round trip", ok,
           f"max residual {worst:.1e}, {verdicts.count(NODAL)}/25 nodal")
    assert ok


def test_trace_distance_closed_forms(record):
    gen = O.rng(707)
    orth = 0.0
    for m in range(6):
        for n in range(6):
            if m != n:
                orth = max(orth, abs(fock.trace_norm(fock.fock_state(m, 6) - fock.fock_state(n, 6)) - 2))
    gen_err = 0.0
    for _ in range(50):
        d = int(gen.integers(2, 7))
        psi, phi = O.random_vector(gen, d), O.random_vector(gen, d)
        expect = 2 * math.sqrt(max(0.0, 1 - abs(np.vdot(psi, phi)) ** 2))
        gen_err = max(gen_err, abs(fock.trace_norm(fock.pure_state(psi) - fock.pure_state(phi)) - expect))
    ok = orth < 1e-12 and gen_err < 1e-10
    record("trace-distance closed forms", ok, f"orthogonal {orth:.1e}, general {gen_err:.1e}")
    assert ok


def test_minimizer_oracle(record):
    gen = O.rng(808)
    worst = 0.0
    for k in range(50):
        dim = 2 + k % 4
        rho = O.random_state(gen, dim, rank=int(gen.integers(1, dim + 1)))
        Q = wigner.wigner_polynomial(rho)
        R = positivity.search_radius(Q)
        mine = positivity.global_min(Q, R).value
        ref, _ = O.brute_force_min(Q.coeffs, R)
        worst = max(worst, abs(mine - ref))
    ok = worst < 1e-6
    record("global_min vs 3001x3001 grid + descent", ok, f"max dev {worst:.1e} over 50 states")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
