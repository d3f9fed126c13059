import numpy as np
import pytest

from openxxz.trig import random_params, rng_for
from openxxz.lattice import rel_residual, transfer, u_minus
from openxxz.gauge import (
    ad_plus,
    ad_plus_raw,
    atilde_from_entries,
    bcoef_minus,
    bcoef_minus_alt,
    btilde_from_entries,
    dyn_reflection_residual,
    gauge_is_safe,
    k_plus_hat,
    k_sos_minus,
    r_sos,
    s_chain,
    s_local,
    s_local_inv,
    solve_gauge,
    sos_block,
    t_sos,
    transfer_from_tilde,
    u_sos,
    u_sos_via_bulk,
    u_tilde,
    verify_sos_algebra,
    vertex_irf2_residual,
    vertex_irf_residual,
    virf_bulk_residual,
    virf_mhat_residual,
)


@pytest.fixture(scope="module")
def setup3():
    params = random_params(3, seed=1)
    gauge = solve_gauge(params.boundary_plus, 1, 1, params.eta)
    assert gauge_is_safe(gauge, params)
    return params, gauge


def test_s_local_determinant():
    lam, beta, alpha, eta = 0.4 + 0.2j, 0.7 + 0.15j, 0.3 - 0.2j, 0.8 - 0.1j
    s = s_local(lam, beta, alpha, eta)
    det = np.linalg.det(s)
    assert det == pytest.approx(-2 * np.exp(lam - eta * alpha) * np.sinh(eta * beta))
    assert rel_residual(s @ s_local_inv(lam, beta, alpha, eta), np.eye(2)) < 1e-13
    # singular iff sinh(eta*beta) = 0
    assert abs(np.linalg.det(s_local(lam, 1j * np.pi / eta, alpha, eta))) < 1e-12


def test_r_sos_corners_and_pole():
    lam, beta, eta = 0.4 + 0.2j, 0.7 + 0.15j, 0.8 - 0.1j
    r = r_sos(lam, beta, eta)
    assert r[0, 0] == pytest.approx(np.sinh(lam + eta))
    assert r[3, 3] == pytest.approx(np.sinh(lam + eta))
    with pytest.raises(ValueError):
        r_sos(lam, 1j * np.pi / eta, eta)


def test_vertex_irf_relations():
    rng = rng_for(31, "virf")
    eta = 0.74 + 0.12j
    for _ in range(4):
        lam, mu = complex(rng.uniform(0.1, 1.0), rng.uniform(-0.4, 0.4)), \
            complex(rng.uniform(0.1, 1.0), rng.uniform(-0.4, 0.4))
        beta = complex(rng.uniform(0.4, 1.2), rng.uniform(-0.3, 0.3))
        alpha = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
        assert vertex_irf_residual(lam, mu, beta, alpha, eta) < 1e-12
        assert vertex_irf2_residual(lam, mu, beta, alpha, eta) < 1e-12


def test_s_chain_single_site_and_inverse():
    params = random_params(1, seed=14)
    gauge = solve_gauge(params.boundary_plus, 1, 1, params.eta)
    s = s_chain(params, gauge.beta, gauge.alpha)
    expected = s_local(-params.xi[0], gauge.beta, gauge.alpha, params.eta)
    assert rel_residual(s, expected) < 1e-14
    params3 = random_params(3, seed=15)
    s3 = s_chain(params3, gauge.beta, gauge.alpha)
    assert rel_residual(s3 @ np.linalg.inv(s3), np.eye(8)) < 1e-12


def test_virf_bulk_relations(setup3):
    params, gauge = setup3
    lam = 0.43 + 0.19j
    assert virf_bulk_residual(lam, params, gauge) < 1e-10
    assert virf_mhat_residual(lam, params, gauge) < 1e-10


def test_m_sos_single_site():
    params = random_params(1, seed=16)
    gauge = solve_gauge(params.boundary_plus, 1, 1, params.eta)
    from openxxz.gauge import m_sos
    lam = 0.7 - 0.3j
    m = m_sos(lam, params, gauge.beta)
    r = r_sos(lam - params.xi[0] - params.eta / 2, gauge.beta, params.eta)
    for a in range(2):
        for b in range(2):
            expected = np.array([[r[2 * s + a, 2 * t + b] for t in range(2)]
                                 for s in range(2)])
            assert rel_residual(m.blocks[a, b], expected) < 1e-13


def test_gauged_entries_linear_combinations(setup3):
    params, gauge = setup3
    lam, beta = 0.43 + 0.19j, 0.8 + 0.3j
    ut = u_tilde(lam, params, beta, gauge.alpha)
    assert rel_residual(atilde_from_entries(lam, params, beta, gauge.alpha), ut.A) < 1e-12
    assert rel_residual(btilde_from_entries(lam, params, beta, gauge.alpha), ut.B) < 1e-12
    utm = u_tilde(lam, params, -beta, gauge.alpha)
    assert rel_residual(ut.A, utm.D) < 1e-13
    assert rel_residual(ut.B, utm.C) < 1e-13


def test_boundary_bulk_decomposition(setup3):
    params, gauge = setup3
    lam = 0.57 - 0.22j
    u1 = u_sos(lam, params, gauge.beta, gauge)
    u2 = u_sos_via_bulk(lam, params, gauge.beta, gauge)
    assert rel_residual(u1.full(), u2.full()) < 1e-10


def test_dynamical_reflection(setup3):
    params, gauge = setup3
    lam, mu = 0.4 + 0.2j, 0.9 - 0.3j
    assert dyn_reflection_residual(lam, mu, params, gauge, "sos") < 1e-9
    assert dyn_reflection_residual(lam, mu, params, gauge, "tilde") < 1e-9


def test_sos_quantum_determinant(setup3):
    from openxxz.lattice import qdet_u_minus
    params, gauge = setup3
    eta = params.eta
    lam = 0.52 + 0.11j
    beta = gauge.beta
    scalar = qdet_u_minus(lam, params) / np.sinh(2 * lam - 2 * eta)
    a_p = sos_block("A", eta / 2 + lam, beta, params, gauge)
    a_m = sos_block("A", eta / 2 - lam, beta, params, gauge)
    b_p = sos_block("B", eta / 2 + lam, beta, params, gauge)
    c_m = sos_block("C", eta / 2 - lam, beta, params, gauge)
    lhs = a_p @ a_m + b_p @ c_m
    assert rel_residual(lhs, scalar * np.eye(2 ** params.N)) < 1e-9


def test_k_sos_b_factorization(setup3):
    params, gauge = setup3
    eta = params.eta
    beta = 0.81 + 0.23j
    vals = []
    for lam in (0.3 + 0.1j, 0.7 - 0.2j, 1.1 + 0.3j, 0.5 + 0.45j, 0.95 - 0.05j):
        k = k_sos_minus(lam, beta, params, gauge.alpha)
        vals.append(k[0, 1] / (np.exp(lam - eta / 2) * np.sinh(2 * lam - eta)))
    vals = np.array(vals)
    assert np.max(np.abs(vals - vals[0])) / abs(vals[0]) < 1e-11
    assert abs(vals[0] - bcoef_minus(beta, gauge, params)) / abs(vals[0]) < 1e-11
    assert abs(bcoef_minus(beta, gauge, params)
               - bcoef_minus_alt(beta, gauge, params)) < 1e-12
    k1 = k_sos_minus(0.6 + 0.2j, beta, params, gauge.alpha)
    k2 = k_sos_minus(0.6 + 0.2j, -beta, params, gauge.alpha)
    assert abs(k1[0, 1] - k2[1, 0]) / abs(k1[0, 1]) < 1e-13


def test_solve_gauge_branches():
    params = random_params(3, seed=1)
    eta = params.eta
    bp = params.boundary_plus
    # equal-sign branches diagonalize the gauged K_+
    for ep in (1, -1):
        gauge = solve_gauge(bp, ep, ep, eta)
        for lam in (0.37 - 0.21j, 0.9 + 0.3j):
            k = k_plus_hat(lam, params, gauge)
            assert max(abs(k[0, 1]), abs(k[1, 0])) < 1e-11 * np.linalg.norm(k)
        # defining conditions hold at the solution
        r1 = np.sinh(eta * (gauge.beta - gauge.alpha) - bp.tau) - np.sinh(bp.beta - bp.alpha)
        r2 = np.sinh(eta * (gauge.beta + gauge.alpha) + bp.tau) - np.sinh(bp.alpha - bp.beta)
        assert abs(r1) < 1e-12 and abs(r2) < 1e-12
    # mixed-sign branches force eta*beta onto the dynamical pole lattice
    for ep, epp in ((1, -1), (-1, 1)):
        with pytest.raises(ValueError):
            solve_gauge(bp, ep, epp, eta)


def test_ad_plus_forms(setup3):
    params, gauge = setup3
    eta = params.eta
    lam = 0.52 + 0.31j
    k = k_plus_hat(lam, params, gauge)
    ar, dr = ad_plus_raw(lam, gauge.beta, gauge.alpha, params)
    ac, dc = ad_plus(lam, params.boundary_plus, gauge.eps_plus, eta)
    assert abs(k[0, 0] - ar) < 1e-12 * abs(ar)
    assert abs(k[1, 1] - dr) < 1e-12 * abs(dr)
    assert abs(ar - ac) < 1e-11 * abs(ac)
    assert abs(dr - dc) < 1e-11 * abs(dc)


def test_ad_plus_symmetries(setup3):
    params, _ = setup3
    bp = params.boundary_plus
    eta = params.eta
    lam = 0.9 - 0.4j
    from dataclasses import replace
    a1, d1 = ad_plus(lam, bp, 1, eta)
    flipped = replace(bp, alpha=-bp.alpha, beta=-bp.beta)
    a2, d2 = ad_plus(lam, flipped, 1, eta)
    assert a1 == pytest.approx(d2)
    # zero of a_+ at lam = -eta/2 - eps*alpha_+
    a0, _ = ad_plus(-eta / 2 - bp.alpha, bp, 1, eta)
    assert abs(a0) < 1e-12


def test_transfer_routes(setup3):
    params, gauge = setup3
    lam = 0.43 + 0.19j
    t_direct = transfer(lam, params)
    assert rel_residual(transfer_from_tilde(lam, params, gauge), t_direct) < 1e-10
    ts = t_sos(lam, params, gauge)
    s = s_chain(params, gauge.beta, gauge.alpha)
    assert rel_residual(s @ ts @ np.linalg.inv(s), t_direct) < 1e-10


def test_t_sos_spectrum_matches():
    for N in (2, 3):
        params = random_params(N, seed=60 + N)
        gauge = solve_gauge(params.boundary_plus, 1, 1, params.eta)
        lam = 0.61 - 0.13j
        ev1 = np.sort_complex(np.linalg.eigvals(transfer(lam, params)))
        ev2 = np.sort_complex(np.linalg.eigvals(t_sos(lam, params, gauge)))
        assert np.max(np.abs(ev1 - ev2)) / np.max(np.abs(ev1)) < 1e-9


def test_sos_algebra_relations(setup3):
    params, gauge = setup3
    for name, res in verify_sos_algebra(params, gauge, seed=5):
        bound = 1e-9 if name == "comm-AB" else 1e-10
        assert res < bound, f"{name}: {res}"
