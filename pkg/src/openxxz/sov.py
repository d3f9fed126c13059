"""SoV bases of the gauged transfer matrix.

Right states are generated from the all-down reference by gauged D operators
at the shifted inhomogeneities, left states from the all-up reference by
gauged A operators; normalization uses the sign-choice family of boundary
normalization functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iterprod

import numpy as np

from .trig import ModelParams, bulk_ad, vdm_hat, varsigma
from .lattice import qdet_k_minus, qdet_k_plus, qdet_m, qdet_u_minus
from .gauge import GaugeParams, bcoef_minus, sos_block


@dataclass(frozen=True)
class EpsChoice:
    """Sign vector selecting a branch of the normalization function."""

    a_plus: int = 1
    a_minus: int = 1
    b_plus: int = 1
    b_minus: int = 1

    def __post_init__(self):
        if self.a_plus * self.a_minus * self.b_plus * self.b_minus != 1:
            raise ValueError("sign product must be +1")

    def flipped(self) -> "EpsChoice":
        return EpsChoice(-self.a_plus, -self.a_minus, -self.b_plus, -self.b_minus)


ADMISSIBLE_EPS = (
    EpsChoice(1, 1, 1, 1),
    EpsChoice(1, -1, -1, 1),
    EpsChoice(-1, 1, 1, -1),
    EpsChoice(-1, -1, -1, -1),
)


def all_h(N: int):
    """All bit tuples, ordered with h_1 as the most significant bit."""
    return [h for h in _iterprod((0, 1), repeat=N)]


def h_index(h) -> int:
    idx = 0
    for b in h:
        idx = 2 * idx + b
    return idx


def a_eps_small(lam, eps: EpsChoice, params: ModelParams) -> complex:
    """Boundary factor a_eps(lam) entering the normalization function."""
    bp, bm = params.boundary_plus, params.boundary_minus
    eta = params.eta
    u = lam - eta / 2
    num = np.sinh(u + eps.a_plus * bp.alpha) * np.cosh(u - eps.b_plus * bp.beta) \
        * np.sinh(u + eps.a_minus * bm.alpha) * np.cosh(u + eps.b_minus * bm.beta)
    den = np.sinh(eps.a_plus * bp.alpha) * np.cosh(eps.b_plus * bp.beta) \
        * np.sinh(eps.a_minus * bm.alpha) * np.cosh(eps.b_minus * bm.beta)
    return num / den


def big_a_eps(lam, eps: EpsChoice, params: ModelParams) -> complex:
    """The function multiplying Q(lam - eta) in the T-Q equation."""
    if abs(np.sinh(2 * lam)) < 1e-14:
        raise ValueError("pole of the normalization function at sinh(2 lam) = 0")
    a, _ = bulk_ad(lam, params)
    _, dm = bulk_ad(-lam, params)
    pref = (-1) ** params.N * np.sinh(2 * lam + params.eta) / np.sinh(2 * lam)
    return pref * a_eps_small(lam, eps, params) * a * dm


def big_a_eps_logderiv(lam, eps: EpsChoice, params: ModelParams) -> complex:
    """Logarithmic lambda-derivative of big_a_eps."""
    bp, bm = params.boundary_plus, params.boundary_minus
    eta = params.eta
    u = lam - eta / 2
    total = 2 / np.tanh(2 * lam + eta) - 2 / np.tanh(2 * lam)
    total += 1 / np.tanh(u + eps.a_plus * bp.alpha) + np.tanh(u - eps.b_plus * bp.beta)
    total += 1 / np.tanh(u + eps.a_minus * bm.alpha) + np.tanh(u + eps.b_minus * bm.beta)
    for x in params.xi:
        total += 1 / np.tanh(lam - x + eta / 2)   # a(lam)
        total += 1 / np.tanh(lam + x + eta / 2)   # d(-lam)
    return complex(total)


def g_minus(lam, eps: EpsChoice, gauge: GaugeParams, params: ModelParams) -> complex:
    """Normalization function of the SoV states for the given sign branch."""
    bp, bm = params.boundary_plus, params.boundary_minus
    eta = params.eta
    u = lam - eta / 2
    ep = gauge.eps_plus
    val = ep * eps.a_plus * (-1) ** params.N \
        * np.sinh(u + eps.a_minus * bm.alpha) * np.cosh(u + eps.b_minus * bm.beta) \
        / (np.sinh(eps.a_minus * bm.alpha) * np.cosh(eps.b_minus * bm.beta)) \
        * np.sinh(u + eps.a_plus * bp.alpha) * np.cosh(u - eps.b_plus * bp.beta) \
        / (np.sinh(u + ep * bp.alpha) * np.cosh(u - ep * bp.beta))
    return complex(val)


def a_minus_norm(lam, eps: EpsChoice, gauge: GaugeParams, params: ModelParams) -> complex:
    """A_-(lam) = g_-(lam) a(lam) d(-lam)."""
    a, _ = bulk_ad(lam, params)
    _, dm = bulk_ad(-lam, params)
    return g_minus(lam, eps, gauge, params) * a * dm


def cond3bis_margin(params: ModelParams, eps_plus: int = 1) -> float:
    """Distance (mod 2 i pi) from the basis-degeneracy lines.

    The Gram normalization vanishes whenever tau_+ - tau_- + eta (N - 2j + 1)
    hits eps (alpha_- + beta_-) - eps_+ (alpha_+ - beta_+) - (eps_+ + eps) i pi/2
    for some j and sign eps; the margin is the smallest such distance.
    """
    from .trig import dist_to_ipi_lattice

    bp, bm = params.boundary_plus, params.boundary_minus
    margin = np.inf
    for j in range(1, params.N + 1):
        lhs = bp.tau - bm.tau + params.eta * (params.N - 2 * j + 1)
        for e in (1, -1):
            rhs = e * (bm.alpha + bm.beta) - eps_plus * (bp.alpha - bp.beta) \
                - (eps_plus + e) * 1j * np.pi / 2
            # distance to the lattice 2 i pi Z
            diff = lhs - rhs
            k = round(diff.imag / (2 * np.pi))
            margin = min(margin, abs(diff - 2j * np.pi * k))
    return float(margin)


def u_weight(n: int, params: ModelParams) -> complex:
    """Ratio weight u_n entering the left separate states (1-based n)."""
    eta = params.eta
    xn = params.xi[n - 1]
    a_p, _ = bulk_ad(xn + eta / 2, params)
    _, d_m = bulk_ad(-xn - eta / 2, params)
    a_m, _ = bulk_ad(-xn + eta / 2, params)
    _, d_p = bulk_ad(xn - eta / 2, params)
    return complex(np.sinh(2 * xn - eta) / np.sinh(2 * xn + eta)
                   * (a_p * d_m) / (a_m * d_p))


def u_weight_product_form(n: int, params: ModelParams) -> complex:
    eta = params.eta
    xn = params.xi[n - 1]
    out = -1.0 + 0j
    for j, xj in enumerate(params.xi, start=1):
        if j == n:
            continue
        out *= np.sinh(xn - xj + eta) * np.sinh(xn + xj + eta) \
            / (np.sinh(xn + xj - eta) * np.sinh(xn - xj - eta))
    return complex(out)


def v_weight(n: int, eps: EpsChoice, params: ModelParams) -> complex:
    """v_{n,eps} = a_eps(xi_n + eta/2) / a_{-eps}(xi_n + eta/2)."""
    lam = params.xi[n - 1] + params.eta / 2
    return a_eps_small(lam, eps, params) / a_eps_small(lam, eps.flipped(), params)


class SovBasis:
    """Left and right SoV bases for one (params, gauge) pair.

    Raw states are built once; the sign-branch dependence enters only through
    scalar normalization factors, attached lazily per EpsChoice.
    """

    def __init__(self, params: ModelParams, gauge: GaugeParams, check: bool = True):
        self.params = params
        self.gauge = gauge
        N = params.N
        eta = params.eta
        dim = 2 ** N
        if check and not params.is_generic():
            raise ValueError("inhomogeneities fail the genericity condition")

        d_ops = [sos_block("D", params.xi[j] + eta / 2, gauge.beta + 1, params, gauge)
                 for j in range(N)]
        a_ops = [sos_block("A", eta / 2 - params.xi[j], gauge.beta - 1, params, gauge)
                 for j in range(N)]

        down = np.zeros(dim, dtype=complex)
        down[dim - 1] = 1.0
        up = np.zeros(dim, dtype=complex)
        up[0] = 1.0

        self._right_raw = np.zeros((dim, dim), dtype=complex)
        self._left_raw = np.zeros((dim, dim), dtype=complex)
        for h in all_h(N):
            idx = h_index(h)
            vec = down.copy()
            for j in range(N - 1, -1, -1):
                if h[j] == 1:
                    vec = d_ops[j] @ vec
            self._right_raw[idx] = vec
            row = up.copy()
            for j in range(N):
                if h[j] == 0:
                    row = row @ a_ops[j]
            self._left_raw[idx] = row
        self._scal_cache = {}

    # -- per-branch scalings ------------------------------------------------

    def _scalings(self, eps: EpsChoice):
        if eps not in self._scal_cache:
            params, gauge = self.params, self.gauge
            eta = params.eta
            a_norm = [a_minus_norm(eta / 2 - x, eps, gauge, params) for x in params.xi]
            k = [np.sinh(2 * x + eta) / np.sinh(2 * x - eta) for x in params.xi]
            self._scal_cache[eps] = (np.asarray(a_norm), np.asarray(k))
        return self._scal_cache[eps]

    def right_state(self, h, eps: EpsChoice) -> np.ndarray:
        a_norm, k = self._scalings(eps)
        scale = np.prod([1 / (k[j] * a_norm[j]) for j in range(self.params.N)
                         if h[j] == 1]) if any(h) else 1.0
        return self._right_raw[h_index(h)] * scale

    def left_state(self, h, eps: EpsChoice) -> np.ndarray:
        a_norm, _ = self._scalings(eps)
        scale = np.prod([1 / a_norm[j] for j in range(self.params.N)
                         if h[j] == 0]) if not all(h) else 1.0
        return self._left_raw[h_index(h)] * scale

    def right_states(self, eps: EpsChoice) -> np.ndarray:
        return np.array([self.right_state(h, eps) for h in all_h(self.params.N)])

    def left_states(self, eps: EpsChoice) -> np.ndarray:
        return np.array([self.left_state(h, eps) for h in all_h(self.params.N)])

    def norm_const(self, eps: EpsChoice) -> complex:
        return sov_norm_const(self.params, self.gauge, eps)

    def norm_const_dense(self, eps: EpsChoice) -> complex:
        """Matrix-element route: V(xi^(0)) <0|...|0bar> with the h=0 left state."""
        params = self.params
        dim = 2 ** params.N
        v0 = vdm_hat([params.xi_shifted(n, 0) for n in range(1, params.N + 1)])
        h0 = tuple([0] * params.N)
        return complex(v0 * self.left_state(h0, eps)[dim - 1])


def sov_norm_const(params: ModelParams, gauge: GaugeParams, eps: EpsChoice) -> complex:
    """Closed product form of the Gram normalization constant."""
    N, eta = params.N, params.eta
    beta = gauge.beta
    xs = list(params.xi)
    v = vdm_hat(xs)
    v0 = vdm_hat([params.xi_shifted(n, 0) for n in range(1, N + 1)])
    v1 = vdm_hat([params.xi_shifted(n, 1) for n in range(1, N + 1)])
    out = (-1) ** N * v * v0 / v1
    for j in range(1, N + 1):
        lam = eta / 2 - xs[j - 1]
        b_lam = np.exp(lam - eta / 2) * np.sinh(2 * lam - eta) \
            * bcoef_minus(beta + 1 + N - 2 * j, gauge, params)
        out *= b_lam / g_minus(lam, eps, gauge, params) \
            * np.sinh(eta * (beta + 1 + N - 2 * j)) / np.sinh(eta * (beta + N - j))
    return complex(out)


def app_c_product(params: ModelParams, gauge: GaugeParams, label) -> complex:
    """Closed form of <0| prod_k A^SOS(eta/2 - xi_k | label) |0bar>."""
    N, eta = params.N, params.eta
    out = (-1.0 + 0j) ** N
    for r in range(N):
        lam = eta / 2 - params.xi[r]
        b_lam = np.exp(lam - eta / 2) * np.sinh(2 * lam - eta) \
            * bcoef_minus(label + N - 2 * r, gauge, params)
        out *= b_lam * np.sinh((label + N - 2 * r) * eta) / np.sinh((label + N - r) * eta)
    for j in range(N):
        a, _ = bulk_ad(eta / 2 - params.xi[j], params)
        _, d = bulk_ad(params.xi[j] - eta / 2, params)
        out *= a * d
    for j in range(N):
        for k in range(j + 1, N):
            out *= np.sinh(params.xi[j] + params.xi[k]) \
                / np.sinh(params.xi[j] + params.xi[k] - eta)
    return complex(out)


def gram_matrix(basis: SovBasis, eps: EpsChoice) -> np.ndarray:
    """Bilinear pairings <beta-1,h| k,beta+1> over all h, k."""
    return basis.left_states(eps) @ basis.right_states(eps).T


def identity_resolution_residual(basis: SovBasis, eps: EpsChoice) -> float:
    params = basis.params
    N = params.N
    dim = 2 ** N
    norm = basis.norm_const(eps)
    acc = np.zeros((dim, dim), dtype=complex)
    for h in all_h(N):
        w = np.exp(-2 * sum(hj * xj for hj, xj in zip(h, params.xi)))
        v = vdm_hat([params.xi_shifted(n + 1, h[n]) for n in range(N)])
        acc += w * v * np.outer(basis.right_state(h, eps), basis.left_state(h, eps))
    acc /= norm
    return float(np.linalg.norm(acc - np.eye(dim)) / np.sqrt(dim))


# ---------------------------------------------------------------------------
# Action formulas of the gauged operators on the SoV states.
# ---------------------------------------------------------------------------

def _flip(h, n: int, delta: int):
    out = list(h)
    out[n - 1] += delta
    if out[n - 1] in (0, 1):
        return tuple(out)
    return None


def _interp_shared_terms(lam, h, params: ModelParams):
    """Shared identity-coefficient of the interpolated A/D actions."""
    eta = params.eta
    sm = params.boundary_minus.sigma
    sl2 = np.sinh(lam) ** 2
    prod0 = np.prod([np.sinh(eta / 2) ** 2 - np.sinh(params.xi_shifted(n + 1, h[n])) ** 2
                     for n in range(params.N)])
    prod1 = np.prod([np.cosh(eta / 2) ** 2 + np.sinh(params.xi_shifted(n + 1, h[n])) ** 2
                     for n in range(params.N)])
    full = np.prod([sl2 - np.sinh(params.xi_shifted(n + 1, h[n])) ** 2
                    for n in range(params.N)])
    # the second value term carries a minus sign: with the gauge matrix as
    # defined, S_0^{-1}(-i pi/2) sigma^z S_0(i pi/2) = -Id, so the gauged
    # operator at eta/2 + i pi/2 equals -i coth(sigma_-) det_q M(i pi/2).
    term = (-1) ** params.N * (
        qdet_m(0, params) * np.cosh(lam - eta / 2) * full / prod0
        - qdet_m(1j * np.pi / 2, params) / np.tanh(sm) * np.sinh(lam - eta / 2) * full / prod1)
    return term, full, prod0, prod1


def act_a_left_interpolated(lam, h, basis: SovBasis, eps: EpsChoice) -> np.ndarray:
    """Interpolation formula for <beta-1,h| A^SOS(lam | beta-1)."""
    params, gauge = basis.params, basis.gauge
    N, eta = params.N, params.eta
    beta = gauge.beta
    bm = params.boundary_minus

    def a_norm(x):
        return a_minus_norm(x, eps, gauge, params)

    out = np.zeros(2 ** N, dtype=complex)
    term_id, full, prod0, prod1 = _interp_shared_terms(lam, h, params)
    out += term_id * basis.left_state(h, eps)

    hop = np.zeros(2 ** N, dtype=complex)
    for n in range(1, N + 1):
        xnh = params.xi_shifted(n, h[n - 1])
        others = np.prod([np.sinh(lam) ** 2 - np.sinh(params.xi_shifted(j + 1, h[j])) ** 2
                          for j in range(N) if j != n - 1]) if N > 1 else 1.0
        denom = np.prod([np.sinh(xnh) ** 2 - np.sinh(params.xi_shifted(j + 1, h[j])) ** 2
                         for j in range(N) if j != n - 1]) if N > 1 else 1.0
        for sgn, delta in ((1, +1), (-1, -1)):
            target = _flip(h, n, delta)
            if target is None:
                continue
            coef = np.sinh(2 * lam - eta) * np.sinh(lam + sgn * xnh) \
                / (np.sinh(2 * xnh - sgn * eta) * np.sinh(2 * xnh)) \
                * others / denom * a_norm(sgn * xnh)
            out += coef * basis.left_state(target, eps)
            hop_coef = np.exp(eta / 2 - sgn * xnh) \
                / (np.sinh(2 * xnh - sgn * eta) * np.sinh(2 * xnh)) \
                * a_norm(sgn * xnh) / denom
            hop += hop_coef * basis.left_state(target, eps)

    # asymptotic operator contribution
    pref_inf = -np.exp(-3 * eta / 2 - eta * (beta - 1)) \
        / (2 ** (2 * N + 1) * np.sinh(eta * (beta - 1)))
    bracket = bm.kappa * np.exp(eta * (beta - 1)) \
        * np.sinh(eta * gauge.alpha + bm.tau) / np.sinh(bm.sigma) \
        + (-1) ** N * qdet_m(0, params) / (2 * prod0) \
        + (-1) ** N * qdet_m(1j * np.pi / 2, params) / (np.tanh(bm.sigma) * 2 * prod1)
    a_inf = pref_inf * (bracket * basis.left_state(h, eps) + hop)
    out += 2 ** (2 * N + 1) * np.exp(lam + eta) * np.sinh(2 * lam - eta) * full * a_inf
    return out


def act_d_right_interpolated(lam, h, basis: SovBasis, eps: EpsChoice) -> np.ndarray:
    """Interpolation formula for D^SOS(lam | beta+1) |h,beta+1>."""
    params, gauge = basis.params, basis.gauge
    N, eta = params.N, params.eta
    beta = gauge.beta
    bm = params.boundary_minus

    def a_norm(x):
        return a_minus_norm(x, eps, gauge, params)

    def k_pow(n, sgn):
        return (np.sinh(2 * params.xi[n - 1] + eta)
                / np.sinh(2 * params.xi[n - 1] - eta)) ** sgn

    out = np.zeros(2 ** N, dtype=complex)
    term_id, full, prod0, prod1 = _interp_shared_terms(lam, h, params)
    out += term_id * basis.right_state(h, eps)

    hop = np.zeros(2 ** N, dtype=complex)
    for n in range(1, N + 1):
        xnh = params.xi_shifted(n, h[n - 1])
        others = np.prod([np.sinh(lam) ** 2 - np.sinh(params.xi_shifted(j + 1, h[j])) ** 2
                          for j in range(N) if j != n - 1]) if N > 1 else 1.0
        denom = np.prod([np.sinh(xnh) ** 2 - np.sinh(params.xi_shifted(j + 1, h[j])) ** 2
                         for j in range(N) if j != n - 1]) if N > 1 else 1.0
        for sgn, delta in ((1, +1), (-1, -1)):
            target = _flip(h, n, delta)
            if target is None:
                continue
            weight = k_pow(n, sgn) * a_norm(-sgn * params.xi_shifted(n, 1 - h[n - 1]))
            coef = np.sinh(2 * lam - eta) * np.sinh(lam + sgn * xnh) \
                / (np.sinh(2 * xnh - sgn * eta) * np.sinh(2 * xnh)) \
                * others / denom * weight
            out += coef * basis.right_state(target, eps)
            hop_coef = np.exp(eta / 2 - sgn * xnh) \
                / (np.sinh(2 * xnh - sgn * eta) * np.sinh(2 * xnh)) * weight / denom
            hop += hop_coef * basis.right_state(target, eps)

    pref_inf = np.exp(-3 * eta / 2 + eta * (beta + 1)) \
        / (2 ** (2 * N + 1) * np.sinh(eta * (beta + 1)))
    bracket = bm.kappa * np.exp(-eta * (beta + 1)) \
        * np.sinh(eta * gauge.alpha + bm.tau) / np.sinh(bm.sigma) \
        + (-1) ** N * qdet_m(0, params) / (2 * prod0) \
        + (-1) ** N * qdet_m(1j * np.pi / 2, params) / (np.tanh(bm.sigma) * 2 * prod1)
    d_inf = pref_inf * (bracket * basis.right_state(h, eps) + hop)
    out += 2 ** (2 * N + 1) * np.exp(lam + eta) * np.sinh(2 * lam - eta) * full * d_inf
    return out


def verify_sov_actions(basis: SovBasis, eps: EpsChoice, seed: int = 0):
    """Residuals of the B pseudo-eigenstate relations and interpolated actions."""
    from .trig import rng_for, a_h as a_h_fn
    from .lattice import rel_residual

    params, gauge = basis.params, basis.gauge
    N, eta = params.N, params.eta
    beta = gauge.beta
    rng = rng_for(seed, "sov-actions")
    lam = complex(rng.uniform(0.2, 1.1), rng.uniform(-0.4, 0.4))
    out = []

    # raw-normalization right states at label beta-1 for the act-BR check
    dim = 2 ** N
    d_ops_m = [sos_block("D", params.xi[j] + eta / 2, gauge.beta - 1, params, gauge)
               for j in range(N)]
    down = np.zeros(dim, dtype=complex)
    down[-1] = 1.0
    a_norm, k = basis._scalings(eps)

    def right_state_at(h, label_ops):
        vec = down.copy()
        for j in range(N - 1, -1, -1):
            if h[j] == 1:
                vec = label_ops[j] @ vec
        scale = np.prod([1 / (k[j] * a_norm[j]) for j in range(N) if h[j] == 1]) \
            if any(h) else 1.0
        return vec * scale

    b_op_m = sos_block("B", lam, beta - 1, params, gauge)
    res_br = 0.0
    for h in all_h(N):
        lhs = b_op_m @ right_state_at(h, d_ops_m)
        blam = np.exp(lam - eta / 2) * np.sinh(2 * lam - eta) \
            * bcoef_minus(beta - N - 1, gauge, params)
        coef = (-1) ** N * a_h_fn(lam, h, params) * a_h_fn(-lam, h, params) \
            * blam * np.sinh(eta * (beta - N - 1)) / np.sinh(eta * (beta - 1))
        rhs = coef * basis.right_state(h, eps)
        res_br = max(res_br, rel_residual(lhs, rhs))
    out.append(("act-BR", res_br))

    # left states at label beta+1 for the act-BL check
    a_ops_p = [sos_block("A", eta / 2 - params.xi[j], gauge.beta + 1, params, gauge)
               for j in range(N)]
    up = np.zeros(dim, dtype=complex)
    up[0] = 1.0

    def left_state_at(h, label_ops):
        row = up.copy()
        for j in range(N):
            if h[j] == 0:
                row = row @ label_ops[j]
        scale = np.prod([1 / a_norm[j] for j in range(N) if h[j] == 0]) \
            if not all(h) else 1.0
        return row * scale

    b_op_p = sos_block("B", lam, beta + 1, params, gauge)
    res_bl = 0.0
    for h in all_h(N):
        lhs = left_state_at(h, a_ops_p) @ b_op_p
        blam = np.exp(lam - eta / 2) * np.sinh(2 * lam - eta) \
            * bcoef_minus(beta + N + 1, gauge, params)
        coef = (-1) ** N * a_h_fn(lam, h, params) * a_h_fn(-lam, h, params) \
            * blam * np.sinh(eta * beta) / np.sinh(eta * (beta + N))
        rhs = coef * basis.left_state(h, eps)
        res_bl = max(res_bl, rel_residual(lhs, rhs))
    out.append(("act-BL", res_bl))

    # interpolated A (left) and D (right) actions against dense application
    a_dense = sos_block("A", lam, beta - 1, params, gauge)
    res = 0.0
    for h in all_h(N):
        lhs = basis.left_state(h, eps) @ a_dense
        rhs = act_a_left_interpolated(lam, h, basis, eps)
        res = max(res, rel_residual(lhs, rhs))
    out.append(("act-AL", res))

    d_dense = sos_block("D", lam, beta + 1, params, gauge)
    res = 0.0
    for h in all_h(N):
        lhs = d_dense @ basis.right_state(h, eps)
        rhs = act_d_right_interpolated(lam, h, basis, eps)
        res = max(res, rel_residual(lhs, rhs))
    out.append(("act-DR", res))

    return out
