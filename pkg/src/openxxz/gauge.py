"""Vertex-IRF gauge machinery.

Local and chain gauge matrices, the dynamical SOS R-matrix, gauged boundary
monodromies in both the "tilde" (auxiliary-space only) and full SOS forms,
the gauge-parameter solution that diagonalizes the + boundary matrix, and
the SOS transfer matrix.

Dynamical parameters that depend on spin operators are realized by diagonal
action on the sigma^z product basis: an operator-valued argument beta + S
becomes a direct sum of scalar evaluations over the S-eigenspaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trig import ModelParams, BoundaryParams, dist_to_ipi_lattice
from .lattice import (
    AuxOp,
    ID2,
    kmat_minus,
    kmat_plus,
    rel_residual,
    transfer,
    u_minus,
)

_IPI = 1j * np.pi


@dataclass(frozen=True)
class GaugeParams:
    """Gauge shift alpha, dynamical parameter beta and the branch signs."""

    alpha: complex
    beta: complex
    eps_plus: int = 1
    eps_plus_prime: int = 1


def s_local(lam, beta, alpha, eta) -> np.ndarray:
    """Local Vertex-IRF matrix S(lam | beta) with spectral shift alpha."""
    return np.array([[np.exp(lam - eta * (beta + alpha)), np.exp(lam + eta * (beta - alpha))],
                     [1, 1]], dtype=complex)


def s_local_inv(lam, beta, alpha, eta) -> np.ndarray:
    s = s_local(lam, beta, alpha, eta)
    det = s[0, 0] - s[0, 1]
    return np.array([[1, -s[0, 1]], [-1, s[0, 0]]], dtype=complex) / det


def r_sos(lam, beta, eta) -> np.ndarray:
    """Trigonometric SOS (dynamical) R-matrix."""
    sb = np.sinh(eta * beta)
    if abs(sb) < 1e-14:
        raise ValueError("dynamical pole: sinh(eta*beta) = 0")
    sl, se, sle = np.sinh(lam), np.sinh(eta), np.sinh(lam + eta)
    return np.array([
        [sle, 0, 0, 0],
        [0, np.sinh(eta * (beta + 1)) / sb * sl, np.sinh(lam + eta * beta) / sb * se, 0],
        [0, np.sinh(eta * beta - lam) / sb * se, np.sinh(eta * (beta - 1)) / sb * sl, 0],
        [0, 0, 0, sle]], dtype=complex)


# ---------------------------------------------------------------------------
# Dynamical embeddings on the chain.  Site 1 is the most significant qubit;
# the shift sum_{j>n} sigma_j^z is diagonal in the product basis.
# ---------------------------------------------------------------------------

def _sz_of_bits(c: int, nbits: int) -> int:
    """sum of sigma^z eigenvalues of an nbits-configuration (bit 0 = up)."""
    return nbits - 2 * bin(c).count("1")


def _dyn_site_factor(mat_fn, n: int, N: int) -> np.ndarray:
    """Operator on H applying mat_fn(k) at site n, k = sz of sites > n."""
    dim_left = 2 ** (n - 1)
    nb = N - n
    dim_right = 2 ** nb
    out = np.zeros((2 ** N, 2 ** N), dtype=complex)
    for c in range(dim_right):
        proj = np.zeros((dim_right, dim_right), dtype=complex)
        proj[c, c] = 1
        m2 = mat_fn(_sz_of_bits(c, nb))
        out += np.kron(np.kron(np.eye(dim_left, dtype=complex), m2), proj)
    return out


def _dyn_site_aux_factor(mat4_fn, n: int, N: int, site_first: bool) -> AuxOp:
    """AuxOp of a dynamical 4x4 factor acting on (site n, aux).

    ``mat4_fn(k)`` returns the 4x4 matrix at dynamical shift k; ``site_first``
    selects whether its first tensor leg is the site (R_{n0}) or the
    auxiliary space (R_{0n}).
    """
    blocks = [[None, None], [None, None]]
    for a in range(2):
        for b in range(2):
            def m2_fn(k, a=a, b=b):
                r = mat4_fn(k)
                if site_first:
                    return np.array([[r[2 * s + a, 2 * t + b] for t in range(2)]
                                     for s in range(2)])
                return np.array([[r[2 * a + s, 2 * b + t] for t in range(2)]
                                 for s in range(2)])
            blocks[a][b] = _dyn_site_factor(m2_fn, n, N)
    return AuxOp(blocks)


def s_chain(params: ModelParams, beta, alpha) -> np.ndarray:
    """Chain gauge matrix S_{1...N}({xi} | beta)."""
    N, eta = params.N, params.eta
    out = np.eye(2 ** N, dtype=complex)
    for n in range(N, 0, -1):
        factor = _dyn_site_factor(
            lambda k, n=n: s_local(-params.xi[n - 1], beta + k, alpha, eta), n, N)
        out = out @ factor
    return out


def s_chain_aux(params: ModelParams, beta, alpha, sign: int = 1) -> AuxOp:
    """S_{1...N}({xi} | beta + sigma_0^z), block diagonal in the aux space."""
    up = s_chain(params, beta + sign, alpha)
    dn = s_chain(params, beta - sign, alpha)
    z = np.zeros_like(up)
    return AuxOp([[up, z], [z, dn]])


def s_aux_dyn(lam, beta, alpha, params: ModelParams, inverse: bool = False) -> AuxOp:
    """S_0(lam | beta + S^z): scalar gauge matrix with shift by the total spin."""
    N = params.N
    dim = 2 ** N
    sz = np.array([_sz_of_bits(c, N) for c in range(dim)])
    blocks = np.zeros((2, 2, dim, dim), dtype=complex)
    for k in sorted(set(sz)):
        sel = np.diag((sz == k).astype(complex))
        m2 = s_local_inv(lam, beta + k, alpha, params.eta) if inverse \
            else s_local(lam, beta + k, alpha, params.eta)
        for a in range(2):
            for b in range(2):
                blocks[a, b] += m2[a, b] * sel
    return AuxOp(blocks)


def m_sos(lam, params: ModelParams, beta) -> AuxOp:
    """Gauged bulk monodromy: ordered product of dynamical R_{n0} factors."""
    N, eta = params.N, params.eta
    out = AuxOp.identity(2 ** N)
    for n in range(N, 0, -1):
        factor = _dyn_site_aux_factor(
            lambda k, n=n: r_sos(lam - params.xi[n - 1] - eta / 2, beta + k, eta),
            n, N, site_first=True)
        out = out @ factor
    return out


def mhat_sos(lam, params: ModelParams, beta) -> AuxOp:
    """Gauged hat monodromy: ordered product of dynamical R_{0n} factors."""
    N, eta = params.N, params.eta
    out = AuxOp.identity(2 ** N)
    for n in range(1, N + 1):
        factor = _dyn_site_aux_factor(
            lambda k, n=n: r_sos(lam + params.xi[n - 1] - eta / 2, beta + k, eta),
            n, N, site_first=False)
        out = out @ factor
    return out


# ---------------------------------------------------------------------------
# Gauged boundary monodromies.
# ---------------------------------------------------------------------------

def u_tilde(lam, params: ModelParams, beta, alpha) -> AuxOp:
    """S_0^{-1}(-lam+eta/2 | beta) U_-(lam) S_0(lam-eta/2 | beta)."""
    eta = params.eta
    u = u_minus(lam, params)
    left = s_local_inv(-lam + eta / 2, beta, alpha, eta)
    right = s_local(lam - eta / 2, beta, alpha, eta)
    return u.left_scalar(left).right_scalar(right)


def sos_block(name: str, lam, label, params: ModelParams, gauge: GaugeParams,
              _cache=None) -> np.ndarray:
    """Entry of the SOS boundary monodromy at dynamical label ``label``.

    A and B conjugate with the chain gauge at label+1 on the left; C and D
    with label-1; the right factor is label+1 for the first column (A, C)
    and label-1 for the second (B, D).
    """
    al = gauge.alpha
    ut = u_tilde(lam, params, label, al)
    entry = {"A": ut.A, "B": ut.B, "C": ut.C, "D": ut.D}[name]
    lshift = 1 if name in ("A", "B") else -1
    rshift = 1 if name in ("A", "C") else -1
    sl = s_chain(params, label + lshift, al)
    sr = s_chain(params, label + rshift, al) if rshift != lshift else sl
    return np.linalg.solve(sl, entry @ sr)


def u_sos(lam, params: ModelParams, beta, gauge: GaugeParams) -> AuxOp:
    """Full SOS boundary monodromy at dynamical label beta (via the tilde form)."""
    return AuxOp([[sos_block("A", lam, beta, params, gauge),
                   sos_block("B", lam, beta, params, gauge)],
                  [sos_block("C", lam, beta, params, gauge),
                   sos_block("D", lam, beta, params, gauge)]])


def u_sos_via_bulk(lam, params: ModelParams, beta, gauge: GaugeParams) -> AuxOp:
    """Boundary-bulk decomposition M^SOS K^SOS_-(lam | beta + S^z) Mhat^SOS."""
    m = m_sos(lam, params, beta)
    mh = mhat_sos(lam, params, beta)
    N = params.N
    dim = 2 ** N
    sz = np.array([_sz_of_bits(c, N) for c in range(dim)])
    kblocks = np.zeros((2, 2, dim, dim), dtype=complex)
    for k in sorted(set(sz)):
        sel = np.diag((sz == k).astype(complex))
        k2 = k_sos_minus(lam, beta + k, params, gauge.alpha)
        for a in range(2):
            for b in range(2):
                kblocks[a, b] += k2[a, b] * sel
    return m @ AuxOp(kblocks) @ mh


def k_sos_minus(lam, beta, params: ModelParams, alpha) -> np.ndarray:
    """Gauged scalar boundary matrix S_0^{-1}(-lam+eta/2) K_-(lam) S_0(lam-eta/2)."""
    eta = params.eta
    return s_local_inv(-lam + eta / 2, beta, alpha, eta) @ kmat_minus(lam, params) \
        @ s_local(lam - eta / 2, beta, alpha, eta)


def bcoef_minus(beta, gauge: GaugeParams, params: ModelParams) -> complex:
    """Reduced off-diagonal coefficient b_-(beta) of the gauged K_-."""
    b = params.boundary_minus
    eta = params.eta
    pref = np.exp(eta * beta) / (2 * np.sinh(eta * beta) * np.sinh(b.sigma))
    return complex(pref * (2 * b.kappa * np.sinh(eta * (beta - gauge.alpha) - b.tau)
                           - np.exp(b.sigma)))


def bcoef_minus_alt(beta, gauge: GaugeParams, params: ModelParams) -> complex:
    """Same coefficient through the (alpha_-, beta_-) parametrization."""
    b = params.boundary_minus
    eta = params.eta
    pref = b.kappa * np.exp(eta * beta) / (np.sinh(eta * beta) * np.sinh(b.sigma))
    return complex(pref * (np.sinh(eta * (beta - gauge.alpha) - b.tau)
                           - np.sinh(b.alpha + b.beta)))


def k_plus_hat(lam, params: ModelParams, gauge: GaugeParams) -> np.ndarray:
    """Modified gauged K_+ whose off-diagonal entries vanish at the solved gauge."""
    eta = params.eta
    left = s_local_inv(lam - eta / 2, gauge.beta, gauge.alpha - 1, eta)
    right = s_local(eta / 2 - lam, gauge.beta, gauge.alpha + 1, eta)
    return left @ kmat_plus(lam, params) @ right


def ad_plus_raw(lam, beta, alpha, params: ModelParams):
    """Diagonal entries of the gauged K_+ in their raw beta-dependent form."""
    bp = params.boundary_plus
    eta = params.eta

    def a_of(beta):
        pref = np.exp(-lam - eta / 2) / (2 * np.sinh(eta * beta) * np.sinh(bp.sigma))
        return pref * (np.exp(bp.sigma) * np.sinh(eta * beta)
                       - np.exp(-bp.sigma) * np.sinh(2 * lam + eta + eta * beta)
                       - 2 * bp.kappa * np.sinh(eta * alpha + bp.tau) * np.sinh(2 * lam + eta))

    return complex(a_of(beta)), complex(a_of(-beta))


def ad_plus(lam, boundary_plus: BoundaryParams, eps_plus: int, eta):
    """Closed forms of the diagonal gauged K_+ entries for a given branch."""
    ap, bep = boundary_plus.alpha, boundary_plus.beta
    denom = np.sinh(ap) * np.cosh(bep)
    if abs(denom) < 1e-14:
        raise ValueError("degenerate boundary: sinh(alpha+) cosh(beta+) = 0")
    e = np.exp(-lam - eta / 2)
    a = eps_plus * e * np.sinh(lam + eta / 2 + eps_plus * ap) \
        * np.cosh(lam + eta / 2 - eps_plus * bep) / denom
    d = -eps_plus * e * np.sinh(lam + eta / 2 - eps_plus * ap) \
        * np.cosh(lam + eta / 2 + eps_plus * bep) / denom
    return complex(a), complex(d)


def solve_gauge(boundary_plus: BoundaryParams, eps_plus: int, eps_plus_prime: int,
                eta, delta_min: float = 1e-2) -> GaugeParams:
    """Gauge parameters (alpha, beta) making the gauged K_+ diagonal.

    The two defining conditions are only invariant under *joint* i*pi shifts
    of eta*alpha and eta*beta, so representatives are normalized jointly and
    validated against the actual off-diagonal entries.
    """
    ep, epp = eps_plus, eps_plus_prime
    dif = boundary_plus.alpha - boundary_plus.beta
    ea = -boundary_plus.tau + (epp - ep) / 2 * dif - (ep + epp) / 4 * _IPI
    eb = (ep + epp) / 2 * dif + (2 + ep - epp) / 4 * _IPI

    shift = -_IPI * np.round(eb.imag / np.pi)
    ea, eb = ea + shift, eb + shift
    ea -= 2 * _IPI * np.round(ea.imag / (2 * np.pi))

    best = None
    for da in (0, _IPI):
        for db in (0, _IPI):
            alpha = (ea + da) / eta
            beta = (eb + db) / eta
            r1 = abs(2 * boundary_plus.kappa
                     * np.sinh(eta * (beta - alpha) - boundary_plus.tau)
                     - np.exp(-boundary_plus.sigma))
            r2 = abs(2 * boundary_plus.kappa
                     * np.sinh(eta * (beta + alpha) + boundary_plus.tau)
                     + np.exp(-boundary_plus.sigma))
            if best is None or r1 + r2 < best[0]:
                best = (r1 + r2, alpha, beta)
    _, alpha, beta = best
    gauge = GaugeParams(alpha=complex(alpha), beta=complex(beta),
                        eps_plus=ep, eps_plus_prime=epp)
    if abs(beta - round(beta.real)) < delta_min \
            or dist_to_ipi_lattice(eta * beta) < delta_min:
        # mixed-sign branches (eps_plus != eps_plus_prime) always land here:
        # the two diagonality conditions then force eta*beta into i*pi*Z
        raise ValueError("gauge beta degenerate on this eps branch; retry with others")
    return gauge


def gauge_is_safe(gauge: GaugeParams, params: ModelParams, margin: float = None) -> bool:
    """No dynamical pole sinh(eta(beta+k)) ~ 0 for the shifts this chain uses."""
    margin = params.delta_min if margin is None else margin
    for k in range(-params.N - 2, params.N + 3):
        if dist_to_ipi_lattice(params.eta * (gauge.beta + k)) < margin:
            return False
    return True


# ---------------------------------------------------------------------------
# Transfer matrix in the gauged variables.
# ---------------------------------------------------------------------------

def transfer_from_tilde(lam, params: ModelParams, gauge: GaugeParams) -> np.ndarray:
    """T(lam) from the diagonal gauged K_+ and the tilde boundary operators."""
    eta = params.eta
    beta = gauge.beta
    ap, dp = ad_plus(lam, params.boundary_plus, gauge.eps_plus, eta)
    at = u_tilde(lam, params, beta - 1, gauge.alpha).A
    dt = u_tilde(lam, params, beta + 1, gauge.alpha).D
    return np.exp(eta) / np.sinh(eta * beta) * (
        ap * np.sinh(eta * (beta - 1)) * at + dp * np.sinh(eta * (beta + 1)) * dt)


def t_sos(lam, params: ModelParams, gauge: GaugeParams) -> np.ndarray:
    """SOS transfer matrix built from A^SOS(.|beta-1) and D^SOS(.|beta+1)."""
    eta = params.eta
    beta = gauge.beta
    ap, dp = ad_plus(lam, params.boundary_plus, gauge.eps_plus, eta)
    a_sos = sos_block("A", lam, beta - 1, params, gauge)
    d_sos = sos_block("D", lam, beta + 1, params, gauge)
    return np.exp(eta) / np.sinh(eta * beta) * (
        ap * np.sinh(eta * (beta - 1)) * a_sos + dp * np.sinh(eta * (beta + 1)) * d_sos)


def atilde_from_entries(lam, params: ModelParams, beta, alpha) -> np.ndarray:
    """Linear-combination form of the gauged entry Atilde."""
    eta = params.eta
    u = u_minus(lam, params)
    return (1 / (2 * np.sinh(eta * beta))) * (
        -np.exp(2 * lam - eta - eta * beta) * u.A
        - np.exp(lam - eta / 2 + eta * alpha) * u.B
        + np.exp(lam - eta / 2 - eta * alpha) * u.C
        + np.exp(eta * beta) * u.D)


def btilde_from_entries(lam, params: ModelParams, beta, alpha) -> np.ndarray:
    """Linear-combination form of the gauged entry Btilde."""
    eta = params.eta
    u = u_minus(lam, params)
    return (1 / (2 * np.sinh(eta * beta))) * (
        -np.exp(2 * lam - eta + eta * beta) * u.A
        - np.exp(lam - eta / 2 + eta * alpha) * u.B
        + np.exp(lam - eta / 2 + eta * (2 * beta - alpha)) * u.C
        + np.exp(eta * beta) * u.D)


# ---------------------------------------------------------------------------
# Verification of the dynamical reflection algebra (Appendix relations).
# ---------------------------------------------------------------------------

def vertex_irf_residual(lam, mu, beta, alpha, eta) -> float:
    """Local Vertex-IRF intertwining residual on C^2 x C^2."""
    def s1_dyn(lamv, base):
        out = np.zeros((4, 4), dtype=complex)
        for s2 in range(2):
            proj = np.zeros((2, 2), dtype=complex)
            proj[s2, s2] = 1
            out += np.kron(s_local(lamv, base + (1 - 2 * s2), alpha, eta), proj)
        return out

    def s2_dyn(muv, base):
        out = np.zeros((4, 4), dtype=complex)
        for s1 in range(2):
            proj = np.zeros((2, 2), dtype=complex)
            proj[s1, s1] = 1
            out += np.kron(proj, s_local(muv, base + (1 - 2 * s1), alpha, eta))
        return out

    from .lattice import r6v
    lhs = r6v(lam - mu, eta) @ np.kron(s_local(lam, beta, alpha, eta), ID2) @ s2_dyn(mu, beta)
    rhs = np.kron(ID2, s_local(mu, beta, alpha, eta)) @ s1_dyn(lam, beta) @ r_sos(lam - mu, beta, eta)
    return rel_residual(lhs, rhs)


def vertex_irf2_residual(lam, mu, beta, alpha, eta) -> float:
    """Second form of the Vertex-IRF relation, with the permuted SOS matrix."""
    from .lattice import r6v, PERM4

    def s1_dyn(lamv, base):
        out = np.zeros((4, 4), dtype=complex)
        for s2 in range(2):
            proj = np.zeros((2, 2), dtype=complex)
            proj[s2, s2] = 1
            out += np.kron(s_local(lamv, base + (1 - 2 * s2), alpha, eta), proj)
        return out

    def s2_dyn(muv, base):
        out = np.zeros((4, 4), dtype=complex)
        for s1 in range(2):
            proj = np.zeros((2, 2), dtype=complex)
            proj[s1, s1] = 1
            out += np.kron(proj, s_local(muv, base + (1 - 2 * s1), alpha, eta))
        return out

    r_sos21 = PERM4 @ r_sos(lam - mu, beta, eta) @ PERM4
    lhs = r6v(lam - mu, eta) @ np.kron(ID2, s_local(-mu, beta, alpha, eta)) @ s1_dyn(-lam, beta)
    rhs = np.kron(s_local(-lam, beta, alpha, eta), ID2) @ s2_dyn(-mu, beta) @ r_sos21
    return rel_residual(lhs, rhs)


def virf_bulk_residual(lam, params: ModelParams, gauge: GaugeParams) -> float:
    """Residual of the bulk gauge relation between M and M^SOS."""
    from .lattice import bulk_monodromy
    beta, alpha = gauge.beta, gauge.alpha
    eta = params.eta
    m = bulk_monodromy(lam, params)
    schain = s_chain(params, beta, alpha)
    lhs = AuxOp(np.einsum("ijab,bc->ijac", m.blocks, schain))
    lhs = lhs @ s_aux_dyn(-lam + eta / 2, beta, alpha, params)
    s0 = s_local(-lam + eta / 2, beta, alpha, eta)
    rhs = s_chain_aux(params, beta, alpha).left_scalar(s0) @ m_sos(lam, params, beta)
    return rel_residual(lhs.full(), rhs.full())


def virf_mhat_residual(lam, params: ModelParams, gauge: GaugeParams) -> float:
    """Residual of the hat-monodromy gauge relation."""
    from .lattice import mhat
    beta, alpha = gauge.beta, gauge.alpha
    eta = params.eta
    mh = mhat(lam, params)
    s0 = s_local(lam - eta / 2, beta, alpha, eta)
    schain = s_chain(params, beta, alpha)
    lhs = mh.right_scalar(s0) @ s_chain_aux(params, beta, alpha)
    rhs_right = s_aux_dyn(lam - eta / 2, beta, alpha, params) @ mhat_sos(lam, params, beta)
    rhs = AuxOp(np.einsum("ab,ijbc->ijac", schain, rhs_right.blocks))
    return rel_residual(lhs.full(), rhs.full())


def dyn_reflection_residual(lam, mu, params: ModelParams, gauge: GaugeParams,
                            form: str = "sos") -> float:
    """Dynamical reflection-equation residual on aux1 x aux2 x H."""
    beta = gauge.beta
    eta = params.eta
    dim = 2 ** params.N

    def u_at(lamv, label):
        if form == "sos":
            return u_sos(lamv, params, label, gauge)
        return u_tilde(lamv, params, label, gauge.alpha)

    def emb1_dyn(lamv):
        full = np.zeros((4 * dim, 4 * dim), dtype=complex)
        for a2 in range(2):
            proj = np.zeros((2, 2), dtype=complex)
            proj[a2, a2] = 1
            u = u_at(lamv, beta + (1 - 2 * a2))
            for a in range(2):
                for b in range(2):
                    e = np.zeros((2, 2), dtype=complex)
                    e[a, b] = 1
                    full += np.kron(np.kron(e, proj), u.blocks[a, b])
        return full

    def emb2_dyn(muv):
        full = np.zeros((4 * dim, 4 * dim), dtype=complex)
        for a1 in range(2):
            proj = np.zeros((2, 2), dtype=complex)
            proj[a1, a1] = 1
            u = u_at(muv, beta + (1 - 2 * a1))
            for a in range(2):
                for b in range(2):
                    e = np.zeros((2, 2), dtype=complex)
                    e[a, b] = 1
                    full += np.kron(np.kron(proj, e), u.blocks[a, b])
        return full

    from .lattice import PERM4
    def r12(r4):
        return np.kron(r4, np.eye(dim, dtype=complex))

    def r21(r4):
        return np.kron(PERM4 @ r4 @ PERM4, np.eye(dim, dtype=complex))

    u1 = emb1_dyn(lam)
    u2 = emb2_dyn(mu)
    r_lm_21 = r21(r_sos(lam - mu, beta, eta))
    r_lm_12 = r12(r_sos(lam - mu, beta, eta))
    r_lpm_21 = r21(r_sos(lam + mu - eta, beta, eta))
    r_lpm_12 = r12(r_sos(lam + mu - eta, beta, eta))
    lhs = r_lm_21 @ u1 @ r_lpm_12 @ u2
    rhs = u2 @ r_lpm_21 @ u1 @ r_lm_12
    return rel_residual(lhs, rhs)


def verify_sos_algebra(params: ModelParams, gauge: GaugeParams, seed: int = 0):
    """Residuals of the commutation and parity relations of the gauged algebra.

    Returns a list of (name, residual) pairs evaluated at seeded spectral
    points, using the SOS form of the boundary operators.
    """
    from .trig import rng_for
    rng = rng_for(seed, "sos-algebra")
    eta = params.eta
    beta = gauge.beta
    lam = complex(rng.uniform(0.2, 1.1), rng.uniform(-0.4, 0.4))
    mu = complex(rng.uniform(0.2, 1.1), rng.uniform(-0.4, 0.4))

    def blk(name, lamv, label):
        return sos_block(name, lamv, label, params, gauge)

    out = []

    bb_l = blk("B", lam, beta + 1) @ blk("B", mu, beta - 1)
    bb_r = blk("B", mu, beta + 1) @ blk("B", lam, beta - 1)
    out.append(("comm-BB", rel_residual(bb_l, bb_r)))

    a_l, a_m = blk("A", lam, beta), blk("A", mu, beta)
    coef = np.sinh(eta) * np.sinh(lam + mu - eta * beta) \
        / (np.sinh(lam + mu) * np.sinh(eta * (beta - 1)))
    rhs = coef * (blk("B", lam, beta) @ blk("C", mu, beta)
                  - blk("B", mu, beta) @ blk("C", lam, beta))
    out.append(("comm-AA", rel_residual(a_l @ a_m - a_m @ a_l, rhs)))

    d_l, d_m = blk("D", lam, beta), blk("D", mu, beta)
    coef = np.sinh(eta) * np.sinh(lam + mu + eta * beta) \
        / (np.sinh(lam + mu) * np.sinh(eta * (beta + 1)))
    rhs = coef * (blk("C", mu, beta) @ blk("B", lam, beta)
                  - blk("C", lam, beta) @ blk("B", mu, beta))
    out.append(("comm-DD", rel_residual(d_l @ d_m - d_m @ d_l, rhs)))

    lhs = blk("A", mu, beta + 1) @ blk("B", lam, beta + 1)
    c1 = np.sinh(lam + mu - eta) * np.sinh(lam - mu + eta) \
        / (np.sinh(lam + mu) * np.sinh(lam - mu))
    c2 = np.sinh(lam + mu - eta) * np.sinh(eta) * np.sinh(lam - mu + eta * beta) \
        / (np.sinh(lam + mu) * np.sinh(lam - mu) * np.sinh(eta * beta))
    c3 = np.sinh(eta) * np.sinh(lam + mu - eta * (beta + 1)) \
        / (np.sinh(lam + mu) * np.sinh(eta * beta))
    rhs = c1 * blk("B", lam, beta + 1) @ blk("A", mu, beta - 1) \
        - c2 * blk("B", mu, beta + 1) @ blk("A", lam, beta - 1) \
        + c3 * blk("B", mu, beta + 1) @ blk("D", lam, beta + 1)
    out.append(("comm-AB", rel_residual(lhs, rhs)))

    lhs = blk("B", lam, beta - 1) @ blk("D", mu, beta - 1)
    c2 = np.sinh(lam + mu - eta) * np.sinh(eta) * np.sinh(lam - mu - eta * beta) \
        / (np.sinh(lam + mu) * np.sinh(lam - mu) * np.sinh(eta * beta))
    c3 = np.sinh(eta) * np.sinh(lam + mu + eta * (beta - 1)) \
        / (np.sinh(lam + mu) * np.sinh(eta * beta))
    rhs = c1 * blk("D", mu, beta + 1) @ blk("B", lam, beta - 1) \
        + c2 * blk("D", lam, beta + 1) @ blk("B", mu, beta - 1) \
        - c3 * blk("A", lam, beta - 1) @ blk("B", mu, beta - 1)
    out.append(("comm-BD", rel_residual(lhs, rhs)))

    # parity relations
    e2l = np.exp(2 * lam)
    lhs = e2l * np.sinh(2 * lam - eta) * blk("A", -lam, beta - 1)
    rhs = np.sinh(eta * (beta + 1)) / np.sinh(eta * beta) * np.sinh(2 * lam) \
        * blk("D", lam, beta + 1) \
        - np.sinh(2 * lam + eta * beta) / np.sinh(eta * beta) * np.sinh(eta) \
        * blk("A", lam, beta - 1)
    out.append(("parity-A", rel_residual(lhs, rhs)))

    lhs = e2l * np.sinh(2 * lam - eta) * blk("D", -lam, beta + 1)
    rhs = np.sinh(eta * (beta - 1)) / np.sinh(eta * beta) * np.sinh(2 * lam) \
        * blk("A", lam, beta - 1) \
        + np.sinh(2 * lam - eta * beta) / np.sinh(eta * beta) * np.sinh(eta) \
        * blk("D", lam, beta + 1)
    out.append(("parity-D", rel_residual(lhs, rhs)))

    lhs = e2l * np.sinh(2 * lam - eta) * blk("B", -lam, beta)
    rhs = -np.sinh(2 * lam + eta) * blk("B", lam, beta)
    out.append(("parity-B", rel_residual(lhs, rhs)))

    lhs = e2l * np.sinh(2 * lam - eta) * blk("C", -lam, beta)
    rhs = -np.sinh(2 * lam + eta) * blk("C", lam, beta)
    out.append(("parity-C", rel_residual(lhs, rhs)))

    return out
