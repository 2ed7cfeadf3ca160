"""One-shot divergences and mutual informations for finite-dimensional states.

All quantities are reported in bits (base-2 logarithms).  ``+inf`` is a legal
return value wherever a support condition fails; it is never raised as an
error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .operators import EIG_CLAMP, OperatorError, _as_matrix
from .states import CQState, joint_and_product

LOG2 = math.log(2.0)

SMOOTHING_STRATEGIES = ("none", "diagonal-scan")


class ConvergenceError(RuntimeError):
    """The threshold-test bisection failed to pin down the optimal test."""


@dataclass(frozen=True)
class ToleranceParams:
    """Smoothing/decoding parameters shared by the rate-region expressions.

    ``eta = delta_prime - eps_prime`` is the smoothing width used by the
    max-information terms; ``theta`` is the secrecy threshold.
    """

    eps: float
    eps_prime: float = 0.1
    delta: float = 0.01
    delta_prime: float = 0.2
    theta: float = math.inf
    big_o_constant: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0.0 < self.eps_prime < self.delta_prime:
            raise ValueError(
                f"eps_prime must lie in (0, delta_prime), got {self.eps_prime} vs {self.delta_prime}"
            )
        if self.delta <= 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.theta < 0.0:
            raise ValueError(f"theta must be nonnegative, got {self.theta}")
        if not math.isfinite(self.big_o_constant):
            raise ValueError("big_o_constant must be finite")

    @property
    def eta(self) -> float:
        return self.delta_prime - self.eps_prime


# ---------------------------------------------------------------------------
# entropies and classical oracles
# ---------------------------------------------------------------------------


def binary_entropy(eps: float) -> float:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"binary entropy needs an argument in (0, 1), got {eps}")
    return float(-eps * math.log2(eps) - (1.0 - eps) * math.log2(1.0 - eps))


def _clamped_spectrum(m) -> np.ndarray:
    w = np.linalg.eigvalsh(_as_matrix(m))
    w = w.copy()
    w[np.abs(w) <= EIG_CLAMP] = 0.0
    return w


def von_neumann_entropy(rho) -> float:
    w = _clamped_spectrum(rho)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w)))


def relative_entropy(rho, sigma) -> float:
    """Umegaki relative entropy; ``+inf`` when the support condition fails."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise OperatorError(f"dimension mismatch: {a.shape} vs {b.shape}")
    ws, vs = np.linalg.eigh(b)
    kernel = ws <= EIG_CLAMP
    if np.any(kernel):
        vk = vs[:, kernel]
        mass_out = float(np.real(np.einsum("ij,ik,kj->", vk.conj(), a, vk)))
        if mass_out >= EIG_CLAMP:
            return math.inf
    wa = _clamped_spectrum(a)
    wa_pos = wa[wa > 0.0]
    tr_rho_log_rho = float(np.sum(wa_pos * np.log2(wa_pos)))
    supp = ~kernel
    weights = np.real(np.einsum("ij,ik,kj->j", vs[:, supp].conj(), a, vs[:, supp]))
    weights = np.maximum(weights, 0.0)
    tr_rho_log_sigma = float(np.sum(weights * np.log2(ws[supp])))
    return tr_rho_log_rho - tr_rho_log_sigma


def _matrix_power_psd(m: np.ndarray, power: float) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    wp = np.zeros_like(w)
    mask = w > EIG_CLAMP
    wp[mask] = np.power(w[mask], power)
    return (v * wp) @ v.conj().T


def renyi_relative_entropy(rho, sigma, alpha: float) -> float:
    if alpha <= 0.0 or alpha == 1.0:
        raise ValueError(f"alpha must lie in (0,1) or (1,inf), got {alpha}")
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise OperatorError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if alpha > 1.0:
        ws, vs = np.linalg.eigh(b)
        kernel = ws <= EIG_CLAMP
        if np.any(kernel):
            vk = vs[:, kernel]
            mass_out = float(np.real(np.einsum("ij,ik,kj->", vk.conj(), a, vk)))
            if mass_out >= EIG_CLAMP:
                return math.inf
    trace = float(np.real(np.trace(_matrix_power_psd(a, alpha) @ _matrix_power_psd(b, 1.0 - alpha))))
    if trace <= 0.0:
        return math.inf
    return math.log2(trace) / (alpha - 1.0)


def renyi_entropy(rho, alpha: float) -> float:
    if alpha <= 0.0 or alpha == 1.0:
        raise ValueError(f"alpha must lie in (0,1) or (1,inf), got {alpha}")
    w = _clamped_spectrum(rho)
    trace = float(np.sum(np.power(w[w > 0.0], alpha)))
    return math.log2(trace) / (1.0 - alpha)


def classical_np_oracle(
    p: Sequence[float], q: Sequence[float], eps: float
) -> tuple[float, float]:
    """Exact classical Neyman-Pearson optimum for two finite distributions.

    Atoms are admitted in decreasing likelihood-ratio order (zero-denominator
    atoms first) until the accepted ``p`` mass reaches ``1 - eps``; the
    boundary atom is admitted fractionally.  Returns ``(beta, -log2 beta)``.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError("p and q must be 1-d arrays of equal length")
    for name, vec in (("p", p), ("q", q)):
        if np.any(vec < -1e-12):
            raise ValueError(f"{name} has negative entries")
        if abs(float(vec.sum()) - 1.0) > 1e-9:
            raise ValueError(f"{name} sums to {float(vec.sum())!r}, not 1")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(q > 0.0, p / np.maximum(q, 1e-300), math.inf)
    order = sorted(range(len(p)), key=lambda i: (-ratio[i], i))
    target = 1.0 - eps
    cum_p = 0.0
    beta = 0.0
    for i in order:
        if cum_p >= target - 1e-15:
            break
        if p[i] <= 0.0:
            continue
        frac = min(1.0, (target - cum_p) / p[i])
        cum_p += frac * p[i]
        beta += frac * q[i]
    if beta <= 0.0:
        return 0.0, math.inf
    return float(beta), float(-math.log2(beta))


# ---------------------------------------------------------------------------
# hypothesis testing divergence (quantum Neyman-Pearson threshold tests)
# ---------------------------------------------------------------------------


def hypothesis_testing_beta(rho, sigma, eps: float, *, max_iter: int = 200) -> float:
    """Minimal type-II error beta*(eps) over tests 0 <= L <= I with Tr(L rho) >= 1-eps.

    The optimum has the threshold form L = P_+(t) + c P_0(t), with P_+/P_0 the
    projectors onto the strictly positive / zero eigenspaces of rho - t sigma.
    Tr(L rho) is nonincreasing in t, so t is located by bisection; on the zero
    eigenspace Tr(X rho) = t Tr(X sigma), which makes the interpolation in
    c in [0, 1] exact.  The type-I constraint is met to 1e-9 by construction.
    """
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise OperatorError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    target = 1.0 - eps

    ws, vs = np.linalg.eigh(b)
    sig_norm = float(max(ws[-1], 0.0)) if ws.size else 0.0
    supp = ws > EIG_CLAMP
    if np.any(~supp):
        vk = vs[:, ~supp]
        mass_out = float(np.real(np.einsum("ij,ik,kj->", vk.conj(), a, vk)))
        if mass_out >= target - 1e-12:
            return 0.0
    inv_half = vs[:, supp] * np.power(ws[supp], -0.5)
    lam_max = float(np.linalg.eigvalsh(inv_half.conj().T @ a @ inv_half)[-1])

    def probe(t: float, band: float):
        w, v = np.linalg.eigh(a - t * b)
        ra = np.real(np.einsum("ij,ik,kj->j", v.conj(), a, v))
        rb = np.real(np.einsum("ij,ik,kj->j", v.conj(), b, v))
        pos = w > band
        zer = np.abs(w) <= band
        return float(ra[pos].sum()), float(ra[zer].sum()), float(rb[pos].sum()), float(rb[zer].sum())

    def finish(a_pos, a_zer, b_pos, b_zer):
        c = 0.0 if a_zer <= 0.0 else min(1.0, max(0.0, (target - a_pos) / a_zer))
        return b_pos + c * b_zer

    iters = 0
    hi = max(lam_max, 0.0) + 1.0
    while iters < max_iter:
        iters += 1
        a_pos, a_zer, *_ = probe(hi, 1e-12 * (1.0 + hi))
        if a_pos < target:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the threshold test")

    lo = 0.0
    width_goal = 1e-11 * max(1.0, hi)
    while iters < max_iter and hi - lo > width_goal:
        iters += 1
        mid = 0.5 * (lo + hi)
        a_pos, a_zer, b_pos, b_zer = probe(mid, 1e-12 * (1.0 + mid))
        if a_pos > target:
            lo = mid
        elif a_pos + a_zer < target:
            hi = mid
        else:
            return finish(a_pos, a_zer, b_pos, b_zer)
    if hi - lo > width_goal:
        raise ConvergenceError(
            f"no convergence after {max_iter} iterations "
            f"(t in [{lo:.6g}, {hi:.6g}], eps={eps}); degenerate spectrum suspected"
        )
    # final interval is tiny: a band wider than the eigenvalue drift across it
    # is guaranteed to capture the crossing eigenspace
    mid = 0.5 * (lo + hi)
    band = 2.0 * (hi - lo) * (sig_norm + 1.0) + 1e-14
    a_pos, a_zer, b_pos, b_zer = probe(mid, band)
    if a_pos > target + 1e-9 or a_pos + a_zer < target - 1e-9:
        raise ConvergenceError(
            f"straddle detection failed at t={mid:.6g} "
            f"(type-I window [{a_pos:.12g}, {a_pos + a_zer:.12g}], target {target:.12g})"
        )
    return finish(a_pos, a_zer, b_pos, b_zer)


def hypothesis_testing_divergence(rho, sigma, eps: float, *, max_iter: int = 200) -> float:
    beta = hypothesis_testing_beta(rho, sigma, eps, max_iter=max_iter)
    if beta <= 0.0:
        return math.inf
    return float(-math.log2(beta))


# ---------------------------------------------------------------------------
# max-relative entropy and smoothing
# ---------------------------------------------------------------------------


def max_relative_entropy(rho, sigma) -> float:
    """Smallest gamma with rho <= 2^gamma sigma; ``+inf`` off sigma's support."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise OperatorError(f"dimension mismatch: {a.shape} vs {b.shape}")
    ws, vs = np.linalg.eigh(b)
    supp = ws > EIG_CLAMP
    if np.any(~supp):
        vk = vs[:, ~supp]
        mass_out = float(np.real(np.einsum("ij,ik,kj->", vk.conj(), a, vk)))
        if mass_out >= EIG_CLAMP:
            return math.inf
    inv_half = vs[:, supp] * np.power(ws[supp], -0.5)
    lam = float(np.linalg.eigvalsh(inv_half.conj().T @ a @ inv_half)[-1])
    if lam <= 0.0:
        return -math.inf
    return math.log2(lam)


def _codiagonalize(rho: np.ndarray, sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Common eigenbasis values (p, q) for commuting Hermitian rho, sigma."""
    comm = rho @ sigma - sigma @ rho
    if float(np.max(np.abs(comm))) > 1e-9:
        raise OperatorError("inputs do not commute; diagonal-scan smoothing unavailable")
    ws, vs = np.linalg.eigh(sigma)
    r = vs.conj().T @ rho @ vs
    d = len(ws)
    p = np.zeros(d)
    q = ws.copy()
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and ws[stop] - ws[stop - 1] <= 1e-10 * (1.0 + abs(ws[stop])):
            stop += 1
        block = r[start:stop, start:stop]
        p[start:stop] = np.linalg.eigvalsh((block + block.conj().T) / 2.0)
        start = stop
    p[np.abs(p) <= EIG_CLAMP] = 0.0
    q[np.abs(q) <= EIG_CLAMP] = 0.0
    return p, q


def _classical_dmax_ratio(p: np.ndarray, q: np.ndarray) -> float:
    """max_i p_i / q_i with the support convention (inf if p sits off supp q)."""
    out = 0.0
    for pi, qi in zip(p, q):
        if qi > 0.0:
            out = max(out, pi / qi)
        elif pi > EIG_CLAMP:
            return math.inf
    return out


def _diagonal_scan(p: np.ndarray, q: np.ndarray, eps: float, step: float = 1e-4) -> float:
    """Best single donor-recipient mass shift within the purified-distance ball.

    Scans, for every ordered atom pair, transfers m in a dense grid of the
    stated resolution, keeping p' a distribution; fidelity against the
    unshifted p is monotone in m, so each scan stops at the ball boundary.
    """
    p = np.maximum(p, 0.0)
    best = _classical_dmax_ratio(p, q)
    d = len(p)
    with np.errstate(divide="ignore"):
        base = np.where(q > 0.0, p / np.maximum(q, 1e-300), math.inf)
        base = np.where((q <= 0.0) & (p <= EIG_CLAMP), 0.0, base)
    for i in range(d):
        if p[i] <= 0.0:
            continue
        ms = np.arange(step, p[i], step)
        ms = np.append(ms, p[i])
        for j in range(d):
            if j == i:
                continue
            rest = 1.0 - p[i] - p[j]
            f_root = rest + np.sqrt((p[i] - ms).clip(min=0.0) * p[i]) + np.sqrt((p[j] + ms) * p[j])
            # fidelity is the square of the trace-norm overlap f_root
            dist = np.sqrt(np.maximum(0.0, 1.0 - f_root * f_root))
            ok = dist <= eps + 1e-12
            if not np.any(ok):
                continue
            m_ok = ms[ok]
            rest_max = float(np.max(np.delete(base, [i, j]))) if d > 2 else 0.0
            pi_new = (p[i] - m_ok).clip(min=0.0)
            pj_new = p[j] + m_ok
            ri = pi_new / q[i] if q[i] > 0.0 else np.where(pi_new > EIG_CLAMP, math.inf, 0.0)
            rj = pj_new / q[j] if q[j] > 0.0 else np.where(pj_new > EIG_CLAMP, math.inf, 0.0)
            cand = np.maximum(np.maximum(ri, rj), rest_max)
            best = min(best, float(np.min(cand)))
    if best <= 0.0:
        return -math.inf
    return math.log2(best) if best != math.inf else math.inf


def smooth_max_relative_entropy(rho, sigma, eps: float, strategy: str = "none") -> float:
    """Upper bound on the eps-smoothed max-relative entropy.

    ``none`` returns the unsmoothed value (the state itself lies in the ball).
    ``diagonal-scan`` minimizes over diagonal perturbations of commuting
    inputs via dense single-pair mass shifts, exact up to the scan resolution
    within that family.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if strategy not in SMOOTHING_STRATEGIES:
        raise ValueError(f"unknown smoothing strategy {strategy!r}")
    if strategy == "none":
        return max_relative_entropy(rho, sigma)
    p, q = _codiagonalize(_as_matrix(rho), _as_matrix(sigma))
    return min(_diagonal_scan(p, q, eps), max_relative_entropy(rho, sigma))


# ---------------------------------------------------------------------------
# mutual informations over classical-quantum states
# ---------------------------------------------------------------------------


def _parts(part) -> list[str]:
    return [part] if isinstance(part, str) else list(part)


def ht_mutual_info(state: CQState, part_a, part_b, eps: float) -> float:
    """Hypothesis-testing mutual information between two register groups."""
    joint, product = joint_and_product(state, _parts(part_a), _parts(part_b))
    return hypothesis_testing_divergence(joint, product, eps)


def max_mutual_info(state: CQState, part_a, part_b) -> float:
    joint, product = joint_and_product(state, _parts(part_a), _parts(part_b))
    return max_relative_entropy(joint, product)


def smooth_max_mutual_info(
    state: CQState, part_a, part_b, eps: float, strategy: str = "none"
) -> float:
    """Smoothed max mutual information; the marginals of the product side stay fixed."""
    joint, product = joint_and_product(state, _parts(part_a), _parts(part_b))
    return smooth_max_relative_entropy(joint, product, eps, strategy)


def _cond_optimize(state: CQState, cond: str, eps: float, per_value: Callable[[CQState], float]) -> float:
    if not state.is_classical(cond):
        raise OperatorError(f"conditioning register {cond!r} must be classical")
    size = state.size_of(cond)
    if size > 20:
        raise OperatorError(f"conditioning alphabet of size {size} exceeds the brute-force bound 20")
    pz = state.classical_marginal_probs(cond)
    support = [z for z in range(size) if pz[z] > 1e-12]
    values = np.array([per_value(state.condition(cond, z)) for z in support])
    masses = np.array([pz[z] for z in support])
    # keep the largest-value atoms whose total mass stays feasible: dropping a
    # support set S is allowed iff the kept mass is at least 1 - eps^2, the
    # exact purified-distance ball condition for diagonal perturbations
    threshold = 1.0 - eps * eps
    order = np.argsort(values, kind="stable")
    masses_sorted = masses[order]
    values_sorted = values[order]
    kept = float(masses.sum())
    best = values_sorted[0]
    for k in range(len(values_sorted)):
        if kept >= threshold - 1e-9:
            best = values_sorted[k]
        else:
            break
        kept -= masses_sorted[k]
    return float(best)


def cond_smooth_ht_mi(state: CQState, part_a, part_b, cond: str, eps: float) -> float:
    """Conditional smooth hypothesis-testing mutual information (max-min form)."""
    return _cond_optimize(
        state, cond, eps, lambda s: ht_mutual_info(s, _parts(part_a), _parts(part_b), eps)
    )


def cond_smooth_max_mi(
    state: CQState, part_a, part_b, cond: str, eps: float, strategy: str = "none"
) -> float:
    """Conditional smooth max mutual information (max-min form)."""
    return _cond_optimize(
        state,
        cond,
        eps,
        lambda s: smooth_max_mutual_info(s, _parts(part_a), _parts(part_b), eps, strategy),
    )


def fact_bound(rho, sigma, eps: float) -> float:
    """Relative-entropy upper bound on the hypothesis-testing divergence."""
    d = relative_entropy(rho, sigma)
    if math.isinf(d):
        return math.inf
    return (d + binary_entropy(eps)) / (1.0 - eps)
