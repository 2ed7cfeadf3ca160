"""Achievable-rate polytopes: assembly, projection, vertices, distribution sweeps.

Every region is an explicit list of inequality rows over named rate
variables, with implicit nonnegativity.  Rows keep a breakdown of the
information terms and additive penalty that produced their bound, so two
penalty modes of the same system differ exactly by the recorded constants.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .channel import (
    HK_REGISTERS,
    ChannelSpec,
    InputDistribution,
    control_state_hk,
    control_state_t1,
)
from .entropic import (
    ToleranceParams,
    cond_smooth_ht_mi,
    cond_smooth_max_mi,
    ht_mutual_info,
    smooth_max_mutual_info,
)
from .operators import OperatorError
from .secrecy import randomizer_plan, secrecy_check
from .states import CQState

COEF_TOL = 1e-12
FEAS_TOL = 1e-9


@dataclass(frozen=True)
class MITerm:
    """One signed information term contributing to a row bound."""

    kind: str  # "ht" or "max"
    part_a: tuple[str, ...]
    part_b: tuple[str, ...]
    cond: str | None
    coefficient: float
    value: float
    eps: float
    smoothing: str | None = None


@dataclass(frozen=True)
class PolyRow:
    coeffs: tuple[float, ...]
    bound: float
    tag: str
    terms: tuple[MITerm, ...] = ()
    penalty: float = 0.0
    alternatives: tuple[float, ...] = ()
    warnings: tuple[str, ...] = ()

    def mi_part(self) -> float:
        """Bound contribution of the information terms alone."""
        return float(sum(t.coefficient * t.value for t in self.terms))


@dataclass
class RatePolytope:
    variables: tuple[str, ...]
    rows: list[PolyRow]
    meta: dict = field(default_factory=dict)

    def coeff_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.array([r.coeffs for r in self.rows], dtype=float).reshape(len(self.rows), len(self.variables))
        b = np.array([r.bound for r in self.rows], dtype=float)
        return a, b

    def row(self, tag: str) -> PolyRow:
        for r in self.rows:
            if r.tag == tag:
                return r
        raise KeyError(f"no row tagged {tag!r}")

    def feasible(self, point: Sequence[float], tol: float = FEAS_TOL) -> bool:
        x = np.asarray(point, dtype=float)
        if np.any(x < -tol):
            return False
        a, b = self.coeff_matrix()
        return bool(np.all(a @ x <= b + tol))


@dataclass(frozen=True)
class PenaltyMode:
    """Whether rows carry the printed additive constants or only information terms."""

    mode: str = "paper"
    big_o_constant: float = 0.0

    def __post_init__(self):
        if self.mode not in ("paper", "off"):
            raise ValueError(f"penalty mode must be 'paper' or 'off', got {self.mode!r}")
        if not math.isfinite(self.big_o_constant):
            raise ValueError("big_o_constant must be finite")


def _rate_name(register: str) -> str:
    return "R" + register[1:] if register.startswith("X") else "R_" + register


class _MICalculator:
    """Memoizing evaluator for the information terms of one control state."""

    def __init__(self, state: CQState, params: ToleranceParams, smoothing: str):
        self.state = state
        self.params = params
        self.smoothing = smoothing
        self._memo: dict = {}

    def ht(self, part_a: Sequence[str], part_b: Sequence[str], cond: str | None = None) -> MITerm:
        key = ("ht", tuple(part_a), tuple(part_b), cond)
        if key not in self._memo:
            if cond is None:
                value = ht_mutual_info(self.state, part_a, part_b, self.params.eps)
            else:
                value = cond_smooth_ht_mi(self.state, part_a, part_b, cond, self.params.eps)
            self._memo[key] = value
        return MITerm("ht", tuple(part_a), tuple(part_b), cond, 1.0, self._memo[key], self.params.eps)

    def imax(self, part_a: Sequence[str], part_b: Sequence[str], cond: str | None = None) -> MITerm:
        key = ("max", tuple(part_a), tuple(part_b), cond)
        if key not in self._memo:
            if cond is None:
                value = smooth_max_mutual_info(
                    self.state, part_a, part_b, self.params.eta, self.smoothing
                )
            else:
                value = cond_smooth_max_mi(
                    self.state, part_a, part_b, cond, self.params.eta, self.smoothing
                )
            self._memo[key] = value
        return MITerm(
            "max", tuple(part_a), tuple(part_b), cond, -1.0, self._memo[key], self.params.eta,
            self.smoothing,
        )


def _scaled(term: MITerm, coefficient: float) -> MITerm:
    return replace(term, coefficient=coefficient)


def _row_from_terms(
    variables: Sequence[str],
    coeff_map: Mapping[str, float],
    terms: Sequence[MITerm],
    penalty: float,
    tag: str,
    alternatives: Sequence[float] = (),
    warnings: Sequence[str] = (),
) -> PolyRow:
    coeffs = tuple(float(coeff_map.get(v, 0.0)) for v in variables)
    bound = float(sum(t.coefficient * t.value for t in terms) + penalty)
    return PolyRow(coeffs, bound, tag, tuple(terms), float(penalty), tuple(alternatives), tuple(warnings))


# ---------------------------------------------------------------------------
# multiple-access inner bound (no secrecy)
# ---------------------------------------------------------------------------


def qmac_inner_bound(
    state: CQState,
    senders: Sequence[str],
    receiver: str,
    eps: float,
    penalties: PenaltyMode,
) -> RatePolytope:
    """Simultaneous-decoding inner bound: one row per nonempty sender subset.

    Registers not named as sender or receiver are marginalized out.
    """
    senders = list(senders)
    if len(senders) not in (2, 3):
        raise OperatorError(f"qmac_inner_bound supports 2 or 3 senders, got {len(senders)}")
    params = ToleranceParams(eps=eps)
    calc = _MICalculator(state, params, "none")
    variables = tuple(_rate_name(s) for s in senders)
    penalty = math.log2(eps) - 2.0 if penalties.mode == "paper" else 0.0
    rows = []
    for size in range(1, len(senders) + 1):
        for subset in itertools.combinations(range(len(senders)), size):
            part_a = [senders[i] for i in subset]
            part_b = [senders[i] for i in range(len(senders)) if i not in subset] + [receiver]
            term = calc.ht(part_a, part_b)
            coeff_map = {_rate_name(s): 1.0 for s in part_a}
            tag = "qmac:" + "+".join(_rate_name(s) for s in part_a)
            rows.append(_row_from_terms(variables, coeff_map, [term], penalty, tag))
    return RatePolytope(variables, rows, {"receiver": receiver, "penalties": penalties.mode})


# ---------------------------------------------------------------------------
# theorem-style secrecy regions
# ---------------------------------------------------------------------------


def _log_delta(params: ToleranceParams, delta_source: str) -> float:
    if delta_source == "delta":
        return math.log2(params.delta)
    if delta_source == "delta-prime":
        return math.log2(params.delta_prime)
    raise ValueError(f"delta_source must be 'delta' or 'delta-prime', got {delta_source!r}")


def _secrecy_penalties(params: ToleranceParams, penalties: PenaltyMode, delta_source: str):
    """Additive constants of the single-receiver secrecy rows (individual, sum)."""
    if penalties.mode == "off":
        return 0.0, 0.0
    log_l = math.log2(3.0 / params.eps_prime**3)
    log_d = _log_delta(params, delta_source)
    single = math.log2(params.eps) - 1.0 - log_l + 0.25 * log_d
    joint = math.log2(params.eps) - 1.0 - 2.0 * log_l + 0.5 * log_d + penalties.big_o_constant
    return single, joint


def submac_secrecy_region(
    state: CQState,
    order: Sequence[str],
    params: ToleranceParams,
    penalties: PenaltyMode,
    smoothing: str = "none",
    delta_source: str = "delta",
) -> RatePolytope:
    """Secrecy region of one sub-channel (a single receiver plus Z).

    For a time-shared state, ``order`` lists the two senders in decoding
    order (the second randomizer conditions on the first) and the system has
    three rows.  For a split-message state, ``order`` names the receiver's
    own (common, personal) pair and the nine-row side-information system is
    built instead.
    """
    quantum = [n for n in state.quantum_layout.names if n != "Z"]
    if len(quantum) != 1 or "Z" not in state.quantum_layout.names:
        raise OperatorError("submac state must carry exactly one receiver register plus Z")
    y = quantum[0]
    calc = _MICalculator(state, params, smoothing)
    if set(HK_REGISTERS) <= set(state.classical_names):
        own_c, own_p = order
        if (own_c, own_p) not in (("X10", "X11"), ("X20", "X22")):
            raise OperatorError(
                f"order must name a (common, personal) pair of one sender, got {tuple(order)}"
            )
        oth = ("X20", "X22") if own_c == "X10" else ("X10", "X11")
        r_own = "R1" if own_c == "X10" else "R2"
        r_oth = "R2" if r_own == "R1" else "R1"
        pen = _split_penalties(params, penalties)
        rows = _side_information_rows(
            calc, y, own_c, own_p, oth, r_own, r_oth, pen, tag_prefix="submac"
        )
        return RatePolytope(("R1", "R2"), rows, {"receiver": y, "order": tuple(order)})
    first, second = order
    cond = "Q" if state.is_classical("Q") else None
    single, joint = _secrecy_penalties(params, penalties, delta_source)
    variables = (_rate_name(first), _rate_name(second))
    m_first = calc.imax([first], ["Z"], cond)
    m_second = calc.imax([second], ["Z", first], cond)
    rows = [
        _row_from_terms(
            variables,
            {_rate_name(first): 1.0},
            [calc.ht([first], [second, y], cond), m_first],
            single,
            f"submac:{_rate_name(first)}",
        ),
        _row_from_terms(
            variables,
            {_rate_name(second): 1.0},
            [calc.ht([second], [first, y], cond), m_second],
            single,
            f"submac:{_rate_name(second)}",
        ),
        _row_from_terms(
            variables,
            {variables[0]: 1.0, variables[1]: 1.0},
            [calc.ht([first, second], [y], cond), m_first, m_second],
            joint,
            "submac:sum",
        ),
    ]
    return RatePolytope(variables, rows, {"receiver": y, "order": tuple(order)})


def theorem1_region(
    channel: ChannelSpec,
    dist: InputDistribution,
    params: ToleranceParams,
    penalties: PenaltyMode,
    smoothing: str = "none",
    delta_source: str = "delta",
) -> RatePolytope:
    """Time-shared secrecy region: per row, the worse of the two receivers."""
    state = control_state_t1(channel, dist)
    calc = _MICalculator(state, params, smoothing)
    single, joint = _secrecy_penalties(params, penalties, delta_source)
    variables = ("R1", "R2")
    m1 = calc.imax(["X1"], ["Z"], "Q")
    m2 = calc.imax(["X2"], ["Z", "X1"], "Q")

    def min_ht(part_a, other):
        alts = [calc.ht(part_a, other + [y], "Q") for y in ("Y1", "Y2")]
        values = [t.value for t in alts]
        pick = alts[int(np.argmin(values))]
        return pick, tuple(values)

    t_r1, alt1 = min_ht(["X1"], ["X2"])
    t_r2, alt2 = min_ht(["X2"], ["X1"])
    t_sum, alt_sum = min_ht(["X1", "X2"], [])
    rows = [
        _row_from_terms(variables, {"R1": 1.0}, [t_r1, m1], single, "t1:r1", alt1),
        _row_from_terms(variables, {"R2": 1.0}, [t_r2, m2], single, "t1:r2", alt2),
        _row_from_terms(
            variables, {"R1": 1.0, "R2": 1.0}, [t_sum, m1, m2], joint, "t1:sum", alt_sum
        ),
    ]
    full = calc.imax(["X1", "X2"], ["Z"], "Q")
    meta = {
        "theorem": "t1",
        "penalties": penalties.mode,
        "secrecy": {
            "criterion": "Imax_eta(X1X2:Z|Q)",
            "value": full.value,
            "threshold": params.theta,
            "pass": bool(full.value <= params.theta + 1e-9),
        },
    }
    return RatePolytope(variables, rows, meta)


# split-message register shorthand: the second input is the pair (X20, X22)
_X1 = ("X10", "X11")
_X2 = ("X20", "X22")


def _hk_penalty(penalties: PenaltyMode, eps: float, n_terms: int) -> float:
    return n_terms * (math.log2(eps) - 2.0) if penalties.mode == "paper" else 0.0


def _hk_row_specs() -> list[tuple[str, dict, list[tuple[tuple[str, ...], tuple[str, ...]]]]]:
    """Groupings of the split-message no-secrecy rows, aligned with conj:* tags."""
    return [
        ("1", {"R1": 1.0}, [(("X10", "X11"), ("Y1", "X20"))]),
        ("2", {"R1": 1.0}, [(("X11",), ("Y1", "X10", "X20")), (("X10",), ("Y2", "X20", "X22"))]),
        ("3", {"R2": 1.0}, [(("X20", "X22"), ("Y2", "X10"))]),
        ("4", {"R2": 1.0}, [(("X20",), ("Y1", "X10", "X11")), (("X22",), ("Y2", "X10", "X20"))]),
        ("5", {"R1": 1.0, "R2": 1.0}, [(("X11",), ("Y2", "X10", "X20")), (("X10", "X11", "X20"), ("Y2",))]),
        ("6", {"R1": 1.0, "R2": 1.0}, [(("X11",), ("Y1", "X20", "X10")), (("X22", "X20", "X10"), ("Y2",))]),
        ("7", {"R1": 1.0, "R2": 1.0}, [(("X11", "X20"), ("Y1", "X10")), (("X22", "X10"), ("Y2", "X20"))]),
        (
            "8",
            {"R1": 2.0, "R2": 1.0},
            [
                (("X11",), ("Y1", "X10", "X20")),
                (("X10", "X22"), ("Y2", "X20")),
                (("X11", "X10", "X20"), ("Y2",)),
            ],
        ),
        (
            "9",
            {"R1": 1.0, "R2": 2.0},
            [
                (("X11", "X20"), ("Y1", "X10")),
                (("X22",), ("Y2", "X10", "X20")),
                (("X22", "X20", "X10"), ("Y1",)),
            ],
        ),
    ]


def hk_nosecrecy_region(
    channel: ChannelSpec,
    dist: InputDistribution,
    eps: float,
    penalties: PenaltyMode = PenaltyMode("paper"),
) -> RatePolytope:
    """Split-message no-secrecy region over (R1, R2), rows as printed."""
    state = control_state_hk(channel, dist)
    params = ToleranceParams(eps=eps)
    calc = _MICalculator(state, params, "none")
    variables = ("R1", "R2")
    rows = []
    for idx, coeff_map, groupings in _hk_row_specs():
        terms = [calc.ht(list(a), list(b)) for a, b in groupings]
        rows.append(
            _row_from_terms(
                variables, coeff_map, terms, _hk_penalty(penalties, eps, len(terms)), f"hk:{idx}"
            )
        )
    return RatePolytope(variables, rows, {"theorem": "hk-nosecrecy", "penalties": penalties.mode})


def _split_penalties(params: ToleranceParams, penalties: PenaltyMode):
    """Constant builder for split-message secrecy rows.

    Returns f(n_l, n_eps, half_log_delta_units) where the row constant is
    -n_l*log2(3/eps'^3) + half*0.5*log2(delta') + n_eps*log2(eps) - 2*n_eps + O(1).
    """
    if penalties.mode == "off":
        return lambda n_l, n_eps, half: 0.0
    log_l = math.log2(3.0 / params.eps_prime**3)
    log_dp = math.log2(params.delta_prime)

    def build(n_l: int, n_eps: int, half: int) -> float:
        return (
            -n_l * log_l
            + 0.5 * half * log_dp
            + n_eps * math.log2(params.eps)
            - 2.0 * n_eps
            + penalties.big_o_constant
        )

    return build


def conjecture_region(
    channel: ChannelSpec,
    dist: InputDistribution,
    params: ToleranceParams,
    penalties: PenaltyMode,
    smoothing: str = "none",
    side_thresholds: tuple[float, float, float] = (math.inf, math.inf, math.inf),
) -> RatePolytope:
    """Split-message secrecy region (nine rows), plus the side-condition report."""
    state = control_state_hk(channel, dist)
    calc = _MICalculator(state, params, smoothing)
    pen = _split_penalties(params, penalties)
    variables = ("R1", "R2")
    m10 = calc.imax(["X10"], ["Z"])
    m11 = calc.imax(["X11"], ["Z", "X10", "X20"])
    m20 = calc.imax(["X20"], ["Z", "X10"])
    m22 = calc.imax(["X22"], ["Z", "X10", "X11", "X20"])
    row_specs = _hk_row_specs()
    leak = {
        "1": ([m10, m11], pen(2, 1, 1)),
        "2": ([m10, m11], pen(2, 2, 1)),
        "3": ([m20, m22], pen(2, 1, 1)),
        "4": ([m20, m22], pen(2, 2, 1)),
        "5": ([m10, m11, m20, m22], pen(4, 2, 2)),
        "6": ([m10, m11, m20, m22], pen(4, 2, 2)),
        "7": ([m10, m11, m20, m22], pen(4, 2, 2)),
        "8": ([_scaled(m10, -2.0), _scaled(m11, -2.0), m20, m22], pen(6, 3, 3)),
        "9": ([m10, m11, _scaled(m20, -2.0), _scaled(m22, -2.0)], pen(6, 3, 3)),
    }
    rows = []
    for idx, coeff_map, groupings in row_specs:
        ht_terms = [calc.ht(list(a), list(b)) for a, b in groupings]
        max_terms, penalty = leak[idx]
        rows.append(
            _row_from_terms(variables, coeff_map, ht_terms + list(max_terms), penalty, f"conj:{idx}")
        )
    report = secrecy_check(state, params, side_thresholds, smoothing=smoothing)
    meta = {"theorem": "conjecture", "penalties": penalties.mode, "secrecy": report.as_dict()}
    return RatePolytope(variables, rows, meta)


def _t2_roles(sub: int):
    """Register roles per sub-channel; sub-channel 2 is the 1<->2 mirror."""
    if sub == 1:
        return "Y1", "X10", "X11", ("X20", "X22"), "R1", "R2"
    return "Y2", "X20", "X22", ("X10", "X11"), "R2", "R1"


def _side_information_rows(
    calc: _MICalculator,
    y: str,
    own_c: str,
    own_p: str,
    oth: tuple[str, str],
    r_own: str,
    r_oth: str,
    pen,
    tag_prefix: str,
) -> list[PolyRow]:
    """Nine secrecy rows of one side-information sub-channel.

    The receiver decodes its own split message plus the full interfering
    input; the interfering common part conditions the later randomizers.
    """
    variables = ("R1", "R2")
    oth_c, oth_p = oth
    m_own_c = calc.imax([own_c], ["Z"])
    m_own_p = calc.imax([own_p], ["Z", own_c, oth_c, oth_p])
    m_oth_c = calc.imax([oth_c], ["Z", own_c])
    m_oth_p = calc.imax([oth_p], ["Z", own_c, own_p, oth_c])
    all_m = [m_own_c, m_own_p, m_oth_c, m_oth_p]
    specs = [
        ("1", {r_own: 1.0}, [((own_c, own_p), (y,) + oth)], [m_own_c, m_own_p], (2, 1, 1)),
        (
            "2",
            {r_own: 1.0},
            [((own_p,), (y, own_c) + oth), ((own_c,), (y, own_p) + oth)],
            [m_own_c, m_own_p],
            (2, 2, 1),
        ),
        ("3", {r_oth: 1.0}, [(oth, (y, own_c, own_p))], [m_oth_c, m_oth_p], (2, 1, 1)),
        ("4", {r_oth: 1.0}, [(oth + (own_c,), (y, own_p))], [m_oth_c, m_oth_p], (2, 1, 1)),
        ("5", {r_oth: 1.0}, [(oth + (own_p,), (y, own_c))], [m_oth_c, m_oth_p], (2, 1, 1)),
        (
            "6",
            {r_own: 1.0, r_oth: 1.0},
            [((own_p,), (y, own_c) + oth), ((own_c, oth_c), (y, own_p))],
            all_m,
            (4, 2, 2),
        ),
        (
            "7",
            {r_own: 1.0, r_oth: 1.0},
            [((own_p,) + oth, (y, own_c)), ((own_c,), (own_p,) + oth + (y,))],
            all_m,
            (4, 2, 2),
        ),
        (
            "8",
            {r_own: 1.0, r_oth: 1.0},
            [((own_p, own_c) + oth, (y,))],
            all_m,
            (4, 1, 2),
        ),
        (
            "9",
            {r_own: 1.0, r_oth: 2.0},
            [((own_c,) + oth, (y, own_p)), (oth + (own_p,), (y, own_c))],
            [m_own_c, m_own_p, _scaled(m_oth_c, -2.0), _scaled(m_oth_p, -2.0)],
            (6, 2, 3),
        ),
    ]
    rows = []
    for idx, coeff_map, groupings, max_terms, (n_l, n_eps, half) in specs:
        ht_terms = [calc.ht(list(a), list(b)) for a, b in groupings]
        rows.append(
            _row_from_terms(
                variables,
                coeff_map,
                ht_terms + list(max_terms),
                pen(n_l, n_eps, half),
                f"{tag_prefix}:{idx}",
            )
        )
    return rows


def theorem2_region(
    channel: ChannelSpec,
    dist: InputDistribution,
    params: ToleranceParams,
    penalties: PenaltyMode,
    smoothing: str = "none",
) -> RatePolytope:
    """Intersection of the two side-information sub-channel secrecy systems."""
    state = control_state_hk(channel, dist)
    calc = _MICalculator(state, params, smoothing)
    pen = _split_penalties(params, penalties)
    variables = ("R1", "R2")
    rows: list[PolyRow] = []
    for sub in (1, 2):
        y, own_c, own_p, oth, r_own, r_oth = _t2_roles(sub)
        rows.extend(
            _side_information_rows(calc, y, own_c, own_p, oth, r_own, r_oth, pen, f"t2:s{sub}")
        )
    report = secrecy_check(state, params, (math.inf, math.inf, math.inf), smoothing=smoothing)
    plan = randomizer_plan(state, params, smoothing=smoothing)
    meta = {
        "theorem": "t2",
        "penalties": penalties.mode,
        "secrecy": report.as_dict(),
        "randomizer_plan": plan.as_dict(),
    }
    return RatePolytope(variables, rows, meta)


def hk_region_via_projection(
    channel: ChannelSpec,
    dist: InputDistribution,
    eps: float,
    penalties: PenaltyMode = PenaltyMode("paper"),
) -> RatePolytope:
    """Split-message region obtained by projecting the two 3-sender systems.

    Builds the seven-row inner bound for each receiver, adds the rate
    identities R1 = R10 + R11 and R2 = R20 + R22 as inequality pairs, and
    eliminates the split rates.  Serves as an independent construction of the
    printed system of :func:`hk_nosecrecy_region`.
    """
    state = control_state_hk(channel, dist)
    sys1 = qmac_inner_bound(state, ["X10", "X11", "X20"], "Y1", eps, penalties)
    sys2 = qmac_inner_bound(state, ["X20", "X22", "X10"], "Y2", eps, penalties)
    variables = ("R1", "R2", "R10", "R11", "R20", "R22")
    rows: list[PolyRow] = []
    for poly in (sys1, sys2):
        for r in poly.rows:
            cmap = dict(zip(poly.variables, r.coeffs))
            rows.append(PolyRow(tuple(cmap.get(v, 0.0) for v in variables), r.bound, r.tag))
    idx = {v: i for i, v in enumerate(variables)}
    for total, pa, pb in (("R1", "R10", "R11"), ("R2", "R20", "R22")):
        coeffs = [0.0] * len(variables)
        coeffs[idx[total]] = 1.0
        coeffs[idx[pa]] = -1.0
        coeffs[idx[pb]] = -1.0
        rows.append(PolyRow(tuple(coeffs), 0.0, f"def:{total}+"))
        rows.append(PolyRow(tuple(-c for c in coeffs), 0.0, f"def:{total}-"))
    lifted = RatePolytope(variables, rows, {"construction": "lift"})
    return fourier_motzkin(lifted, ["R10", "R11", "R20", "R22"])


# ---------------------------------------------------------------------------
# polytope machinery: projection, pruning, vertices
# ---------------------------------------------------------------------------


def _normalize_key(coeffs: np.ndarray) -> tuple:
    scale = np.max(np.abs(coeffs))
    if scale <= COEF_TOL:
        return ()
    return tuple(np.round(coeffs / scale, 9))


def _prune_rows(rows: list[PolyRow], variables: tuple[str, ...]) -> list[PolyRow]:
    """Drop duplicate directions (keep the tightest) and trivial rows.

    An all-zero row with a negative bound marks an empty system and is kept.
    """
    best: dict[tuple, PolyRow] = {}
    infeasible: PolyRow | None = None
    for row in rows:
        coeffs = np.asarray(row.coeffs, dtype=float)
        scale = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
        if scale <= COEF_TOL:
            if row.bound < -FEAS_TOL and infeasible is None:
                infeasible = PolyRow(tuple(0.0 for _ in variables), -1.0, "infeasible")
            continue
        if np.all(coeffs <= COEF_TOL) and row.bound >= -FEAS_TOL:
            continue  # implied by the implicit nonnegativity rows
        key = _normalize_key(coeffs)
        norm_bound = row.bound / scale
        prev = best.get(key)
        if prev is None or norm_bound < prev.bound / float(np.max(np.abs(prev.coeffs))):
            best[key] = row
    pruned = [best[k] for k in sorted(best.keys())]
    if infeasible is not None:
        pruned.insert(0, infeasible)
    return pruned


def fourier_motzkin(poly: RatePolytope, eliminate: Sequence[str]) -> RatePolytope:
    """Exact projection of the feasible set onto the non-eliminated variables.

    Nonnegativity rows of eliminated variables join the combination step;
    nonnegativity of kept variables stays implicit.  Redundant duplicates are
    pruned after each elimination; empty systems propagate as an explicit
    ``0 <= -1`` row.
    """
    eliminate = list(eliminate)
    for v in eliminate:
        if v not in poly.variables:
            raise OperatorError(f"cannot eliminate unknown variable {v!r}")
    variables = poly.variables
    rows = [PolyRow(tuple(r.coeffs), r.bound, r.tag) for r in poly.rows]
    for v in eliminate:
        idx = variables.index(v)
        nonneg = [0.0] * len(variables)
        nonneg[idx] = -1.0
        work = rows + [PolyRow(tuple(nonneg), 0.0, f"nonneg:{v}")]
        pos, neg, zero = [], [], []
        for row in work:
            c = row.coeffs[idx]
            if c > COEF_TOL:
                pos.append(row)
            elif c < -COEF_TOL:
                neg.append(row)
            else:
                zero.append(row)
        combined = list(zero)
        for rp in pos:
            cp = rp.coeffs[idx]
            ap = np.asarray(rp.coeffs) / cp
            bp = rp.bound / cp
            for rn in neg:
                cn = -rn.coeffs[idx]
                an = np.asarray(rn.coeffs) / cn
                bn = rn.bound / cn
                coeffs = ap + an
                coeffs[idx] = 0.0
                combined.append(PolyRow(tuple(coeffs), bp + bn, "fm"))
        rows = _prune_rows(combined, variables)
    kept = [v for v in variables if v not in eliminate]
    kept_idx = [variables.index(v) for v in kept]
    out_rows = [
        PolyRow(tuple(np.asarray(r.coeffs)[kept_idx]), r.bound, r.tag) for r in rows
    ]
    out_rows = _prune_rows(out_rows, tuple(kept)) if out_rows else out_rows
    return RatePolytope(tuple(kept), out_rows, {"eliminated": tuple(eliminate)})


@dataclass
class VertexEnumeration:
    vertices: list[tuple[float, float]]
    degenerate: bool
    unbounded: bool


def _rows_with_nonneg(poly: RatePolytope) -> tuple[np.ndarray, np.ndarray]:
    a, b = poly.coeff_matrix()
    eye = -np.eye(len(poly.variables))
    a = np.vstack([a, eye]) if a.size else eye
    b = np.concatenate([b, np.zeros(len(poly.variables))]) if b.size else np.zeros(2)
    return a, b


def vertices_2d(poly: RatePolytope) -> VertexEnumeration:
    """Vertices of the nonnegatively clamped region, counterclockwise.

    An infeasible system reports the origin with the ``degenerate`` flag, per
    the clamping convention.
    """
    if len(poly.variables) != 2:
        raise OperatorError("vertices_2d needs exactly two variables")
    a, b = _rows_with_nonneg(poly)
    m = len(b)
    points = []
    for i in range(m):
        for j in range(i + 1, m):
            mat = np.array([a[i], a[j]])
            det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
            if abs(det) < 1e-12:
                continue
            x = np.linalg.solve(mat, np.array([b[i], b[j]]))
            if np.all(a @ x <= b + FEAS_TOL):
                points.append(np.maximum(x, 0.0))
    unbounded = False
    thetas = np.linspace(0.0, math.pi / 2.0, 181)
    dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    row_a = poly.coeff_matrix()[0]
    if row_a.size == 0:
        unbounded = True
    else:
        proj = row_a @ dirs.T
        unbounded = bool(np.any(np.all(proj <= 1e-12, axis=0)))
    if not points:
        return VertexEnumeration([(0.0, 0.0)], True, unbounded)
    pts = np.array(points)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    uniq: list = []
    for p in pts:
        if all(np.max(np.abs(p - q)) > FEAS_TOL for q in uniq):
            uniq.append(p)
    pts = np.array(uniq)
    if len(pts) == 1 and np.max(np.abs(pts[0])) <= FEAS_TOL:
        return VertexEnumeration([(0.0, 0.0)], not unbounded, unbounded)
    center = pts.mean(axis=0)
    angles = np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0])
    order = np.argsort(angles, kind="stable")
    pts = pts[order]
    start = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
    pts = np.roll(pts, -start, axis=0)
    return VertexEnumeration([(float(x), float(y)) for x, y in pts], False, unbounded)


def minimal_2d(poly: RatePolytope) -> RatePolytope:
    """Strictly irredundant row set: a row is dropped iff removal changes nothing."""
    if len(poly.variables) != 2:
        raise OperatorError("minimal_2d needs exactly two variables")
    rows = _prune_rows(list(poly.rows), poly.variables)
    rows = [r for r in rows if np.max(np.abs(r.coeffs)) > COEF_TOL]
    keep = list(rows)
    order = sorted(range(len(keep)), key=lambda i: (_normalize_key(np.asarray(keep[i].coeffs)), keep[i].bound))
    removed = set()
    for i in order:
        trial = [keep[j] for j in range(len(keep)) if j != i and j not in removed]
        sub = RatePolytope(poly.variables, trial)
        enum = vertices_2d(sub)
        if enum.unbounded:
            continue
        row = keep[i]
        a = np.asarray(row.coeffs)
        if all(float(a @ np.asarray(v)) <= row.bound + FEAS_TOL for v in enum.vertices):
            removed.add(i)
    out = [keep[i] for i in range(len(keep)) if i not in removed]
    return RatePolytope(poly.variables, out, dict(poly.meta))


# ---------------------------------------------------------------------------
# union sweep over input distributions
# ---------------------------------------------------------------------------


@dataclass
class SweepResult:
    thetas: np.ndarray
    radii: np.ndarray
    points: np.ndarray  # (n_rays, 2) frontier coordinates
    evaluations: int
    degenerate_count: int

    def rows(self) -> list[tuple[float, float, float]]:
        return [
            (float(t), float(p[0]), float(p[1]))
            for t, p in zip(self.thetas, self.points)
        ]


def _simplex_grid(size: int, resolution: int) -> list[np.ndarray]:
    """Distributions on ``size`` atoms with weights k/(resolution-1), lexicographic."""
    if resolution < 2:
        raise ValueError("grid resolution must be at least 2 points per simplex edge")
    steps = resolution - 1
    out = []
    for comp in itertools.product(range(steps + 1), repeat=size - 1):
        rest = steps - sum(comp)
        if rest < 0:
            continue
        out.append(np.array(comp + (rest,), dtype=float) / steps)
    return out


def _t1_distributions(channel: ChannelSpec, resolution: int, q_size: int):
    n1, n2 = len(channel.inputs["X1"]), len(channel.inputs["X2"])
    q_grid = _simplex_grid(q_size, resolution) if q_size > 1 else [np.array([1.0])]
    c1_grid = _simplex_grid(n1, resolution)
    c2_grid = _simplex_grid(n2, resolution)
    per_q = list(itertools.product(c1_grid, c2_grid))
    for pq in q_grid:
        for combo in itertools.product(per_q, repeat=q_size):
            yield InputDistribution(
                kind="t1",
                q=pq,
                x1_given_q=np.stack([c[0] for c in combo]),
                x2_given_q=np.stack([c[1] for c in combo]),
            )


def _hk_distributions(channel: ChannelSpec, resolution: int):
    grids = [
        _simplex_grid(len(channel.part_alphabet(reg)), resolution)
        for reg in ("X10", "X11", "X20", "X22")
    ]
    for combo in itertools.product(*grids):
        yield InputDistribution(
            kind="hk",
            marginals={reg: vec for reg, vec in zip(("X10", "X11", "X20", "X22"), combo)},
        )


def _count_t1(channel, resolution, q_size):
    n1, n2 = len(channel.inputs["X1"]), len(channel.inputs["X2"])
    g = lambda k: len(_simplex_grid(k, resolution))
    nq = g(q_size) if q_size > 1 else 1
    return nq * (g(n1) * g(n2)) ** q_size


def region_builder(theorem: str) -> Callable:
    builders = {
        "t1": theorem1_region,
        "conjecture": conjecture_region,
        "t2": theorem2_region,
        "hk-nosecrecy": lambda ch, d, params, pen, smoothing="none": hk_nosecrecy_region(
            ch, d, params.eps, pen
        ),
    }
    if theorem not in builders:
        raise ValueError(f"unknown theorem selector {theorem!r}")
    return builders[theorem]


def _ray_radii(poly: RatePolytope, dirs: np.ndarray) -> np.ndarray:
    """Largest feasible scaling along each nonnegative ray direction.

    Region rows have nonnegative coefficients, so a negative bound means the
    clamped region is empty and every ray collapses to the origin.
    """
    a, b = poly.coeff_matrix()
    if a.size == 0:
        return np.full(len(dirs), math.inf)
    if np.any(b < -FEAS_TOL):
        return np.zeros(len(dirs))
    proj = a @ dirs.T  # (rows, rays)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(proj > COEF_TOL, b[:, None] / np.maximum(proj, COEF_TOL), math.inf)
    return np.maximum(np.min(ratios, axis=0), 0.0)


def sweep_union(
    channel: ChannelSpec,
    theorem: str,
    params: ToleranceParams,
    penalties: PenaltyMode,
    grid: int,
    q_size: int = 1,
    rays: int = 91,
    max_evals: int = 20000,
    smoothing: str = "none",
) -> SweepResult:
    """Frontier of the union of per-distribution regions over a simplex grid.

    Regions are evaluated per grid distribution (possibly in parallel, capped
    by ``ONESHOT_THREADS``) and merged by pointwise maximum along fixed ray
    directions, in grid order, so output is deterministic.
    """
    if grid < 2:
        raise ValueError("grid resolution must be >= 2")
    if q_size < 1 or q_size > 4:
        raise ValueError("q_size must lie in 1..4")
    if theorem != "t1" and not channel.has_splits():
        raise OperatorError(f"theorem {theorem!r} sweeps require a channel with splits")
    if theorem == "t1":
        count = _count_t1(channel, grid, q_size)
        dists = _t1_distributions(channel, grid, q_size)
    else:
        grids = [len(_simplex_grid(len(channel.part_alphabet(r)), grid)) for r in ("X10", "X11", "X20", "X22")]
        count = int(np.prod(grids))
        dists = _hk_distributions(channel, grid)
    if count > max_evals:
        raise ValueError(f"grid of {count} distributions exceeds the cap of {max_evals}")
    build = region_builder(theorem)
    thetas = np.linspace(0.0, math.pi / 2.0, rays)
    dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)

    def one(dist: InputDistribution) -> np.ndarray:
        poly = build(channel, dist, params, penalties, smoothing=smoothing)
        return _ray_radii(poly, dirs)

    workers = max(1, int(os.environ.get("ONESHOT_THREADS", "1")))
    dist_list = list(dists)
    if workers == 1:
        all_radii = [one(d) for d in dist_list]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            all_radii = list(pool.map(one, dist_list))
    frontier = np.zeros(rays)
    degenerate = 0
    for radii in all_radii:  # grid order; max is order-independent anyway
        if np.all(radii <= FEAS_TOL):
            degenerate += 1
        frontier = np.maximum(frontier, radii)
    points = dirs * frontier[:, None]
    return SweepResult(thetas, frontier, points, len(dist_list), degenerate)
