"""Condition checkers for disjoint transitivity, mixing and chaos.

Each checker sweeps n = 1..n_max, evaluates the relevant sup quantities
of the weight-product cocycles over a finite compact set K (or a Borel
subset E_n of it chosen by the deficit policy), and reports the first n
at which all quantities fall strictly below epsilon.  The conditions are
limit statements, so a failed sweep is reported as "not verified within
bound", never as a disproof.

Quantities per operator index l (power r_l), at sweep index n:

* ``fwd_l``          forward cocycle at r_l * n
* ``bwd_l``          backward cocycle at r_l * n
* ``cross_bwd_s_l``  bwd_s((r_l-r_s)n) * bwd_l(r_l n) / bwd_s(r_l n)
* ``cross_fwd_s_l``  fwd_l((r_l-r_s)n) * bwd_s(r_s n) / bwd_l(r_s n)
* ``series_l``       sum over t of fwd_l(t r_l n) + bwd_l(t r_l n),
                     truncated at t_max plus a certified geometric tail

All sweep values are accumulated in log space and exponentiated, which
keeps long products exact to ~1e-13 relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _accel
from .group import CompactSet, GroupElement, GroupModel, aperiodicity_bound
from .orlicz import OrliczVector
from .translation import (
    ClampExpWeight,
    ConstantWeight,
    Weight,
    WeightedTranslation,
)
from .young import YoungFunction

VERDICT_VERIFIED = "verified"
VERDICT_NOT_VERIFIED = "not_verified_within_bound"
VERDICT_REFUSED = "refused"

_COUNTING_KINDS = {"int_line", "int_lattice", "heisenberg_int"}
_TAIL_RATIO_CAP = 0.99
_MAX_TABLE_CELLS = 5 * 10**7


class DynamicsError(Exception):
    pass


class ScenarioError(DynamicsError):
    pass


class SupportEscapesKError(DynamicsError):
    pass


class DisjointnessViolatedError(DynamicsError):
    pass


class NotChaoticAtNError(DynamicsError):
    pass


class CheckerDisagreementError(DynamicsError):
    """The reduced and general checkers disagreed; indicates a defect."""


@dataclass(frozen=True)
class Scenario:
    """Inputs for one checker run.

    ``e_deficit_cap`` is the Haar-measure budget the sweep may discard
    from K when selecting E_n (only for lattice models; counting-measure
    models always use E_n = K).
    """

    model: GroupModel
    phi: YoungFunction
    a: GroupElement
    weights: tuple
    powers: tuple
    K: CompactSet
    epsilon: float
    n_max: int
    t_max: int = 50
    e_deficit_cap: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "powers", tuple(int(r) for r in self.powers))
        if len(self.weights) != len(self.powers) or not self.weights:
            raise ScenarioError("need equally many weights and powers, at least one")
        if self.powers[0] < 1 or any(
            b <= a for a, b in zip(self.powers, self.powers[1:])
        ):
            raise ScenarioError("powers must be strictly increasing and >= 1")
        if self.a.model != self.model or self.K.model != self.model:
            raise ScenarioError("element / set belong to a different group model")
        if not self.K.measure > 0:
            raise ScenarioError("K must have positive measure")
        if not self.epsilon > 0:
            raise ScenarioError("epsilon must be positive")
        if self.n_max < 1 or self.t_max < 1:
            raise ScenarioError("n_max and t_max must be >= 1")
        if self.e_deficit_cap < 0:
            raise ScenarioError("deficit cap must be nonnegative")
        if self.e_deficit_cap > 0 and self.model.kind in _COUNTING_KINDS:
            raise ScenarioError(
                "counting-measure models always use E_n = K; deficit cap must be 0"
            )
        for i, w in enumerate(self.weights, start=1):
            if not isinstance(w, Weight):
                raise ScenarioError("weights must be Weight instances")
            try:
                w(self.model.identity())  # probe: coordinate index compatible
            except Exception as exc:
                raise ScenarioError(f"weight {i} cannot be evaluated: {exc}") from exc
        if self.model.kind == "heisenberg_lattice":
            tw = self.a.units[1] * Fraction(self.model.h).limit_denominator(10**12)
            if tw.denominator != 1:
                raise ScenarioError(
                    "heisenberg lattice: a's y-coordinate times h must be an integer "
                    "so orbit products stay on the lattice"
                )

    @property
    def L(self) -> int:
        return len(self.weights)

    def operator(self, idx: int) -> WeightedTranslation:
        return WeightedTranslation(self.model, self.a, self.weights[idx])

    def operators(self) -> tuple:
        return tuple(self.operator(i) for i in range(self.L))

    def summary(self) -> dict:
        return {
            "group": {"kind": self.model.kind, "h": self.model.h},
            "a": list(self.a.units),
            "weights": [repr(w) for w in self.weights],
            "powers": list(self.powers),
            "set_size": len(self.K),
            "set_measure": self.K.measure,
            "epsilon": self.epsilon,
            "n_max": self.n_max,
            "t_max": self.t_max,
            "e_deficit_cap": self.e_deficit_cap,
        }


@dataclass(frozen=True)
class ConditionReport:
    mode: str
    verdict: str
    n_star: int | None
    reason: str | None
    columns: tuple
    rows: tuple  # (n, values tuple, e_deficit)
    sub_verdicts: tuple = ()
    meta: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.verdict == VERDICT_VERIFIED

    def row(self, n: int):
        for row in self.rows:
            if row[0] == n:
                return row
        raise KeyError(f"no trace row for n={n}")

    def value(self, n: int, column: str) -> float:
        return self.row(n)[1][self.columns.index(column)]

    def trace_csv(self) -> str:
        lines = ["n," + ",".join(self.columns) + ",e_k_deficit"]
        for n, values, deficit in self.rows:
            cells = [str(n)] + ["%.15g" % v for v in values] + ["%.15g" % deficit]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        doc = {
            "mode": self.mode,
            "verdict": self.verdict,
            "n_star": self.n_star,
            "reason": self.reason,
            "columns": list(self.columns),
            "scenario": dict(self.meta),
        }
        if self.sub_verdicts:
            doc["sub_verdicts"] = [dict(sv) for sv in self.sub_verdicts]
        return doc


# ---------------------------------------------------------------------------
# orbit tables


def _orbit_log_weights(model, points, units_arr, pow_elements, weight) -> np.ndarray:
    """(N, J) log-weights at points[i] * pow_elements[j]."""
    n_steps = len(pow_elements)
    if isinstance(weight, ConstantWeight):
        return np.full((len(points), n_steps), math.log(weight.c))
    if isinstance(weight, ClampExpWeight):
        pow_units = np.asarray([e.units for e in pow_elements], dtype=np.int64).reshape(
            n_steps, model.dim
        )
        return _accel.clampexp_orbit_logs(
            units_arr,
            pow_units,
            model.h,
            model.is_heisenberg,
            weight.coord,
            math.log(weight.base),
            weight.lo,
            weight.hi,
        )
    out = np.empty((len(points), n_steps))
    for i, x in enumerate(points):
        for j, pe in enumerate(pow_elements):
            out[i, j] = weight.log_value(x * pe)
    return out


class _OrbitTables:
    """Cumulative log-cocycle tables over the sorted points of K.

    fwd[l][:, n] = sum_{j=1..n} log w_l(x a^j)        (fwd[:, 0] = 0)
    bwd[l][:, n] = sum_{j=0..n-1} log w_l(x a^-j)     (bwd[:, 0] = 0)

    so the forward cocycle is exp(fwd[:, n]) and the backward cocycle is
    exp(-bwd[:, n]).
    """

    def __init__(self, scenario: Scenario, depths):
        self.points = scenario.K.sorted_elements()
        n_pts = len(self.points)
        max_depth = max(depths)
        if n_pts * max_depth > _MAX_TABLE_CELLS:
            raise ScenarioError(
                f"orbit table of {n_pts} x {max_depth} cells exceeds the desk-scale cap"
            )
        units = np.asarray([p.units for p in self.points], dtype=np.int64).reshape(
            n_pts, scenario.model.dim
        )
        a = scenario.a
        a_inv = a.inverse()
        fwd_pows = []
        cur = scenario.model.identity()
        for _ in range(max_depth):
            cur = cur * a
            fwd_pows.append(cur)
        bwd_pows = [scenario.model.identity()]
        cur = scenario.model.identity()
        for _ in range(max_depth - 1):
            cur = cur * a_inv
            bwd_pows.append(cur)
        self.fwd = []
        self.bwd = []
        for l, w in enumerate(scenario.weights):
            d = depths[l]
            logs_f = _orbit_log_weights(scenario.model, self.points, units, fwd_pows[:d], w)
            logs_b = _orbit_log_weights(scenario.model, self.points, units, bwd_pows[:d], w)
            zero = np.zeros((n_pts, 1))
            self.fwd.append(np.hstack([zero, np.cumsum(logs_f, axis=1)]))
            self.bwd.append(np.hstack([zero, np.cumsum(logs_b, axis=1)]))


# ---------------------------------------------------------------------------
# sweep machinery


def _refusal_reason(scenario: Scenario, weight_indices) -> str | None:
    cert = aperiodicity_bound(scenario.a, scenario.K, scenario.n_max)
    if cert.status == "periodic":
        return (
            "translation element is periodic (identity or finite order); "
            "transitivity requires an aperiodic element"
        )
    if cert.status == "not_within_bound":
        return (
            f"aperiodicity not certified within n_max={scenario.n_max}: "
            "K still meets its own translates at the bound"
        )
    for l in weight_indices:
        sup = scenario.weights[l].sup_bound()
        if sup <= 1.0:
            return (
                f"weight {l + 1}: sup(w) = {sup} <= 1, so the operator norm is "
                "at most 1 and the operator is never transitive"
            )
    return None


def _cross_pairs(L: int):
    return [(s, l) for s in range(L) for l in range(s + 1, L)]


def _select_e(accept_matrix: np.ndarray, eps: float, budget: int):
    """Choose E_n: keep everything except up to `budget` violating points.

    Returns (ok, keep_mask, dropped_count).  The largest admissible E is
    used (only points with some quantity >= eps are dropped); when the
    budget is too small the worst offenders are dropped for the trace and
    ok is False.
    """
    n_pts = accept_matrix.shape[1]
    worst = np.max(accept_matrix, axis=0)
    budget = min(budget, n_pts - 1)
    viol = np.flatnonzero(~(worst < eps))
    keep = np.ones(n_pts, dtype=bool)
    if viol.size == 0:
        return True, keep, 0
    if viol.size <= budget:
        keep[viol] = False
        return True, keep, int(viol.size)
    order = np.lexsort((np.arange(n_pts), -np.where(np.isnan(worst), np.inf, worst)))
    drop = order[:budget]
    keep[drop] = False
    return False, keep, int(budget)


def _sweep(scenario, tables, columns, quantities_at, budget):
    """Run n = 1..n_max; returns (rows, first verified n or None).

    ``quantities_at(n)`` returns (trace_matrix, accept_matrix), both of
    shape (num_columns, num_points); accept values may differ from trace
    values only where a quantity cannot be certified (chaos tails).
    """
    mass = scenario.model.haar_cell_mass
    rows = []
    n_star = None
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        for n in range(1, scenario.n_max + 1):
            trace, accept = quantities_at(n)
            ok, keep, dropped = _select_e(accept, scenario.epsilon, budget)
            sups = tuple(float(np.max(trace[q][keep])) for q in range(len(columns)))
            rows.append((n, sups, dropped * mass))
            if ok and n_star is None:
                n_star = n
    return tuple(rows), n_star


def _budget(scenario: Scenario) -> int:
    return int(math.floor(scenario.e_deficit_cap / scenario.model.haar_cell_mass + 1e-9))


def _transitive_columns(L: int):
    cols = [f"fwd_{l + 1}" for l in range(L)] + [f"bwd_{l + 1}" for l in range(L)]
    for s, l in _cross_pairs(L):
        cols.append(f"cross_bwd_s{s + 1}_l{l + 1}")
        cols.append(f"cross_fwd_s{s + 1}_l{l + 1}")
    return tuple(cols)


def _make_transitive_quantities(scenario, tables):
    r = scenario.powers
    L = scenario.L

    def quantities_at(n: int):
        qs = []
        for l in range(L):
            qs.append(np.exp(tables.fwd[l][:, r[l] * n]))
        for l in range(L):
            qs.append(np.exp(-tables.bwd[l][:, r[l] * n]))
        for s, l in _cross_pairs(L):
            gap = (r[l] - r[s]) * n
            qs.append(
                np.exp(
                    -tables.bwd[s][:, gap]
                    - tables.bwd[l][:, r[l] * n]
                    + tables.bwd[s][:, r[l] * n]
                )
            )
            qs.append(
                np.exp(
                    tables.fwd[l][:, gap]
                    - tables.bwd[s][:, r[s] * n]
                    + tables.bwd[l][:, r[s] * n]
                )
            )
        m = np.vstack(qs)
        return m, m

    return quantities_at


def check_disjoint_transitive(scenario: Scenario, override: bool = False) -> ConditionReport:
    """Search for an n at which all transitivity quantities are < epsilon.

    Refuses (unless overridden) when the translation element is not
    certified aperiodic on K or some weight has sup at most 1.
    """
    if scenario.L < 2:
        raise ScenarioError("disjoint transitivity needs at least two operators")
    return _run_transitive_mode(scenario, "disjoint_transitive", override)


def _run_transitive_mode(scenario, mode, override, mixing=False) -> ConditionReport:
    columns = _transitive_columns(scenario.L)
    reason = None if override else _refusal_reason(scenario, range(scenario.L))
    if reason is not None:
        return ConditionReport(
            mode, VERDICT_REFUSED, None, reason, columns, (), meta=scenario.summary()
        )
    depth = scenario.powers[-1] * scenario.n_max
    tables = _OrbitTables(scenario, [depth] * scenario.L)
    rows, n_star = _sweep(
        scenario, tables, columns, _make_transitive_quantities(scenario, tables), _budget(scenario)
    )
    if mixing:
        return _mixing_verdict(scenario, mode, columns, rows)
    verdict = VERDICT_VERIFIED if n_star is not None else VERDICT_NOT_VERIFIED
    return ConditionReport(
        mode, verdict, n_star, None, columns, rows, meta=scenario.summary()
    )


def check_disjoint_mixing(scenario: Scenario, override: bool = False) -> ConditionReport:
    """Like the transitive check, but the condition must hold at every n
    of a tail window [n_tail, n_max]; n_star reports n_tail."""
    if scenario.L < 2:
        raise ScenarioError("disjoint mixing needs at least two operators")
    return _run_transitive_mode(scenario, "disjoint_mixing", override, mixing=True)


def _mixing_verdict(scenario, mode, columns, rows) -> ConditionReport:
    budget_mass = _budget(scenario) * scenario.model.haar_cell_mass
    ok_flags = [
        all(v < scenario.epsilon for v in values) and deficit <= budget_mass + 1e-12
        for (_, values, deficit) in rows
    ]
    n_tail = None
    for i in range(len(ok_flags) - 1, -1, -1):
        if ok_flags[i]:
            n_tail = rows[i][0]
        else:
            break
    verdict = VERDICT_VERIFIED if n_tail is not None else VERDICT_NOT_VERIFIED
    return ConditionReport(
        mode, verdict, n_tail, None, columns, rows, meta=scenario.summary()
    )


def check_same_weight(scenario: Scenario, override: bool = False) -> ConditionReport:
    """Reduced checker for operators sharing one weight.

    The cross quantities collapse to plain cocycles at the power gaps;
    the general checker is also run and must agree (a built-in
    consistency assertion).
    """
    if scenario.L < 2:
        raise ScenarioError("the same-weight check needs at least two operators")
    columns = [f"fwd_{l + 1}" for l in range(scenario.L)]
    columns += [f"bwd_{l + 1}" for l in range(scenario.L)]
    for s, l in _cross_pairs(scenario.L):
        columns.append(f"gap_bwd_s{s + 1}_l{l + 1}")
        columns.append(f"gap_fwd_s{s + 1}_l{l + 1}")
    columns = tuple(columns)
    w0 = scenario.weights[0]
    if any(w != w0 for w in scenario.weights[1:]):
        return ConditionReport(
            "same_weight",
            VERDICT_REFUSED,
            None,
            "weights differ; the reduced check applies to one shared weight",
            columns,
            (),
            meta=scenario.summary(),
        )
    reason = None if override else _refusal_reason(scenario, range(scenario.L))
    if reason is not None:
        return ConditionReport(
            "same_weight", VERDICT_REFUSED, None, reason, columns, (), meta=scenario.summary()
        )
    depth = scenario.powers[-1] * scenario.n_max
    tables = _OrbitTables(scenario, [depth] * scenario.L)
    r = scenario.powers

    def quantities_at(n: int):
        qs = []
        for l in range(scenario.L):
            qs.append(np.exp(tables.fwd[l][:, r[l] * n]))
        for l in range(scenario.L):
            qs.append(np.exp(-tables.bwd[l][:, r[l] * n]))
        for s, l in _cross_pairs(scenario.L):
            gap = (r[l] - r[s]) * n
            qs.append(np.exp(-tables.bwd[0][:, gap]))
            qs.append(np.exp(tables.fwd[0][:, gap]))
        m = np.vstack(qs)
        return m, m

    rows, n_star = _sweep(scenario, tables, columns, quantities_at, _budget(scenario))
    verdict = VERDICT_VERIFIED if n_star is not None else VERDICT_NOT_VERIFIED
    general = _run_transitive_mode(scenario, "disjoint_transitive", override)
    if (general.verdict, general.n_star) != (verdict, n_star):
        raise CheckerDisagreementError(
            f"reduced ({verdict}, {n_star}) vs general ({general.verdict}, {general.n_star})"
        )
    return ConditionReport(
        "same_weight", verdict, n_star, None, columns, rows, meta=scenario.summary()
    )


def _series_quantities(tables, l, r_l, n, t_max):
    """(trace, accept, fwd, bwd) for the chaos series of operator l."""
    idx = np.arange(1, t_max + 1) * (r_l * n)
    terms = np.exp(tables.fwd[l][:, idx]) + np.exp(-tables.bwd[l][:, idx])
    trunc = np.sum(terms, axis=1)
    last, prev = terms[:, -1], terms[:, -2]
    rho = np.where(prev > 0, last / np.where(prev > 0, prev, 1.0), np.inf)
    certified = (rho < _TAIL_RATIO_CAP) | (last == 0.0)
    tail = np.where(certified & (last > 0), last * rho / (1.0 - rho), 0.0)
    trace = trunc + np.where(certified, tail, 0.0)
    accept = np.where(certified, trace, np.inf)
    fwd = np.exp(tables.fwd[l][:, r_l * n])
    bwd = np.exp(-tables.bwd[l][:, r_l * n])
    return trace, accept, fwd, bwd


def check_chaotic(scenario: Scenario, op_index: int = 0, override: bool = False) -> ConditionReport:
    """Chaos check for a single operator: the cocycle series over E must
    drop below epsilon, with a geometric tail certified from the ratio of
    the last two truncated terms (ratio < 0.99 required)."""
    if not 0 <= op_index < scenario.L:
        raise ScenarioError(f"op_index {op_index} out of range")
    if scenario.t_max < 8:
        raise ScenarioError("chaos checks need truncation depth t_max >= 8")
    lab = op_index + 1
    columns = (f"fwd_{lab}", f"bwd_{lab}", f"series_{lab}")
    reason = None if override else _refusal_reason(scenario, [op_index])
    if reason is not None:
        return ConditionReport(
            "chaotic", VERDICT_REFUSED, None, reason, columns, (), meta=scenario.summary()
        )
    r_l = scenario.powers[op_index]
    depths = [1] * scenario.L
    depths[op_index] = scenario.t_max * r_l * scenario.n_max
    tables = _OrbitTables(scenario, depths)

    def quantities_at(n: int):
        trace_s, accept_s, fwd, bwd = _series_quantities(
            tables, op_index, r_l, n, scenario.t_max
        )
        return np.vstack([fwd, bwd, trace_s]), np.vstack([fwd, bwd, accept_s])

    rows, n_star = _sweep(scenario, tables, columns, quantities_at, _budget(scenario))
    verdict = VERDICT_VERIFIED if n_star is not None else VERDICT_NOT_VERIFIED
    return ConditionReport(
        "chaotic", verdict, n_star, None, columns, rows, meta=scenario.summary()
    )


def check_disjoint_chaotic(scenario: Scenario, override: bool = False) -> ConditionReport:
    """Conjunction: every operator's chaos series and both cross-term
    families below epsilon at a common n.  Per-operator chaos verdicts
    are attached as sub-verdicts."""
    if scenario.L < 2:
        raise ScenarioError("disjoint chaos needs at least two operators")
    if scenario.t_max < 8:
        raise ScenarioError("chaos checks need truncation depth t_max >= 8")
    L = scenario.L
    r = scenario.powers
    columns = list(_transitive_columns(L)) + [f"series_{l + 1}" for l in range(L)]
    columns = tuple(columns)
    sub = []
    for l in range(L):
        rep = check_chaotic(scenario, op_index=l, override=override)
        sub.append({"op": l + 1, "verdict": rep.verdict, "n_star": rep.n_star})
    sub = tuple(sub)
    reason = None if override else _refusal_reason(scenario, range(L))
    if reason is not None:
        return ConditionReport(
            "disjoint_chaotic",
            VERDICT_REFUSED,
            None,
            reason,
            columns,
            (),
            sub_verdicts=sub,
            meta=scenario.summary(),
        )
    depths = [max(r[-1], scenario.t_max * r[l]) * scenario.n_max for l in range(L)]
    tables = _OrbitTables(scenario, depths)
    base_quants = _make_transitive_quantities(scenario, tables)

    def quantities_at(n: int):
        m, _ = base_quants(n)
        traces, accepts = [m], [m]
        for l in range(L):
            trace_s, accept_s, _, _ = _series_quantities(tables, l, r[l], n, scenario.t_max)
            traces.append(trace_s[None, :])
            accepts.append(accept_s[None, :])
        return np.vstack(traces), np.vstack(accepts)

    rows, n_star = _sweep(scenario, tables, columns, quantities_at, _budget(scenario))
    verdict = VERDICT_VERIFIED if n_star is not None else VERDICT_NOT_VERIFIED
    return ConditionReport(
        "disjoint_chaotic",
        verdict,
        n_star,
        None,
        columns,
        rows,
        sub_verdicts=sub,
        meta=scenario.summary(),
    )


# ---------------------------------------------------------------------------
# constructive witness and periodic points


def _check_supports(scenario, f, targets, E):
    K = scenario.K
    if not E.issubset(K):
        raise SupportEscapesKError("E must be a subset of K")
    for name, vec in [("f", f)] + [(f"g_{i + 1}", g) for i, g in enumerate(targets)]:
        for x in vec.support:
            if x not in K:
                raise SupportEscapesKError(f"support of {name} escapes K")


def build_witness(scenario, f, targets, n, E) -> OrliczVector:
    """Approximating vector f*chi_E + sum_l S_l^{r_l n}(g_l * chi_E).

    The number of targets must equal the number of operators (or be
    empty, in which case the witness degenerates to f*chi_E).
    """
    targets = tuple(targets)
    if targets and len(targets) != scenario.L:
        raise ScenarioError("need one target per operator (or none)")
    _check_supports(scenario, f, targets, E)
    v = f.restrict(E)
    for idx, g in enumerate(targets):
        op = scenario.operator(idx)
        v = v + op.apply_inv(g.restrict(E), scenario.powers[idx] * n)
    return v


def verify_witness(scenario, v, f, targets, n):
    """Residual norms by direct operator iteration (no cocycle tables).

    Returns (rho_0, [rho_1, ..., rho_L]) with rho_0 = N(v - f) and
    rho_l = N(T_l^{r_l n} v - g_l).
    """
    targets = tuple(targets)
    rho0 = (v - f).luxemburg_norm(scenario.phi)
    rhos = []
    for idx, g in enumerate(targets):
        op = scenario.operator(idx)
        image = op.apply(v, scenario.powers[idx] * n)
        rhos.append((image - g).luxemburg_norm(scenario.phi))
    return rho0, rhos


@dataclass(frozen=True)
class PeriodicPointResult:
    point: OrliczVector
    tail_bound: float
    n: int
    t_max: int


def build_periodic_point(
    op: WeightedTranslation,
    phi: YoungFunction,
    f: OrliczVector,
    E: CompactSet,
    n: int,
    t_max: int,
    epsilon: float | None = None,
) -> PeriodicPointResult:
    """Truncated bilateral orbit sum p = sum_m S^{mn}(f chi_E) + T^{mn}(f chi_E).

    The untruncated series is an exact fixed point of T^n; truncation at
    t_max leaves the residual T^{(t_max+1)n}(f chi_E) - S^{t_max n}(f chi_E),
    whose norm is bounded by the reported tail bound.  The translates
    E a^{mn} must be pairwise disjoint up to m = t_max; when epsilon is
    given, the cocycle series of f's operator at this n must already be
    below it on E.
    """
    if n < 1 or t_max < 0:
        raise DynamicsError("need n >= 1 and t_max >= 0")
    base = E.elements
    cur_set = E
    an = op.a**n
    for _ in range(2 * t_max):
        cur_set = cur_set.translate(an)
        if not base.isdisjoint(cur_set.elements):
            raise DisjointnessViolatedError(
                f"translates of E by powers of a^{n} are not pairwise disjoint"
            )
    if epsilon is not None and t_max >= 1:
        worst = 0.0
        for x in E:
            s = sum(
                op.cocycle_fwd(t * n, x) + op.cocycle_bwd(t * n, x)
                for t in range(1, t_max + 1)
            )
            worst = max(worst, s)
        if not worst < epsilon:
            raise NotChaoticAtNError(
                f"cocycle series {worst} not below epsilon={epsilon} at n={n}"
            )
    f_e = f.restrict(E)
    p = f_e
    cur = f_e
    for _ in range(t_max):
        cur = op.apply_inv(cur, n)
        p = p + cur
    bwd_last = cur
    cur = f_e
    for _ in range(t_max):
        cur = op.apply(cur, n)
        p = p + cur
    fwd_beyond = op.apply(cur, n)
    # residual of the truncation: T^{(t_max+1)n}(f chi_E) - S^{t_max n}(f chi_E)
    tail_bound = fwd_beyond.luxemburg_norm(phi) + bwd_last.luxemburg_norm(phi)
    return PeriodicPointResult(point=p, tail_bound=tail_bound, n=n, t_max=t_max)
