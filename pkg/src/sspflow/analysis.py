"""Cross-checking machinery around the solver.

Everything here re-derives facts through an independent route and
compares them against what the production solver reports:

* reference_solve: a Bellman-Ford label-correcting variant of the same
  algorithm, no potentials, no Dijkstra, same tie-break rule.
* verify_optimality: negative-cycle test over the residual network.
* check_lemmas: executable structural properties of a solver trace
  (monotone distances, nondecreasing path lengths, convex profile,
  empty arcs on every path, the bad-step bound, per-step optimality,
  reversed-path optimality).
* reconstruct: recover an intermediate flow from one residual arc and
  a length threshold, never reading the arc's original cost.
* gap_report: near-tie diagnostic over path lengths and signed cycle
  costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    AuxiliaryArc,
    InternalInvariantError,
    LemmaViolation,
    NoPath,
)
from .network import (
    AUXILIARY,
    Flow,
    TransformedNetwork,
    arc_is_forward,
    arc_reverse,
)
from .solver import (
    AugmentationStep,
    AugmentationTrace,
    Outcome,
    cost_function_from_steps,
    run_ssp,
)

INF = math.inf

# Improvements smaller than this are float noise, not a negative cycle.
_CYCLE_SLACK = 1e-12
# Slack for inequalities that are exact in real arithmetic but pass
# through potentials or repeated summation.
_CHECK_SLACK = 1e-9


# ---------------------------------------------------------------------------
# Flow replay

def replay_flows(trace: AugmentationTrace) -> tuple[Flow, ...]:
    """Rebuild f_0 .. f_N from the recorded paths and amounts.

    Uses the same exact-saturation arithmetic as the solver, so the
    result is bit-identical to flows retained at solve time.
    """
    if trace.intermediate_flows is not None:
        return trace.intermediate_flows
    net = trace.instance.base
    cap = [e.capacity for e in net.edges]
    f = [0.0] * net.m
    flows = [Flow(tuple(f), 0.0)]
    for step in trace.steps:
        amount = step.amount
        for a in step.path_arcs:
            e = a >> 1
            if a & 1:
                f[e] = 0.0 if f[e] == amount else f[e] - amount
            else:
                f[e] = cap[e] if cap[e] - f[e] == amount else f[e] + amount
        flows.append(Flow(tuple(f), step.flow_value_after))
    return tuple(flows)


# ---------------------------------------------------------------------------
# Bellman-Ford reference solver

def _present_arcs(net, f: Sequence[float]):
    """(arc, tail, head, cost) for every residual arc under flow f."""
    arcs = []
    for e, edge in enumerate(net.edges):
        if f[e] < edge.capacity:
            arcs.append((2 * e, edge.tail, edge.head, edge.cost))
        if f[e] > 0.0:
            arcs.append((2 * e + 1, edge.head, edge.tail, -edge.cost))
    return arcs


def _bf_labels(n_ids, arcs, source):
    """Lexicographic (dist, hops, arc seq) fixpoint by label correction.

    Candidate walks are edge-simple: a label never extends over an edge
    already on its path in either orientation. Shortest augmenting
    paths never need an edge twice (both orientations cancel), and
    allowing the reuse invites (x + c) - c rounding artifacts that
    undercut genuine simple paths.
    """
    labels = {v: (INF, 0, ()) for v in n_ids}
    labels[source] = (0.0, 0, ())
    cap_rounds = 4 * len(n_ids) + 16
    for _ in range(cap_rounds):
        changed = False
        for a, u, v, c in arcs:
            du, hu, su = labels[u]
            if du == INF:
                continue
            e = a >> 1
            if any(x >> 1 == e for x in su):
                continue
            cand = (du + c, hu + 1, su + (a,))
            if cand < labels[v]:
                labels[v] = cand
                changed = True
        if not changed:
            return labels
    raise InternalInvariantError(
        "label correction failed to converge; negative cycle suspected"
    )


def reference_solve(
    instance: TransformedNetwork,
    *,
    z: float | None = None,
    retain_flows: bool = False,
) -> AugmentationTrace:
    """Same algorithm, independent machinery: Bellman-Ford on raw costs.

    Produces the same step sequence as solve() (paths, lengths,
    amounts) and serves as its oracle in tests.
    """
    if z is None:
        z = instance.z
    net = instance.base
    cap = [e.capacity for e in net.edges]
    f = [0.0] * net.m
    value = 0.0
    drafts = []
    flows = [Flow(tuple(f), 0.0)] if retain_flows else None

    while True:
        if value == z:
            outcome = Outcome.REACHED_Z
            break
        labels = _bf_labels(net.nodes, _present_arcs(net, f), instance.source)
        dist_t, _, seq_t = labels[instance.sink]
        if dist_t == INF:
            outcome = Outcome.MAX_FLOW_BELOW_Z
            break
        length = math.fsum(
            -net.edges[a >> 1].cost if a & 1 else net.edges[a >> 1].cost
            for a in seq_t
        )
        amount = z - value
        for a in seq_t:
            e = a >> 1
            r = f[e] if a & 1 else cap[e] - f[e]
            if r < amount:
                amount = r
        saturated, empty, good = [], [], []
        nodes_on_path = [instance.source]
        for a in seq_t:
            e = a >> 1
            edge = net.edges[e]
            nodes_on_path.append(edge.tail if a & 1 else edge.head)
            if a & 1:
                if f[e] == cap[e]:
                    empty.append(a)
                    if edge.kind != AUXILIARY:
                        good.append(a)
                if f[e] == amount:
                    saturated.append(a)
                    f[e] = 0.0
                else:
                    f[e] -= amount
            else:
                if f[e] == 0.0:
                    empty.append(a)
                    if edge.kind != AUXILIARY:
                        good.append(a)
                if cap[e] - f[e] == amount:
                    saturated.append(a)
                    f[e] = cap[e]
                else:
                    f[e] += amount
        value = z if z - value == amount else value + amount
        drafts.append(
            dict(
                index=len(drafts) + 1,
                path_nodes=tuple(nodes_on_path),
                path_arcs=tuple(seq_t),
                length=length,
                amount=amount,
                flow_value_after=value,
                saturated_arcs=tuple(saturated),
                empty_arcs=tuple(empty),
                good_arcs=tuple(good),
                contains_good_arc=bool(good),
            )
        )
        if retain_flows:
            flows.append(Flow(tuple(f), value))

    return AugmentationTrace(
        instance=instance,
        steps=tuple(AugmentationStep(**d) for d in drafts),
        outcome=outcome,
        final_flow=Flow(tuple(f), value),
        intermediate_flows=tuple(flows) if retain_flows else None,
    )


# ---------------------------------------------------------------------------
# Optimality

def verify_optimality(instance: TransformedNetwork, flow: Flow) -> bool:
    """True iff the residual network has no negative-cost cycle."""
    net = instance.base
    arcs = _present_arcs(net, flow.values)
    dist = {v: 0.0 for v in net.nodes}
    for _ in range(net.n):
        changed = False
        for _, u, v, c in arcs:
            if dist[u] + c < dist[v] - _CYCLE_SLACK:
                dist[v] = dist[u] + c
                changed = True
        if not changed:
            return True
    return not any(dist[u] + c < dist[v] - _CYCLE_SLACK for _, u, v, c in arcs)


def _bf_distance(n_ids, arcs, source) -> dict:
    """Plain shortest distances (negative costs allowed, no neg cycles)."""
    dist = {v: INF for v in n_ids}
    dist[source] = 0.0
    for _ in range(len(n_ids) + 1):
        changed = False
        for _, u, v, c in arcs:
            if dist[u] < INF and dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                changed = True
        if not changed:
            break
    return dist


# ---------------------------------------------------------------------------
# Step classification

@dataclass(frozen=True)
class FlowClassification:
    """Good/bad label per augmentation step (1-based indices)."""

    step_good: tuple[bool, ...]
    bad_steps: tuple[int, ...]

    @property
    def bad_count(self) -> int:
        return len(self.bad_steps)


def classify(trace: AugmentationTrace) -> FlowClassification:
    """Recompute good/bad per step from replayed flows.

    A step is good when its path contains an empty arc over a
    non-auxiliary edge. Cross-checks the solver's own recording and
    enforces the bad-step bound (at most one per node).
    """
    flows = replay_flows(trace)
    net = trace.instance.base
    good_flags = []
    bad = []
    for j, step in enumerate(trace.steps):
        pre = flows[j].values
        has_good = False
        for a in step.path_arcs:
            e = a >> 1
            if net.edges[e].kind == AUXILIARY:
                continue
            if a & 1:
                if pre[e] == net.edges[e].capacity:
                    has_good = True
                    break
            else:
                if pre[e] == 0.0:
                    has_good = True
                    break
        if has_good != step.contains_good_arc:
            raise InternalInvariantError(
                f"step {step.index}: recorded good flag {step.contains_good_arc} "
                f"disagrees with replay {has_good}"
            )
        good_flags.append(has_good)
        if not has_good:
            bad.append(step.index)
    if len(bad) > trace.instance.n:
        raise LemmaViolation(
            f"{len(bad)} bad steps exceed the node-count bound {trace.instance.n}"
        )
    return FlowClassification(tuple(good_flags), tuple(bad))


# ---------------------------------------------------------------------------
# Lemma checks

@dataclass(frozen=True)
class LemmaCheck:
    check_id: str
    passed: bool
    first_violation_step: int | None = None
    detail: str = ""
    skipped: bool = False


@dataclass(frozen=True)
class LemmaReport:
    checks: tuple[LemmaCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "SKIP" if c.skipped else ("PASS" if c.passed else "FAIL")
            where = "" if c.first_violation_step is None else f" at step {c.first_violation_step}"
            detail = f" ({c.detail})" if c.detail else ""
            lines.append(f"{status:4s} {c.check_id}{where}{detail}")
        return "\n".join(lines)

    def as_csv_rows(self) -> list[str]:
        rows = ["lemma_id,pass,first_violation_step"]
        for c in self.checks:
            step = "" if c.first_violation_step is None else str(c.first_violation_step)
            rows.append(f"{c.check_id},{int(c.passed)},{step}")
        return rows


def _check_distance_monotonicity(trace) -> LemmaCheck:
    cid = "distance_monotonicity"
    if trace.initial_distances_from_s is None:
        return LemmaCheck(cid, True, skipped=True, detail="no recorded distances")
    seq_s = [trace.initial_distances_from_s] + [
        s.distances_from_s for s in trace.steps
    ]
    seq_t = [trace.initial_distances_to_t] + [s.distances_to_t for s in trace.steps]
    for name, snapshots in (("from_s", seq_s), ("to_t", seq_t)):
        for i in range(len(snapshots) - 1):
            prev, nxt = snapshots[i], snapshots[i + 1]
            if prev is None or nxt is None:
                continue
            for v, d in prev.items():
                dn = nxt[v]
                if d == INF:
                    if dn != INF:
                        return LemmaCheck(
                            cid, False, i + 1,
                            f"node {v} became reachable ({name})",
                        )
                elif dn < d - _CHECK_SLACK:
                    return LemmaCheck(
                        cid, False, i + 1,
                        f"node {v} distance dropped {d} -> {dn} ({name})",
                    )
    return LemmaCheck(cid, True)


def _check_path_length_increase(trace) -> LemmaCheck:
    cid = "path_length_increase"
    ties = 0
    for a, b in zip(trace.steps, trace.steps[1:]):
        if b.length < a.length:
            return LemmaCheck(
                cid, False, b.index, f"length dropped {a.length} -> {b.length}"
            )
        if b.length == a.length:
            ties += 1
    detail = f"{ties} exact tie(s)" if ties else ""
    return LemmaCheck(cid, True, detail=detail)


def _check_cost_function_shape(trace) -> LemmaCheck:
    cid = "cost_function_shape"
    cf = cost_function_from_steps((s.length, s.amount) for s in trace.steps)
    for j in range(1, len(cf.slopes)):
        if cf.slopes[j] <= cf.slopes[j - 1]:
            return LemmaCheck(
                cid, False, None,
                f"slope not increasing at breakpoint {j}",
            )
    for j, (x, y) in enumerate(cf.breakpoints[1:], start=1):
        x0, y0 = cf.breakpoints[j - 1]
        if x <= x0:
            return LemmaCheck(cid, False, None, f"breakpoint {j} not advancing")
        want = y0 + cf.slopes[j - 1] * (x - x0)
        if abs(want - y) > _CHECK_SLACK * max(1.0, abs(y)):
            return LemmaCheck(cid, False, None, f"discontinuity at breakpoint {j}")
    return LemmaCheck(cid, True)


def _check_empty_arc_on_path(trace, flows) -> LemmaCheck:
    cid = "empty_arc_on_path"
    net = trace.instance.base
    for j, step in enumerate(trace.steps):
        pre = flows[j].values
        found = False
        for a in step.path_arcs:
            e = a >> 1
            if a & 1:
                found = pre[e] == net.edges[e].capacity
            else:
                found = pre[e] == 0.0
            if found:
                break
        if not found:
            return LemmaCheck(cid, False, step.index, "no empty arc on path")
    return LemmaCheck(cid, True)


def _check_bad_flow_bound(trace) -> LemmaCheck:
    cid = "bad_flow_bound"
    try:
        cls = classify(trace)
    except LemmaViolation as exc:
        return LemmaCheck(cid, False, None, str(exc))
    return LemmaCheck(cid, True, detail=f"{cls.bad_count} bad step(s)")


def _check_no_negative_cycle(trace, flows) -> LemmaCheck:
    cid = "no_negative_cycle"
    for j, flow in enumerate(flows):
        if not verify_optimality(trace.instance, flow):
            return LemmaCheck(
                cid, False, j if j > 0 else None,
                f"negative residual cycle at flow {j}",
            )
    return LemmaCheck(cid, True)


def _check_reverse_path(trace, flows, node_limit) -> LemmaCheck:
    cid = "reverse_path_optimal"
    inst = trace.instance
    if inst.n > node_limit:
        return LemmaCheck(
            cid, True, skipped=True, detail=f"n={inst.n} above limit {node_limit}"
        )
    net = inst.base
    for j, step in enumerate(trace.steps):
        post = flows[j + 1]
        arcs = _present_arcs(net, post.values)
        present = {a for a, *_ in arcs}
        reversed_arcs = [arc_reverse(a) for a in reversed(step.path_arcs)]
        if any(a not in present for a in reversed_arcs):
            return LemmaCheck(cid, False, step.index, "reversed path not present")
        dist = _bf_distance(net.nodes, arcs, inst.sink)
        best = dist[inst.source]
        if abs(best - (-step.length)) > _CHECK_SLACK * max(1.0, abs(step.length)):
            return LemmaCheck(
                cid, False, step.index,
                f"reversed path cost {-step.length} vs shortest {best}",
            )
    return LemmaCheck(cid, True)


def _check_no_backward_aux(trace) -> LemmaCheck:
    cid = "no_backward_aux_augmentation"
    net = trace.instance.base
    for step in trace.steps:
        for a in step.path_arcs:
            if (a & 1) and net.edges[a >> 1].kind == AUXILIARY:
                return LemmaCheck(
                    cid, False, step.index, f"backward auxiliary arc {a} on path"
                )
    return LemmaCheck(cid, True)


def check_lemmas(
    trace: AugmentationTrace, *, expensive_node_limit: int = 12
) -> LemmaReport:
    """Run the structural property suite against one trace."""
    flows = replay_flows(trace)
    checks = (
        _check_distance_monotonicity(trace),
        _check_path_length_increase(trace),
        _check_cost_function_shape(trace),
        _check_empty_arc_on_path(trace, flows),
        _check_bad_flow_bound(trace),
        _check_no_negative_cycle(trace, flows),
        _check_reverse_path(trace, flows, expensive_node_limit),
        _check_no_backward_aux(trace),
    )
    return LemmaReport(checks)


# ---------------------------------------------------------------------------
# Flow reconstruction

def reconstruct(instance: TransformedNetwork, arc: int, threshold: float) -> Flow:
    """Recover an intermediate flow from (arc, length threshold).

    Replaces the cost of the arc's edge (cost bound if the arc is
    forward, 0 if backward), reruns the solver on the modified
    instance, and stops before augmenting along any path longer than
    the threshold. The arc's original cost is never read.
    """
    e = arc >> 1
    if not 0 <= e < instance.m:
        raise ValueError(f"arc {arc} outside instance")
    if instance.base.edges[e].kind == AUXILIARY:
        raise AuxiliaryArc(f"arc {arc} lies on an auxiliary edge")
    new_cost = instance.base.cost_bound if arc_is_forward(arc) else 0.0
    modified = TransformedNetwork(
        instance.base.with_edge_cost(e, new_cost),
        instance.source,
        instance.sink,
        instance.z,
    )
    trace = run_ssp(
        modified, stop_above_length=threshold, record_distances=False
    )
    if trace.outcome is Outcome.MAX_FLOW_BELOW_Z and not trace.steps:
        raise NoPath("modified instance has no source-sink path")
    return trace.final_flow


@dataclass(frozen=True)
class ReconstructionCase:
    """One harvested (arc, threshold, expected flow) triple."""

    arc: int
    threshold: float
    expected: Flow
    step_index: int


def harvest_reconstruction_cases(
    trace: AugmentationTrace, *, max_arcs_per_step: int = 2
) -> list[ReconstructionCase]:
    """Triples that reconstruction must recover, read off a solved trace.

    For each step i whose path contains good arcs, the flow before
    step i is recoverable from any of those arcs together with any
    threshold in [previous length, this length).
    """
    flows = replay_flows(trace)
    cases = []
    for j, step in enumerate(trace.steps):
        if not step.good_arcs:
            continue
        lo = trace.steps[j - 1].length if j > 0 else 0.0
        hi = step.length
        if not lo < hi:
            continue
        thresholds = [lo, (lo + hi) / 2]
        if hi - 1e-9 > lo:
            thresholds.append(hi - 1e-9)
        for a in step.good_arcs[:max_arcs_per_step]:
            for d in thresholds:
                cases.append(ReconstructionCase(a, d, flows[j], step.index))
    return cases


def check_reconstruction(
    instance: TransformedNetwork, cases: Iterable[ReconstructionCase]
) -> list[tuple[ReconstructionCase, bool]]:
    """Run reconstruction on each case; True means exact recovery."""
    results = []
    for case in cases:
        got = reconstruct(instance, case.arc, case.threshold)
        results.append((case, got.values == case.expected.values))
    return results


# ---------------------------------------------------------------------------
# Near-tie diagnostics

@dataclass(frozen=True)
class GapReport:
    """Smallest observed separations; near-zero values signal tie risk."""

    min_path_gap: float
    min_abs_cycle_cost: float
    paths_enumerated: int
    cycles_enumerated: int
    truncated: bool

    @property
    def tie_risk(self) -> bool:
        return self.min_path_gap < 1e-12 or self.min_abs_cycle_cost < 1e-12


def gap_report(
    instance: TransformedNetwork,
    *,
    max_hops: int = 8,
    budget: int = 20000,
) -> GapReport:
    """Enumerate short paths and cycles over both edge orientations.

    Each edge contributes a forward arc (cost c) and a backward arc
    (cost -c); a walk may use each edge once. Reports the minimum gap
    between distinct source-sink path costs and the minimum absolute
    cycle cost, over everything enumerated within the budget.
    """
    net = instance.base
    idx = {v: i for i, v in enumerate(net.nodes)}
    n = net.n
    out: list[list[tuple[int, int, float]]] = [[] for _ in range(n)]
    for e, edge in enumerate(net.edges):
        if edge.capacity > 0:
            out[idx[edge.tail]].append((2 * e, idx[edge.head], edge.cost))
            out[idx[edge.head]].append((2 * e + 1, idx[edge.tail], -edge.cost))

    state = {"count": 0, "truncated": False}
    path_costs: list[float] = []
    cycle_costs: list[float] = []

    def paths_dfs(u, target, visited, used_edges, costs):
        if state["count"] >= budget:
            state["truncated"] = True
            return
        if len(costs) >= max_hops:
            return
        for a, v, c in out[u]:
            if a >> 1 in used_edges:
                continue
            if v == target:
                state["count"] += 1
                path_costs.append(math.fsum(costs + [c]))
                continue
            if v in visited:
                continue
            visited.add(v)
            used_edges.add(a >> 1)
            paths_dfs(v, target, visited, used_edges, costs + [c])
            used_edges.discard(a >> 1)
            visited.discard(v)

    s, t = idx[instance.source], idx[instance.sink]
    paths_dfs(s, t, {s}, set(), [])

    def cycles_dfs(u, start, visited, used_edges, costs):
        if state["count"] >= budget:
            state["truncated"] = True
            return
        if len(costs) >= max_hops:
            return
        for a, v, c in out[u]:
            if a >> 1 in used_edges:
                continue
            if v == start and costs:
                state["count"] += 1
                cycle_costs.append(math.fsum(costs + [c]))
                continue
            if v in visited or v < start:
                continue
            visited.add(v)
            used_edges.add(a >> 1)
            cycles_dfs(v, start, visited, used_edges, costs + [c])
            used_edges.discard(a >> 1)
            visited.discard(v)

    for start in range(n):
        cycles_dfs(start, start, {start}, set(), [])

    path_costs.sort()
    min_gap = INF
    for a, b in zip(path_costs, path_costs[1:]):
        min_gap = min(min_gap, b - a)
    min_cycle = min((abs(c) for c in cycle_costs), default=INF)
    return GapReport(
        min_path_gap=min_gap,
        min_abs_cycle_cost=min_cycle,
        paths_enumerated=len(path_costs),
        cycles_enumerated=len(cycle_costs),
        truncated=state["truncated"],
    )
