"""Successive shortest path min-cost flow solver.

Starting from the zero flow, each iteration finds a cheapest
source-sink path in the residual network, pushes as much flow as the
path and the remaining demand allow, and repeats until the target
value z is reached or the sink becomes unreachable. Every intermediate
flow is a minimum-cost flow for its value, so path lengths never
decrease and the value-vs-cost profile is convex piecewise linear.

Shortest paths run Dijkstra over reduced costs with node potentials:
after each iteration the potential of every reachable node grows by
its distance, which keeps all residual arc costs nonnegative (asserted
with a 1e-9 slack for float rounding, then clamped). Path length is
reported as the exact-rounded sum of raw arc costs.

Ties are broken deterministically: labels are (length, arc count,
arc-index sequence), compared lexicographically, with arcs ordered by
edge index and forward before backward.

Augmentation assigns saturated arcs exactly (f := u or f := 0) rather
than accumulating, so emptiness predicates f == 0 and f == u remain
exact and the reached target value equals z bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from heapq import heappop, heappush
from typing import Iterable, Mapping, Sequence

from .errors import InternalInvariantError, IterationCapExceeded
from .network import Flow, TransformedNetwork

INF = math.inf

# Reduced costs are nonnegative in exact arithmetic; allow this much
# float rounding before declaring the potentials broken.
REDUCED_COST_SLACK = 1e-9


class Outcome(str, Enum):
    REACHED_Z = "reached_z"
    MAX_FLOW_BELOW_Z = "max_flow_below_z"
    STOPPED_ABOVE_LENGTH = "stopped_above_length"


@dataclass(frozen=True)
class AugmentationStep:
    """One augmentation: the path taken and the state changes it caused.

    distances_from_s / distances_to_t are the shortest-path distances
    in the residual network *after* this augmentation (None when the
    solve ran with record_distances=False, or past an early stop).
    Unreachable nodes carry math.inf.
    """

    index: int
    path_nodes: tuple[int, ...]
    path_arcs: tuple[int, ...]
    length: float
    amount: float
    flow_value_after: float
    saturated_arcs: tuple[int, ...]
    empty_arcs: tuple[int, ...]
    good_arcs: tuple[int, ...]
    contains_good_arc: bool
    distances_from_s: Mapping[int, float] | None = None
    distances_to_t: Mapping[int, float] | None = None


@dataclass(frozen=True)
class AugmentationTrace:
    """Full record of one solver run."""

    instance: TransformedNetwork
    steps: tuple[AugmentationStep, ...]
    outcome: Outcome
    final_flow: Flow
    initial_distances_from_s: Mapping[int, float] | None = None
    initial_distances_to_t: Mapping[int, float] | None = None
    intermediate_flows: tuple[Flow, ...] | None = None


class _Engine:
    """Mutable solver state over one transformed instance."""

    def __init__(self, instance: TransformedNetwork):
        net = instance.base
        self.instance = instance
        self.ids = net.nodes
        self.idx = {v: i for i, v in enumerate(net.nodes)}
        self.n = len(net.nodes)
        self.m = net.m
        self.tail = [self.idx[e.tail] for e in net.edges]
        self.head = [self.idx[e.head] for e in net.edges]
        self.cap = [e.capacity for e in net.edges]
        self.cost = [e.cost for e in net.edges]
        self.s = self.idx[instance.source]
        self.t = self.idx[instance.sink]
        # Static adjacency over all potential residual arcs; presence is
        # re-checked against the flow at relax time.
        self.out_arcs: list[list[int]] = [[] for _ in range(self.n)]
        self.in_arcs: list[list[int]] = [[] for _ in range(self.n)]
        for e in range(self.m):
            self.out_arcs[self.tail[e]].append(2 * e)
            self.in_arcs[self.head[e]].append(2 * e)
            self.out_arcs[self.head[e]].append(2 * e + 1)
            self.in_arcs[self.tail[e]].append(2 * e + 1)
        self.f = [0.0] * self.m
        self.value = 0.0
        self.pi = [0.0] * self.n

    # -- residual primitives ------------------------------------------------

    def res_cap(self, a: int) -> float:
        e = a >> 1
        return self.f[e] if a & 1 else self.cap[e] - self.f[e]

    def arc_cost(self, a: int) -> float:
        return -self.cost[a >> 1] if a & 1 else self.cost[a >> 1]

    def _reduced(self, a: int, u: int, v: int) -> float:
        rc = self.arc_cost(a) + self.pi[u] - self.pi[v]
        if rc < 0.0:
            if rc < -REDUCED_COST_SLACK:
                raise InternalInvariantError(
                    f"reduced cost {rc} on arc {a} below tolerance"
                )
            rc = 0.0
        return rc

    # -- shortest paths -----------------------------------------------------

    def dijkstra_forward(self):
        """Labels (reduced dist, hops, arc seq) from the source.

        Returns (dist, hops, seq) lists indexed by dense node index;
        seq[v] is the arc-index sequence of the selected path, the
        third tie-break component and the path extraction record.
        """
        dist = [INF] * self.n
        hops = [0] * self.n
        seq: list[tuple[int, ...] | None] = [None] * self.n
        done = [False] * self.n
        dist[self.s] = 0.0
        seq[self.s] = ()
        heap: list = [(0.0, 0, (), self.s)]
        while heap:
            d, h, sq, u = heappop(heap)
            if done[u] or dist[u] < d:
                continue
            done[u] = True
            du = dist[u]
            hu = hops[u]
            squ = seq[u]
            for a in self.out_arcs[u]:
                if self.res_cap(a) <= 0.0:
                    continue
                e = a >> 1
                v = self.tail[e] if a & 1 else self.head[e]
                if done[v]:
                    continue
                cand = du + self._reduced(a, u, v)
                if cand > dist[v]:
                    continue
                label = (cand, hu + 1, squ + (a,))
                if dist[v] < INF and label >= (dist[v], hops[v], seq[v]):
                    continue
                dist[v], hops[v], seq[v] = label
                heappush(heap, (cand, hu + 1, seq[v], v))
        return dist, hops, seq

    def dijkstra_reverse(self):
        """Reduced distances to the sink (reverse graph, no tie labels)."""
        dist = [INF] * self.n
        done = [False] * self.n
        dist[self.t] = 0.0
        heap: list = [(0.0, self.t)]
        while heap:
            d, v = heappop(heap)
            if done[v]:
                continue
            done[v] = True
            for a in self.in_arcs[v]:
                if self.res_cap(a) <= 0.0:
                    continue
                e = a >> 1
                u = self.head[e] if a & 1 else self.tail[e]
                if done[u]:
                    continue
                cand = d + self._reduced(a, u, v)
                if cand < dist[u]:
                    dist[u] = cand
                    heappush(heap, (cand, u))
        return dist

    def actual_distances(self, dist_red: Sequence[float]) -> dict[int, float]:
        """Map reduced source distances to actual ones, keyed by node id."""
        return {
            self.ids[i]: (dist_red[i] + self.pi[i] if dist_red[i] < INF else INF)
            for i in range(self.n)
        }

    def actual_distances_to_sink(self, dist_red: Sequence[float]) -> dict[int, float]:
        pit = self.pi[self.t]
        return {
            self.ids[i]: (dist_red[i] - self.pi[i] + pit if dist_red[i] < INF else INF)
            for i in range(self.n)
        }

    def update_potentials(self, dist_red: Sequence[float]) -> None:
        # Unreachable nodes get the largest finite shift. Any residual arc
        # leaving such a node enters the reachable set, so its reduced cost
        # moves by (shift - dist_red[head]) >= 0 and stays nonnegative;
        # arcs between unreachable nodes shift by equal amounts on both
        # ends. Without this, stale potentials on unreachable nodes can
        # turn negative in the reverse-direction search.
        shift = max(d for d in dist_red if d < INF)
        for i in range(self.n):
            self.pi[i] += dist_red[i] if dist_red[i] < INF else shift

    # -- augmentation ---------------------------------------------------------

    def path_length(self, arcs: Iterable[int]) -> float:
        return math.fsum(self.arc_cost(a) for a in arcs)

    def augment(self, arcs: Sequence[int], z: float):
        """Push the bottleneck amount along arcs; returns step facts."""
        amount = z - self.value
        for a in arcs:
            r = self.res_cap(a)
            if r < amount:
                amount = r
        saturated = []
        empty = []
        good = []
        for a in arcs:
            e = a >> 1
            if a & 1:
                if self.f[e] == self.cap[e]:
                    empty.append(a)
                    if self.instance.base.is_original(e):
                        good.append(a)
                if self.f[e] == amount:
                    saturated.append(a)
                    self.f[e] = 0.0
                else:
                    self.f[e] -= amount
            else:
                if self.f[e] == 0.0:
                    empty.append(a)
                    if self.instance.base.is_original(e):
                        good.append(a)
                if self.cap[e] - self.f[e] == amount:
                    saturated.append(a)
                    self.f[e] = self.cap[e]
                else:
                    self.f[e] += amount
        if z - self.value == amount:
            self.value = z
        else:
            self.value += amount
        return amount, tuple(saturated), tuple(empty), tuple(good)

    def snapshot(self) -> Flow:
        return Flow(tuple(self.f), self.value)

    def path_nodes(self, arcs: Sequence[int]) -> tuple[int, ...]:
        nodes = [self.ids[self.s]]
        for a in arcs:
            e = a >> 1
            nodes.append(self.ids[self.tail[e] if a & 1 else self.head[e]])
        return tuple(nodes)


def run_ssp(
    instance: TransformedNetwork,
    *,
    z: float | None = None,
    retain_flows: bool = False,
    record_distances: bool = True,
    iteration_cap: int | None = None,
    stop_above_length: float | None = None,
) -> AugmentationTrace:
    """Run successive shortest paths; the general entry point.

    z defaults to the instance target; math.inf computes a max flow.
    stop_above_length halts before augmenting along any path strictly
    longer than the given threshold (used by flow reconstruction).
    """
    if z is None:
        z = instance.z
    if z < 0:
        raise ValueError("target value must be nonnegative")
    eng = _Engine(instance)
    drafts: list[dict] = []
    flows = [eng.snapshot()] if retain_flows else None
    initial_dist = initial_dist_to = None
    outcome = None

    while True:
        dist, hops, seq = eng.dijkstra_forward()
        if record_distances:
            d_act = eng.actual_distances(dist)
            dp_act = eng.actual_distances_to_sink(eng.dijkstra_reverse())
            if drafts:
                drafts[-1]["distances_from_s"] = d_act
                drafts[-1]["distances_to_t"] = dp_act
            else:
                initial_dist, initial_dist_to = d_act, dp_act
        if eng.value == z:
            outcome = Outcome.REACHED_Z
            break
        if dist[eng.t] == INF:
            outcome = Outcome.MAX_FLOW_BELOW_Z
            break
        arcs = seq[eng.t]
        length = eng.path_length(arcs)
        if stop_above_length is not None and length > stop_above_length:
            outcome = Outcome.STOPPED_ABOVE_LENGTH
            break
        if iteration_cap is not None and len(drafts) >= iteration_cap:
            raise IterationCapExceeded(
                f"augmentation count exceeded cap {iteration_cap}"
            )
        nodes = eng.path_nodes(arcs)
        amount, saturated, empty, good = eng.augment(arcs, z)
        drafts.append(
            dict(
                index=len(drafts) + 1,
                path_nodes=nodes,
                path_arcs=tuple(arcs),
                length=length,
                amount=amount,
                flow_value_after=eng.value,
                saturated_arcs=saturated,
                empty_arcs=empty,
                good_arcs=good,
                contains_good_arc=bool(good),
            )
        )
        if retain_flows:
            flows.append(eng.snapshot())
        eng.update_potentials(dist)

    steps = tuple(AugmentationStep(**d) for d in drafts)
    return AugmentationTrace(
        instance=instance,
        steps=steps,
        outcome=outcome,
        final_flow=eng.snapshot(),
        initial_distances_from_s=initial_dist,
        initial_distances_to_t=initial_dist_to,
        intermediate_flows=tuple(flows) if retain_flows else None,
    )


def solve(
    instance: TransformedNetwork,
    *,
    z: float | None = None,
    retain_flows: bool = False,
    record_distances: bool = True,
    iteration_cap: int | None = None,
) -> AugmentationTrace:
    """Minimum-cost flow of value z (default: the instance target)."""
    return run_ssp(
        instance,
        z=z,
        retain_flows=retain_flows,
        record_distances=record_distances,
        iteration_cap=iteration_cap,
    )


def max_flow_value(instance: TransformedNetwork) -> float:
    """Value of a maximum source-sink flow."""
    trace = run_ssp(instance, z=INF, record_distances=False)
    return trace.final_flow.value


# ---------------------------------------------------------------------------
# Value-vs-cost profile


@dataclass(frozen=True)
class CostFunction:
    """Piecewise linear convex map from flow value to minimum cost.

    breakpoints[j] = (x_j, y_j) with x_0 = 0, y_0 = 0; slopes[j] is the
    segment slope on [x_j, x_{j+1}] and equals the augmenting path
    length that built that segment.
    """

    breakpoints: tuple[tuple[float, float], ...]
    slopes: tuple[float, ...]

    @property
    def max_value(self) -> float:
        return self.breakpoints[-1][0]

    def value_at(self, x: float) -> float:
        if not 0.0 <= x <= self.max_value:
            raise ValueError(f"{x} outside [0, {self.max_value}]")
        for j, slope in enumerate(self.slopes):
            x0, y0 = self.breakpoints[j]
            if x <= self.breakpoints[j + 1][0]:
                return y0 + slope * (x - x0)
        return self.breakpoints[-1][1]

    def is_convex(self) -> bool:
        return all(a < b for a, b in zip(self.slopes, self.slopes[1:]))


def cost_function_from_steps(
    segments: Iterable[tuple[float, float]]
) -> CostFunction:
    """Profile from (path length, amount) pairs in augmentation order.

    Adjacent segments with equal length merge into one; a breakpoint
    appears exactly where the slope changes.
    """
    merged: list[list[float]] = []
    for length, amount in segments:
        if merged and merged[-1][0] == length:
            merged[-1][1] += amount
        else:
            merged.append([length, amount])
    points = [(0.0, 0.0)]
    slopes = []
    for length, amount in merged:
        x, y = points[-1]
        points.append((x + amount, y + length * amount))
        slopes.append(length)
    return CostFunction(tuple(points), tuple(slopes))


def cost_function(instance: TransformedNetwork) -> CostFunction:
    """Full profile of the instance, from value 0 up to the max flow."""
    trace = run_ssp(instance, z=INF, record_distances=False)
    return cost_function_from_steps((s.length, s.amount) for s in trace.steps)


# ---------------------------------------------------------------------------
# CSV emission

TRACE_CSV_HEADER = "iter,length,amount,value_after,n_saturated,good_arc"
COSTFN_CSV_HEADER = "x,y,slope_right"


def trace_csv_rows(trace: AugmentationTrace) -> list[str]:
    rows = [TRACE_CSV_HEADER]
    for s in trace.steps:
        rows.append(
            f"{s.index},{s.length!r},{s.amount!r},{s.flow_value_after!r},"
            f"{len(s.saturated_arcs)},{int(s.contains_good_arc)}"
        )
    return rows


def cost_function_csv_rows(cf: CostFunction) -> list[str]:
    rows = [COSTFN_CSV_HEADER]
    for j, (x, y) in enumerate(cf.breakpoints):
        slope = repr(cf.slopes[j]) if j < len(cf.slopes) else ""
        rows.append(f"{x!r},{y!r},{slope}")
    return rows
