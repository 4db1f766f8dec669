"""Seeded instance generators for the perturbation laboratory.

Topology (nodes, edges, capacities, balances) is chosen adversarially
and deterministically; only edge costs are random. Each edge e draws
its cost uniformly from an interval I_e whose length is at least
1/phi (unit-range convention, intervals inside [0,1]) or at least 1
(phi-range convention, intervals inside [0,phi]). phi = 1 forces the
uniform [0,1] distribution; larger phi lets the adversary concentrate
costs. Costs are keyed per (seed, edge index), so a cost never depends
on the order edges are visited.

The perturbed-integer model draws cost_e = k_e + U(-1, 1) for an
adversarial integer k_e in {1..C}, normalized by C+1 into [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import _rng
from .errors import InfeasibleShape, InvalidInterval, ParseError
from .network import Edge, FlowNetwork

CONVENTIONS = ("unit", "phi")


@dataclass(frozen=True)
class SmoothedCostSpec:
    """Interval family for cost sampling under a density bound phi."""

    phi: float
    convention: str = "unit"
    default_interval: tuple[float, float] | None = None
    intervals: Mapping[int, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.phi) and self.phi >= 1.0):
            raise InvalidInterval(f"phi must be >= 1, got {self.phi}")
        if self.convention not in CONVENTIONS:
            raise InvalidInterval(f"unknown convention {self.convention!r}")
        if self.default_interval is not None:
            self._validate(self.default_interval, "default interval")
        for e, iv in self.intervals.items():
            self._validate(iv, f"interval for edge {e}")

    @property
    def range_hi(self) -> float:
        return 1.0 if self.convention == "unit" else self.phi

    @property
    def min_length(self) -> float:
        return 1.0 / self.phi if self.convention == "unit" else 1.0

    @property
    def cost_bound(self) -> float:
        return self.range_hi

    def _validate(self, interval: tuple[float, float], what: str) -> None:
        lo, hi = interval
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidInterval(f"{what}: endpoints must be finite")
        if lo < 0.0 or hi > self.range_hi:
            raise InvalidInterval(
                f"{what}: [{lo}, {hi}] outside [0, {self.range_hi}]"
            )
        # Densities stay below phi exactly when the interval is at least
        # the minimum length; a hair of float slack avoids rejecting
        # intervals computed as range/phi.
        if hi - lo < self.min_length * (1.0 - 1e-12):
            raise InvalidInterval(
                f"{what}: length {hi - lo} below minimum {self.min_length}"
            )

    def interval_for(self, edge_index: int) -> tuple[float, float]:
        if edge_index in self.intervals:
            return self.intervals[edge_index]
        if self.default_interval is not None:
            return self.default_interval
        return (0.0, self.range_hi)


def parse_cost_spec(text: str) -> SmoothedCostSpec:
    """Parse the line-oriented interval-spec format."""
    phi = None
    convention = "unit"
    default_interval = None
    intervals: dict[int, tuple[float, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if fields[0] == "phi" and len(fields) == 2:
                phi = float(fields[1])
            elif fields[0] == "convention" and len(fields) == 2:
                convention = fields[1]
            elif fields[0] == "interval" and len(fields) == 4:
                intervals[int(fields[1])] = (float(fields[2]), float(fields[3]))
            elif fields[0] == "default-interval" and len(fields) == 3:
                default_interval = (float(fields[1]), float(fields[2]))
            else:
                raise ParseError(f"unrecognized spec line {line!r}", lineno)
        except ValueError:
            raise ParseError(f"bad number in {line!r}", lineno) from None
    if phi is None:
        raise ParseError("spec file missing 'phi <value>' line")
    return SmoothedCostSpec(phi, convention, default_interval, intervals)


def format_cost_spec(spec: SmoothedCostSpec) -> str:
    lines = [f"phi {spec.phi!r}", f"convention {spec.convention}"]
    if spec.default_interval is not None:
        lo, hi = spec.default_interval
        lines.append(f"default-interval {lo!r} {hi!r}")
    for e in sorted(spec.intervals):
        lo, hi = spec.intervals[e]
        lines.append(f"interval {e} {lo!r} {hi!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Topologies

@dataclass(frozen=True)
class Topology:
    """Cost-free instance skeleton: everything the adversary fixes."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, float], ...]  # (tail, head, capacity)
    balance: Mapping[int, float]
    int_costs: tuple[int, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)


def bipartite_topology(n: int, m: int, seed: int = 0) -> Topology:
    """Two n-node tiers plus endpoints; the first m (u_i, w_j) slots
    in row-major order, unit capacities, degree-matched fan edges."""
    if n < 1 or not n <= m <= n * n:
        raise InfeasibleShape(f"bipartite needs n <= m <= n^2, got n={n}, m={m}")
    s, t = 0, 2 * n + 1
    u = [1 + i for i in range(n)]
    w = [n + 1 + j for j in range(n)]
    pairs = [(u[i], w[j]) for i in range(n) for j in range(n)][:m]
    outdeg = {v: 0 for v in u}
    indeg = {v: 0 for v in w}
    for a, b in pairs:
        outdeg[a] += 1
        indeg[b] += 1
    edges = [(a, b, 1.0) for a, b in pairs]
    edges += [(s, v, float(outdeg[v])) for v in u]
    edges += [(v, t, float(indeg[v])) for v in w]
    balance = {s: float(m), t: -float(m)}
    return Topology(tuple([s] + u + w + [t]), tuple(edges), balance)


def erdos_topology(
    n: int, m: int, seed: int, capacities: str = "int"
) -> Topology:
    """m directed edges over n nodes, no duplicates or 2-cycles."""
    if n < 2 or m < 1:
        raise InfeasibleShape(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if m > n * (n - 1) // 2:
        raise InfeasibleShape(
            f"m={m} exceeds the 2-cycle-free maximum {n * (n - 1) // 2} for n={n}"
        )
    gen = _rng.stream(seed, _rng.TOPOLOGY)
    chosen: list[tuple[int, int]] = []
    taken = set()
    while len(chosen) < m:
        a = int(gen.integers(0, n))
        b = int(gen.integers(0, n))
        if a == b or (a, b) in taken or (b, a) in taken:
            continue
        taken.add((a, b))
        chosen.append((a, b))
    if capacities == "int":
        caps = [float(gen.integers(1, 4)) for _ in chosen]
    else:
        caps = [0.5 + 2.0 * gen.random() for _ in chosen]
    edges = [(a, b, c) for (a, b), c in zip(chosen, caps)]

    k = max(1, n // 3)
    order = list(gen.permutation(n))
    supply_nodes = order[:k]
    demand_nodes = order[k : 2 * k]
    balance = {v: 0.0 for v in range(n)}
    if capacities == "int":
        supplies = [float(gen.integers(1, 4)) for _ in supply_nodes]
    else:
        supplies = [0.5 + gen.random() for _ in supply_nodes]
    total = math.fsum(supplies)
    for v, b in zip(supply_nodes, supplies):
        balance[int(v)] = b
    if capacities == "int":
        # spread the integer total round-robin over demand nodes
        left = int(total)
        base = left // k
        rem = left - base * k
        for j, v in enumerate(demand_nodes):
            balance[int(v)] = -float(base + (1 if j < rem else 0))
    else:
        weights = [gen.random() + 0.1 for _ in demand_nodes]
        wsum = math.fsum(weights)
        acc = 0.0
        for j, v in enumerate(demand_nodes[:-1]):
            share = total * weights[j] / wsum
            balance[int(v)] = -share
            acc += share
        balance[int(demand_nodes[-1])] = -(total - acc)
    return Topology(tuple(range(n)), tuple(edges), balance)


def layered_topology(
    n: int, m: int, seed: int, layers: int = 3, capacities: str = "int"
) -> Topology:
    """Nodes in layers, edges only between consecutive layers."""
    if layers < 2 or n < layers:
        raise InfeasibleShape(f"need at least one node per layer, n={n}, layers={layers}")
    tiers: list[list[int]] = [[] for _ in range(layers)]
    for v in range(n):
        tiers[v % layers].append(v)
    slots = [
        (a, b)
        for li in range(layers - 1)
        for a in tiers[li]
        for b in tiers[li + 1]
    ]
    if m > len(slots):
        raise InfeasibleShape(f"m={m} exceeds the {len(slots)} consecutive-layer slots")
    gen = _rng.stream(seed, _rng.TOPOLOGY)
    picked_idx = sorted(gen.permutation(len(slots))[:m].tolist())
    if capacities == "int":
        caps = [float(gen.integers(1, 4)) for _ in range(m)]
    else:
        caps = [0.5 + 2.0 * gen.random() for _ in range(m)]
    edges = [(slots[i][0], slots[i][1], caps[j]) for j, i in enumerate(picked_idx)]

    first, last = tiers[0], tiers[-1]
    out_cap = {v: 0.0 for v in first}
    in_cap = {v: 0.0 for v in last}
    for (a, b, c) in edges:
        if a in out_cap:
            out_cap[a] += c
        if b in in_cap:
            in_cap[b] += c
    total_out = math.fsum(out_cap.values())
    total_in = math.fsum(in_cap.values())
    scale = min(1.0, total_in / total_out) if total_out > 0 else 0.0
    balance = {v: 0.0 for v in range(n)}
    acc = 0.0
    for v in first:
        balance[v] = math.floor(out_cap[v] * scale) if capacities == "int" else out_cap[v] * scale
        acc += balance[v]
    # push the matching demand onto the last tier, capped by in-capacity
    left = acc
    for v in last:
        take = min(left, in_cap[v])
        balance[v] = -take
        left -= take
        if left <= 0:
            break
    if left > 0:
        balance[last[-1]] -= left
    return Topology(tuple(range(n)), tuple(edges), balance)


def random_topology(
    n: int, m: int, shape: str, seed: int, **kwargs
) -> Topology:
    """Dispatch by shape name: bipartite | erdos | layered."""
    if shape == "bipartite":
        return bipartite_topology(n, m, seed)
    if shape == "erdos":
        return erdos_topology(n, m, seed, **kwargs)
    if shape == "layered":
        return layered_topology(n, m, seed, **kwargs)
    raise InfeasibleShape(f"unknown shape {shape!r}")


# ---------------------------------------------------------------------------
# Cost sampling

def sample_costs(
    topology: Topology, spec: SmoothedCostSpec, seed: int
) -> FlowNetwork:
    """Realize a topology into a network by drawing every edge cost."""
    edges = []
    for e, (tail, head, cap) in enumerate(topology.edges):
        lo, hi = spec.interval_for(e)
        cost = _rng.uniform(seed, _rng.COSTS, e, lo, hi)
        edges.append(Edge(tail, head, cap, cost))
    return FlowNetwork(
        edges, dict(topology.balance), topology.nodes, spec.cost_bound
    )


def adversarial_spec(
    topology: Topology, phi: float, convention: str = "unit"
) -> SmoothedCostSpec:
    """Worst-case-flavored interval choice at density bound phi.

    Edges touching a supply or demand node get costs concentrated near
    0; all other edges get costs concentrated inside a narrow band, the
    pattern the exponential-family seed network uses.
    """
    spec0 = SmoothedCostSpec(phi, convention)
    width = spec0.min_length
    hi = spec0.range_hi
    endpoints = {v for v, b in topology.balance.items() if b != 0.0}
    intervals = {}
    band_lo = min(0.7 * hi, hi - width)
    for e, (tail, head, _cap) in enumerate(topology.edges):
        if tail in endpoints or head in endpoints:
            intervals[e] = (0.0, width)
        else:
            intervals[e] = (band_lo, band_lo + width)
    return SmoothedCostSpec(phi, convention, None, intervals)


# ---------------------------------------------------------------------------
# Perturbed-integer model

def assign_integer_costs(topology: Topology, c_bound: int, seed: int) -> Topology:
    """Adversarial stand-in: keyed uniform integers in {1..C}."""
    if c_bound < 1:
        raise InvalidInterval(f"integer cost bound must be >= 1, got {c_bound}")
    ints = tuple(
        int(_rng.stream(seed, _rng.INT_COSTS, e).integers(1, c_bound + 1))
        for e in range(topology.m)
    )
    return Topology(topology.nodes, topology.edges, topology.balance, ints)


def perturbed_integer(
    topology: Topology, c_bound: int, seed: int
) -> tuple[FlowNetwork, float]:
    """Integer costs plus uniform noise, normalized into [0, 1).

    Returns (network, scale); scale = C + 1 maps sampled costs back to
    the raw k_e + noise values. The model's effective density bound is
    (C + 1) / 2.
    """
    if topology.int_costs is None:
        topology = assign_integer_costs(topology, c_bound, seed)
    if any(not 1 <= k <= c_bound for k in topology.int_costs):
        raise InvalidInterval(f"integer costs must lie in {{1..{c_bound}}}")
    scale = float(c_bound + 1)
    edges = []
    for e, (tail, head, cap) in enumerate(topology.edges):
        noise = _rng.uniform(seed, _rng.NOISE, e, -1.0, 1.0)
        edges.append(Edge(tail, head, cap, (topology.int_costs[e] + noise) / scale))
    net = FlowNetwork(edges, dict(topology.balance), topology.nodes, 1.0)
    return net, scale


def effective_phi(model: str, phi: float) -> float:
    """Density bound entering the step-count bound for each model."""
    if model == "perturbed":
        return (phi + 1.0) / 2.0
    return phi
