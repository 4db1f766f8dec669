"""Flow network core: networks, the single source/sink transform, residual views.

Conventions used throughout the package:

* Node ids are plain ints; they need not be contiguous.
* Edges are directed, identified by a stable integer index (position in
  the edge tuple). Antiparallel edge pairs and duplicate (tail, head)
  pairs are rejected, so an edge is also identified by its endpoints.
* Costs are float64 in [0, cost_bound]; cost_bound records the cost
  convention (1.0 for unit-range instances, the density bound for
  wider ranges). Auxiliary edges always cost 0.
* Residual arcs are encoded as ints: arc 2*e is the forward arc of
  edge e, arc 2*e+1 the backward arc. Forward is present iff f_e < u_e,
  backward iff f_e > 0. An arc is *empty* when it is present and its
  reverse is absent; an empty arc over a non-auxiliary edge is a
  *good* arc.

Comparisons on flow values are strict float comparisons, no epsilons:
augmentation assigns saturated values exactly, so f == 0 and f == u
stay meaningful predicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import BalanceMismatch, InfeasibleFlow, InvariantError

ORIGINAL = "original"
AUXILIARY = "aux"

# Relative tolerance for zero-sum balance checks on constructed (float)
# data; file input is validated in exact decimal arithmetic upstream.
_BALANCE_RTOL = 1e-9


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    capacity: float
    cost: float
    kind: str = ORIGINAL


class FlowNetwork:
    """Immutable directed network with capacities, costs and node balances."""

    __slots__ = ("nodes", "edges", "balance", "cost_bound", "_index")

    def __init__(
        self,
        edges: Iterable[Edge],
        balance: Mapping[int, float],
        nodes: Iterable[int] | None = None,
        cost_bound: float = 1.0,
    ):
        edges = tuple(edges)
        node_set = set(nodes) if nodes is not None else set()
        for e in edges:
            node_set.add(e.tail)
            node_set.add(e.head)
        node_set.update(balance)
        if not node_set:
            raise InvariantError("network has no nodes")
        if not all(isinstance(v, int) for v in node_set):
            raise InvariantError("node ids must be ints")
        if not (math.isfinite(cost_bound) and cost_bound >= 1.0):
            raise InvariantError(f"cost bound must be finite and >= 1, got {cost_bound}")

        index: dict[tuple[int, int], int] = {}
        for i, e in enumerate(edges):
            if e.tail == e.head:
                raise InvariantError(f"edge {i}: self-loop at node {e.tail}")
            if not (math.isfinite(e.capacity) and e.capacity >= 0):
                raise InvariantError(f"edge {i}: capacity must be finite and >= 0")
            if not math.isfinite(e.cost):
                raise InvariantError(f"edge {i}: cost must be finite")
            if e.kind == AUXILIARY:
                if e.cost != 0.0:
                    raise InvariantError(f"edge {i}: auxiliary edges must cost 0")
            elif e.kind == ORIGINAL:
                if not 0.0 <= e.cost <= cost_bound:
                    raise InvariantError(
                        f"edge {i}: cost {e.cost} outside [0, {cost_bound}]"
                    )
            else:
                raise InvariantError(f"edge {i}: unknown kind {e.kind!r}")
            key = (e.tail, e.head)
            if key in index:
                raise InvariantError(f"edge {i}: duplicate edge {key}")
            if (e.head, e.tail) in index:
                raise InvariantError(
                    f"edge {i}: antiparallel pair {key} forms a 2-cycle"
                )
            index[key] = i

        bal = {v: 0.0 for v in node_set}
        for v, b in balance.items():
            if v not in node_set:
                raise InvariantError(f"balance given for unknown node {v}")
            if not math.isfinite(b):
                raise InvariantError(f"balance at node {v} must be finite")
            bal[v] = float(b)
        total = math.fsum(bal.values())
        scale = max(1.0, math.fsum(abs(b) for b in bal.values()))
        if abs(total) > _BALANCE_RTOL * scale:
            raise BalanceMismatch(f"balances sum to {total}, expected 0")

        self._set("nodes", tuple(sorted(node_set)))
        self._set("edges", edges)
        self._set("balance", MappingProxyType(bal))
        self._set("cost_bound", float(cost_bound))
        self._set("_index", index)

    def _set(self, name, value):
        object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("FlowNetwork is immutable")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index_of(self, tail: int, head: int) -> int:
        """Edge index for endpoints; KeyError if absent."""
        return self._index[(tail, head)]

    def has_edge(self, tail: int, head: int) -> bool:
        return (tail, head) in self._index

    def is_original(self, e: int) -> bool:
        return self.edges[e].kind == ORIGINAL

    def with_edge_cost(self, e: int, cost: float) -> "FlowNetwork":
        """Copy of this network with edge e's cost replaced."""
        edges = list(self.edges)
        old = edges[e]
        edges[e] = Edge(old.tail, old.head, old.capacity, cost, old.kind)
        return FlowNetwork(edges, dict(self.balance), self.nodes, self.cost_bound)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FlowNetwork):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and dict(self.balance) == dict(other.balance)
            and self.cost_bound == other.cost_bound
        )

    def __hash__(self):
        return hash((self.nodes, self.edges, self.cost_bound))

    def __repr__(self):
        return f"FlowNetwork(n={self.n}, m={self.m}, cost_bound={self.cost_bound})"


def transform(network: FlowNetwork) -> "TransformedNetwork":
    """Reduce a b-flow instance to a single source/sink max-flow form.

    Adds a master source s with a zero-cost auxiliary edge (s, v) of
    capacity b(v) for every supply node, and a master sink t with a
    zero-cost auxiliary edge (w, t) of capacity -b(w) for every demand
    node. The target value z is the total supply. Original edges keep
    their indices; auxiliary edges follow in sorted node order.
    """
    if any(e.kind == AUXILIARY for e in network.edges):
        raise InvariantError("network already contains auxiliary edges")
    supplies = [(v, b) for v, b in sorted(network.balance.items()) if b > 0]
    demands = [(v, -b) for v, b in sorted(network.balance.items()) if b < 0]
    s = max(network.nodes) + 1
    t = s + 1
    edges = list(network.edges)
    edges += [Edge(s, v, b, 0.0, AUXILIARY) for v, b in supplies]
    edges += [Edge(v, t, b, 0.0, AUXILIARY) for v, b in demands]
    z = math.fsum(b for _, b in supplies)
    balance = {v: 0.0 for v in network.nodes}
    balance[s] = z
    balance[t] = -z
    base = FlowNetwork(edges, balance, network.nodes + (s, t), network.cost_bound)
    return TransformedNetwork(base, s, t, z)


@dataclass(frozen=True)
class TransformedNetwork:
    """Single source/sink instance: all imbalance sits on source and sink."""

    base: FlowNetwork
    source: int
    sink: int
    z: float

    def __post_init__(self):
        net = self.base
        if self.source not in net.balance or self.sink not in net.balance:
            raise InvariantError("source/sink must be nodes of the network")
        if self.source == self.sink:
            raise InvariantError("source and sink must differ")
        if self.z < 0:
            raise InvariantError("target value z must be nonnegative")
        scale = max(1.0, abs(self.z))
        if abs(net.balance[self.source] - self.z) > _BALANCE_RTOL * scale:
            raise InvariantError("b(source) must equal z")
        if abs(net.balance[self.sink] + self.z) > _BALANCE_RTOL * scale:
            raise InvariantError("b(sink) must equal -z")
        for v, b in net.balance.items():
            if v not in (self.source, self.sink) and b != 0.0:
                raise InvariantError(f"interior node {v} has nonzero balance {b}")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m


def as_transformed(network: FlowNetwork, source: int, sink: int) -> TransformedNetwork:
    """Wrap a network that is already in single source/sink form."""
    return TransformedNetwork(network, source, sink, network.balance[source])


@dataclass(frozen=True)
class Flow:
    """Edge flow vector (indexed like network.edges) plus its value |f|."""

    values: tuple[float, ...]
    value: float


def zero_flow(instance: TransformedNetwork) -> Flow:
    return Flow((0.0,) * instance.m, 0.0)


def flow_from_values(
    instance: TransformedNetwork, values: Iterable[float]
) -> Flow:
    """Build a Flow from raw edge values, checking feasibility."""
    values = tuple(float(x) for x in values)
    value = check_feasible(instance, values)
    return Flow(values, value)


def check_feasible(instance: TransformedNetwork, values: tuple[float, ...]) -> float:
    """Validate capacity bounds and conservation; return the flow value."""
    net = instance.base
    if len(values) != net.m:
        raise InfeasibleFlow(f"expected {net.m} edge values, got {len(values)}")
    for e, (f, edge) in enumerate(zip(values, net.edges)):
        if not 0.0 <= f <= edge.capacity:
            raise InfeasibleFlow(
                f"edge {e}: flow {f} outside [0, {edge.capacity}]"
            )
    excess = {v: 0.0 for v in net.nodes}
    throughput = dict(excess)
    for f, edge in zip(values, net.edges):
        excess[edge.tail] -= f
        excess[edge.head] += f
        throughput[edge.tail] += abs(f)
        throughput[edge.head] += abs(f)
    for v in net.nodes:
        if v in (instance.source, instance.sink):
            continue
        if abs(excess[v]) > 1e-9 * max(1.0, throughput[v]):
            raise InfeasibleFlow(f"conservation violated at node {v}: {excess[v]}")
    return -excess[instance.source]


# ---------------------------------------------------------------------------
# Residual arcs

def arc_edge(arc: int) -> int:
    """Edge index an arc belongs to."""
    return arc >> 1


def arc_is_forward(arc: int) -> bool:
    return (arc & 1) == 0


def arc_reverse(arc: int) -> int:
    return arc ^ 1


class ResidualView:
    """Read-only residual network of a flow on a transformed instance.

    Arcs are the int encoding described in the module docstring. The
    view is a thin layer over (instance, flow); nothing is copied.
    """

    __slots__ = ("instance", "flow")

    def __init__(self, instance: TransformedNetwork, flow: Flow):
        self.instance = instance
        self.flow = flow

    def has(self, arc: int) -> bool:
        e = arc >> 1
        edge = self.instance.base.edges[e]
        f = self.flow.values[e]
        return f < edge.capacity if (arc & 1) == 0 else f > 0.0

    def residual_capacity(self, arc: int) -> float:
        e = arc >> 1
        edge = self.instance.base.edges[e]
        f = self.flow.values[e]
        return edge.capacity - f if (arc & 1) == 0 else f

    def cost(self, arc: int) -> float:
        c = self.instance.base.edges[arc >> 1].cost
        return c if (arc & 1) == 0 else -c

    def tail(self, arc: int) -> int:
        edge = self.instance.base.edges[arc >> 1]
        return edge.tail if (arc & 1) == 0 else edge.head

    def head(self, arc: int) -> int:
        edge = self.instance.base.edges[arc >> 1]
        return edge.head if (arc & 1) == 0 else edge.tail

    def is_empty(self, arc: int) -> bool:
        """Present with absent reverse: the edge is all-or-nothing here."""
        return self.has(arc) and not self.has(arc ^ 1)

    def is_good(self, arc: int) -> bool:
        """Empty arc over a cost-bearing (non-auxiliary) edge."""
        return self.is_empty(arc) and self.instance.base.is_original(arc >> 1)

    def arcs(self) -> Iterator[int]:
        for e in range(self.instance.m):
            if self.has(2 * e):
                yield 2 * e
            if self.has(2 * e + 1):
                yield 2 * e + 1

    def arcs_from(self, node: int) -> Iterator[int]:
        for arc in self.arcs():
            if self.tail(arc) == node:
                yield arc


def residual(instance: TransformedNetwork, flow: Flow) -> ResidualView:
    """Residual view of a feasible flow; raises InfeasibleFlow otherwise."""
    check_feasible(instance, flow.values)
    return ResidualView(instance, flow)
