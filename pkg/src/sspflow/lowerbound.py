"""Adversarial instance family with an exact, exponential step count.

The construction stacks three layers, every edge cost drawn uniformly
from a prescribed short interval so the family lives inside the
smoothed model at density bound phi:

* Stage 1: a bipartite gadget. Side size n, the first m (u_i, w_j)
  slots in row-major order with capacity 1 and costs in [7, 9];
  degree-matched fan edges from the stage source and into the stage
  sink with costs in [0, 1]. Solving it takes exactly m augmentations,
  every path 4 nodes long with cost in [7, 11].

* Stages 2..k (k = floor(log2 phi) - 5): each extension wraps the
  previous stage with a new source/sink pair. Two cheap feed edges
  (cost [0, 1]) and two bypass edges (cost [2^(i+3)-1, 2^(i+3)+1])
  of capacity equal to the previous stage's max flow force the solver
  to first route everything forward through the inner stage, then pull
  it all back out through the bypasses, doubling the augmentation
  count per stage: stage i needs exactly 2^(i-1) * m augmentations.

* The full instance bolts four M-node chains (M = min(n, 2^(k+3)-2))
  onto stage k. Fans of capacity N_k = 2^(k-1) * m off the global
  source and into the global sink, chain edges costed in
  [2^(k+5)-1, 2^(k+5)], and four link edges wire the chains so the
  solver replays the stage-k doubling pattern 2M times, alternating
  direction, for exactly m * 2^(k-1) * 2M augmentations in total.

phi must be at least 64 so that k >= 1. Requests below that fall back
to stage 1 alone (build_worstcase).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping

from . import _rng
from .errors import BadParams, PredictionMismatch
from .network import Edge, FlowNetwork, TransformedNetwork
from .solver import AugmentationTrace, run_ssp

log = logging.getLogger(__name__)

# Seed increment when a sampled instance produces an exact path-length
# tie (probability-zero event under continuous draws; retried anyway).
_RETRY_STRIDE = 1000003


@dataclass(frozen=True)
class LowerBoundParams:
    """Family parameters: seed gadget size and the density bound."""

    side: int
    edges: int
    phi: float

    def __post_init__(self):
        if self.side < 1:
            raise BadParams(f"side must be >= 1, got {self.side}")
        if not self.side <= self.edges <= self.side**2:
            raise BadParams(
                f"edge count must lie in [side, side^2], got {self.edges}"
            )
        if not (math.isfinite(self.phi) and self.phi >= 64.0):
            raise BadParams(f"phi must be >= 64 for the full construction, got {self.phi}")

    @property
    def doubling_depth(self) -> int:
        """k: number of stacked stages."""
        return int(math.floor(math.log2(self.phi))) - 5

    @property
    def chain_length(self) -> int:
        """M: nodes per outer chain."""
        return min(self.side, 2 ** (self.doubling_depth + 3) - 2)

    def stage_max_flow(self, stage: int) -> int:
        """Max flow value (and augmentation count) of the given stage."""
        return 2 ** (stage - 1) * self.edges

    @property
    def predicted_steps(self) -> int:
        return self.stage_max_flow(self.doubling_depth) * 2 * self.chain_length

    @property
    def predicted_nodes(self) -> int:
        return 2 * self.side + 2 * self.doubling_depth + 2 + 4 * self.chain_length

    @property
    def predicted_edges(self) -> int:
        return (
            self.edges
            + 2 * self.side
            + 4 * self.doubling_depth
            - 4
            + 8 * self.chain_length
        )


@dataclass(frozen=True)
class StageInstance:
    """One stage of the doubling tower, solvable on its own."""

    instance: TransformedNetwork
    stage: int
    side: int
    seed_edges: int
    seed: int
    roles: Mapping[int, str]
    predicted_steps: int


@dataclass(frozen=True)
class HardInstance:
    """The full chained construction."""

    instance: TransformedNetwork
    params: LowerBoundParams
    seed: int
    roles: Mapping[int, str]
    predicted_steps: int
    core_source: int  # deepest stage's source
    core_sink: int
    fan_a: tuple[int, ...]
    fan_b: tuple[int, ...]
    fan_c: tuple[int, ...]
    fan_d: tuple[int, ...]


def _cost(seed: int, edge_index: int, lo: float, hi: float) -> float:
    return _rng.uniform(seed, _rng.COSTS, edge_index, lo, hi)


def build_stage1(side: int, edges: int, seed: int) -> StageInstance:
    """The bipartite seed gadget; exactly `edges` augmentations."""
    if side < 1 or not side <= edges <= side**2:
        raise BadParams(f"need side <= edges <= side^2, got {side}, {edges}")
    n = side
    s, t = 0, 2 * n + 1
    u = [1 + i for i in range(n)]
    w = [n + 1 + j for j in range(n)]
    pairs = [(ui, wj) for ui in u for wj in w][:edges]
    outdeg = {v: 0 for v in u}
    indeg = {v: 0 for v in w}
    for a, b in pairs:
        outdeg[a] += 1
        indeg[b] += 1
    edge_list = []
    for a, b in pairs:
        e = len(edge_list)
        edge_list.append(Edge(a, b, 1.0, _cost(seed, e, 7.0, 9.0)))
    for v in u:
        e = len(edge_list)
        edge_list.append(Edge(s, v, float(outdeg[v]), _cost(seed, e, 0.0, 1.0)))
    for v in w:
        e = len(edge_list)
        edge_list.append(Edge(v, t, float(indeg[v]), _cost(seed, e, 0.0, 1.0)))
    z = float(edges)
    net = FlowNetwork(
        edge_list,
        {s: z, t: -z},
        [s] + u + w + [t],
        cost_bound=2.0**5,
    )
    roles = {s: "s1", t: "t1"}
    roles.update({v: f"u{i + 1}" for i, v in enumerate(u)})
    roles.update({v: f"w{j + 1}" for j, v in enumerate(w)})
    return StageInstance(
        instance=TransformedNetwork(net, s, t, z),
        stage=1,
        side=side,
        seed_edges=edges,
        seed=seed,
        roles=roles,
        predicted_steps=edges,
    )


def extend_stage(stage: StageInstance, seed: int | None = None) -> StageInstance:
    """Wrap a stage with a feed/bypass gadget, doubling its step count."""
    if seed is None:
        seed = stage.seed
    i = stage.stage
    inner = stage.instance
    net = inner.base
    cap = float(stage.predicted_steps)  # == inner max flow N_i
    s_new = max(net.nodes) + 1
    t_new = s_new + 1
    lo, hi = 2.0 ** (i + 3) - 1.0, 2.0 ** (i + 3) + 1.0
    edge_list = list(net.edges)
    add = [
        (s_new, inner.source, 0.0, 1.0),
        (inner.sink, t_new, 0.0, 1.0),
        (s_new, inner.sink, lo, hi),
        (inner.source, t_new, lo, hi),
    ]
    for tail, head, clo, chi in add:
        e = len(edge_list)
        edge_list.append(Edge(tail, head, cap, _cost(seed, e, clo, chi)))
    z = 2.0 * cap
    balance = {v: 0.0 for v in net.nodes}
    balance[s_new] = z
    balance[t_new] = -z
    new_net = FlowNetwork(
        edge_list,
        balance,
        list(net.nodes) + [s_new, t_new],
        cost_bound=2.0 ** (i + 5),
    )
    roles = dict(stage.roles)
    roles[s_new] = f"s{i + 1}"
    roles[t_new] = f"t{i + 1}"
    return StageInstance(
        instance=TransformedNetwork(new_net, s_new, t_new, z),
        stage=i + 1,
        side=stage.side,
        seed_edges=stage.seed_edges,
        seed=stage.seed,
        roles=roles,
        predicted_steps=2 * stage.predicted_steps,
    )


def stage_sequence(side: int, edges: int, stages: int, seed: int) -> list[StageInstance]:
    """Stages 1..stages built over one seed."""
    out = [build_stage1(side, edges, seed)]
    for _ in range(stages - 1):
        out.append(extend_stage(out[-1]))
    return out


def build_hard_instance(params: LowerBoundParams, seed: int) -> HardInstance:
    """The full construction at the given parameters."""
    k = params.doubling_depth
    m_count = params.chain_length
    n_k = params.stage_max_flow(k)
    stage = build_stage1(params.side, params.edges, seed)
    for _ in range(k - 1):
        stage = extend_stage(stage)
    core = stage.instance
    net = core.base

    next_id = max(net.nodes) + 1
    chain_a = tuple(range(next_id, next_id + m_count))
    chain_b = tuple(range(next_id + m_count, next_id + 2 * m_count))
    chain_c = tuple(range(next_id + 2 * m_count, next_id + 3 * m_count))
    chain_d = tuple(range(next_id + 3 * m_count, next_id + 4 * m_count))
    s = next_id + 4 * m_count
    t = s + 1

    inf_cap = 4.0 * m_count * n_k + 1.0
    fan_cap = float(n_k)
    chain_lo, chain_hi = 2.0 ** (k + 5) - 1.0, 2.0 ** (k + 5)
    near_lo, near_hi = 2.0 ** (k + 4) - 1.0, 2.0 ** (k + 4)

    edge_list = list(net.edges)

    def add(tail, head, capacity, lo, hi):
        e = len(edge_list)
        edge_list.append(Edge(tail, head, capacity, _cost(seed, e, lo, hi)))

    # towards-source chain A: walk down a_i -> ... -> a_1 -> core source
    for i in range(1, m_count):
        add(chain_a[i], chain_a[i - 1], inf_cap, chain_lo, chain_hi)
    for i in range(m_count):
        add(s, chain_a[i], fan_cap, 0.0, 1.0)
    add(chain_a[0], core.source, inf_cap, near_lo, near_hi)
    # towards-sink chain B: b_i -> ... -> b_1 -> core sink
    for i in range(1, m_count):
        add(chain_b[i], chain_b[i - 1], inf_cap, chain_lo, chain_hi)
    for i in range(m_count):
        add(s, chain_b[i], fan_cap, 0.0, 1.0)
    add(chain_b[0], core.sink, inf_cap, chain_lo, chain_hi)
    # from-source chain C: core source -> c_1 -> ... -> c_i
    for i in range(1, m_count):
        add(chain_c[i - 1], chain_c[i], inf_cap, chain_lo, chain_hi)
    for i in range(m_count):
        add(chain_c[i], t, fan_cap, 0.0, 1.0)
    add(core.source, chain_c[0], inf_cap, chain_lo, chain_hi)
    # from-sink chain D: core sink -> d_1 -> ... -> d_i
    for i in range(1, m_count):
        add(chain_d[i - 1], chain_d[i], inf_cap, chain_lo, chain_hi)
    for i in range(m_count):
        add(chain_d[i], t, fan_cap, 0.0, 1.0)
    add(core.sink, chain_d[0], inf_cap, near_lo, near_hi)

    z = 2.0 * m_count * n_k
    balance = {v: 0.0 for v in net.nodes}
    balance[s] = z
    balance[t] = -z
    nodes = list(net.nodes) + list(chain_a + chain_b + chain_c + chain_d) + [s, t]
    full = FlowNetwork(edge_list, balance, nodes, cost_bound=params.phi)
    instance = TransformedNetwork(full, s, t, z)

    if instance.n != params.predicted_nodes or instance.m != params.predicted_edges:
        raise PredictionMismatch(
            f"construction size {instance.n}/{instance.m} differs from "
            f"predicted {params.predicted_nodes}/{params.predicted_edges}"
        )

    roles = dict(stage.roles)
    roles[s] = "s"
    roles[t] = "t"
    for label, chain in (("a", chain_a), ("b", chain_b), ("c", chain_c), ("d", chain_d)):
        for i, v in enumerate(chain):
            roles[v] = f"{label}{i + 1}"
    return HardInstance(
        instance=instance,
        params=params,
        seed=seed,
        roles=roles,
        predicted_steps=params.predicted_steps,
        core_source=core.source,
        core_sink=core.sink,
        fan_a=chain_a,
        fan_b=chain_b,
        fan_c=chain_c,
        fan_d=chain_d,
    )


def build_worstcase(side: int, edges: int, phi: float, seed: int):
    """HardInstance when phi permits (>= 64), stage 1 alone otherwise.

    The fallback re-declares the seed gadget's cost bound as phi so the
    result stays inside the requested density class; gadget costs reach
    11, so phi below 12 leaves no room for it.
    """
    if phi >= 64.0:
        return build_hard_instance(LowerBoundParams(side, edges, phi), seed)
    if phi < 12.0:
        raise BadParams(
            f"no worst-case family below density bound 12, got {phi}"
        )
    stage = build_stage1(side, edges, seed)
    base = stage.instance.base
    bound = min(phi, base.cost_bound)
    if bound == base.cost_bound:
        return stage
    rebased = FlowNetwork(base.edges, dict(base.balance), base.nodes, bound)
    instance = TransformedNetwork(
        rebased, stage.instance.source, stage.instance.sink, stage.instance.z
    )
    return StageInstance(
        instance,
        stage.stage,
        stage.side,
        stage.seed_edges,
        stage.seed,
        stage.roles,
        stage.predicted_steps,
    )


# ---------------------------------------------------------------------------
# Verification

@dataclass(frozen=True)
class LowerBoundReport:
    params: LowerBoundParams
    seed: int
    seed_used: int
    predicted_steps: int
    observed_steps: int
    phases_checked: int
    retries: int


def _phase_window(k: int, i: int, parity: int) -> tuple[float, float]:
    """Admissible path-cost window for phase i (1-based)."""
    if parity == 0:
        alpha = 2.0 ** (k + 5) * i - 2.0 ** (k + 4) - i
        return 2 * alpha + 7, 2 * alpha + 2 * (i + 1) + 2.0 ** (k + 3) - 5
    beta = 2.0 ** (k + 5) * i - i
    return 2 * beta - (2.0 ** (k + 3) - 5), 2 * beta + 2 * (i + 1) - 7


def verify_count(
    params: LowerBoundParams, seed: int, *, max_retries: int = 3
) -> LowerBoundReport:
    """Solve the constructed instance and check it behaves as predicted.

    Checks, in order: exact augmentation count; unit amounts; phase
    structure (which chain the path enters and leaves through, and the
    direction it traverses the core); per-phase path-cost windows; and
    strictly increasing path lengths. Any divergence raises
    PredictionMismatch naming the first offending step. A seed that
    happens to produce an exact path-length tie is logged and retried
    with a shifted seed.
    """
    k = params.doubling_depth
    n_k = params.stage_max_flow(k)
    seed_used = seed
    retries = 0
    hard = None
    trace: AugmentationTrace | None = None
    for attempt in range(max_retries):
        hard = build_hard_instance(params, seed_used)
        trace = run_ssp(hard.instance, record_distances=False)
        lengths = [st.length for st in trace.steps]
        if all(a < b for a, b in zip(lengths, lengths[1:])):
            break
        log.warning(
            "seed %d produced an exact path-length tie; retrying", seed_used
        )
        retries += 1
        seed_used = seed_used + _RETRY_STRIDE
    else:
        raise PredictionMismatch(
            f"path-length ties persisted across {max_retries} seeds"
        )

    observed = len(trace.steps)
    if observed != params.predicted_steps:
        raise PredictionMismatch(
            f"observed {observed} augmentations, predicted {params.predicted_steps}; "
            f"first divergence at step {min(observed, params.predicted_steps) + 1}"
        )

    tol = 1e-9
    for j, step in enumerate(trace.steps):
        block = j // n_k
        phase = block // 2  # 0-based
        parity = block % 2
        i = phase + 1
        if step.amount != 1.0:
            raise PredictionMismatch(
                f"step {step.index}: amount {step.amount}, predicted 1.0"
            )
        second = step.path_nodes[1]
        penult = step.path_nodes[-2]
        if parity == 0:
            want_in, want_out = hard.fan_a[phase], hard.fan_d[phase]
        else:
            want_in, want_out = hard.fan_b[phase], hard.fan_c[phase]
        if second != want_in or penult != want_out:
            raise PredictionMismatch(
                f"step {step.index}: path enters {hard.roles.get(second)} and "
                f"leaves {hard.roles.get(penult)}, predicted "
                f"{hard.roles.get(want_in)}/{hard.roles.get(want_out)}"
            )
        nodes = step.path_nodes
        if hard.core_source not in nodes or hard.core_sink not in nodes:
            raise PredictionMismatch(
                f"step {step.index}: path bypasses the core stage"
            )
        pos_src = nodes.index(hard.core_source)
        pos_snk = nodes.index(hard.core_sink)
        if parity == 0 and not pos_src < pos_snk:
            raise PredictionMismatch(
                f"step {step.index}: core traversed backwards in a forward phase"
            )
        if parity == 1 and not pos_snk < pos_src:
            raise PredictionMismatch(
                f"step {step.index}: core traversed forwards in a backward phase"
            )
        lo, hi = _phase_window(k, i, parity)
        if not lo - tol <= step.length <= hi + tol:
            raise PredictionMismatch(
                f"step {step.index}: length {step.length} outside "
                f"[{lo}, {hi}] for phase {i} parity {parity}"
            )
    return LowerBoundReport(
        params=params,
        seed=seed,
        seed_used=seed_used,
        predicted_steps=params.predicted_steps,
        observed_steps=observed,
        phases_checked=2 * params.chain_length,
        retries=retries,
    )
