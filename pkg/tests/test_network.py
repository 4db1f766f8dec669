import math

import pytest

from sspflow import (
    AUXILIARY,
    ORIGINAL,
    BalanceMismatch,
    Edge,
    FlowNetwork,
    InfeasibleFlow,
    InvariantError,
    arc_edge,
    arc_is_forward,
    arc_reverse,
    as_transformed,
    check_feasible,
    flow_from_values,
    max_flow_value,
    residual,
    transform,
    zero_flow,
)

from conftest import (
    lp_feasible_value,
    random_instance,
    single_edge_network,
    uniform_instance,
)


class TestConstruction:
    def test_minimal(self):
        net = single_edge_network()
        assert net.n == 2 and net.m == 1
        assert net.balance[0] == 3.0 and net.balance[1] == -3.0
        assert net.index_of(0, 1) == 0
        assert net.has_edge(0, 1)
        assert not net.has_edge(1, 0)

    def test_isolated_node_kept(self):
        net = FlowNetwork(
            [Edge(0, 1, 1.0, 0.0)], {0: 1.0, 1: -1.0}, nodes=[0, 1, 7]
        )
        assert net.nodes == (0, 1, 7)
        assert net.balance[7] == 0.0

    def test_self_loop_rejected(self):
        with pytest.raises(InvariantError, match="self-loop"):
            FlowNetwork([Edge(2, 2, 1.0, 0.0)], {})

    def test_duplicate_rejected(self):
        with pytest.raises(InvariantError, match="duplicate"):
            FlowNetwork(
                [Edge(0, 1, 1.0, 0.1), Edge(0, 1, 2.0, 0.2)],
                {0: 0.0, 1: 0.0},
            )

    def test_two_cycle_rejected(self):
        with pytest.raises(InvariantError, match="2-cycle"):
            FlowNetwork(
                [Edge(0, 1, 1.0, 0.1), Edge(1, 0, 2.0, 0.2)],
                {0: 0.0, 1: 0.0},
            )

    def test_negative_capacity_rejected(self):
        with pytest.raises(InvariantError, match="capacity"):
            FlowNetwork([Edge(0, 1, -1.0, 0.1)], {0: 0.0, 1: 0.0})

    def test_infinite_capacity_rejected(self):
        with pytest.raises(InvariantError, match="capacity"):
            FlowNetwork([Edge(0, 1, math.inf, 0.1)], {0: 0.0, 1: 0.0})

    def test_cost_above_bound_rejected(self):
        with pytest.raises(InvariantError, match="outside"):
            FlowNetwork(
                [Edge(0, 1, 1.0, 1.5)], {0: 0.0, 1: 0.0}, cost_bound=1.0
            )
        # same cost is fine under a wider bound
        FlowNetwork([Edge(0, 1, 1.0, 1.5)], {0: 0.0, 1: 0.0}, cost_bound=2.0)

    def test_negative_cost_rejected(self):
        with pytest.raises(InvariantError, match="outside"):
            FlowNetwork([Edge(0, 1, 1.0, -0.1)], {0: 0.0, 1: 0.0})

    def test_aux_cost_must_be_zero(self):
        with pytest.raises(InvariantError, match="auxiliary"):
            FlowNetwork(
                [Edge(0, 1, 1.0, 0.5, AUXILIARY)], {0: 0.0, 1: 0.0}
            )

    def test_unbalanced_rejected(self):
        with pytest.raises(BalanceMismatch):
            FlowNetwork([Edge(0, 1, 1.0, 0.1)], {0: 2.0, 1: -1.0})

    def test_balance_tolerates_float_noise(self):
        b = {0: 0.1 + 0.2, 1: -0.3}  # off by one ulp-ish amount
        net = FlowNetwork([Edge(0, 1, 1.0, 0.1)], b)
        assert net.n == 2

    def test_immutable(self):
        net = single_edge_network()
        with pytest.raises(AttributeError):
            net.cost_bound = 2.0

    def test_with_edge_cost(self):
        net = single_edge_network()
        net2 = net.with_edge_cost(0, 0.9)
        assert net2.edges[0].cost == 0.9
        assert net.edges[0].cost == 0.5
        assert net2 != net


class TestTransform:
    def test_single_supply_demand(self):
        net = single_edge_network(demand=3.0)
        inst = transform(net)
        assert (inst.source, inst.sink) == (2, 3)
        assert inst.z == 3.0
        base = inst.base
        assert base.m == 3
        aux = base.edges[1:]
        assert aux[0] == Edge(2, 0, 3.0, 0.0, AUXILIARY)
        assert aux[1] == Edge(1, 3, 3.0, 0.0, AUXILIARY)
        assert base.balance[2] == 3.0 and base.balance[3] == -3.0
        assert base.balance[0] == 0.0 and base.balance[1] == 0.0

    def test_zero_balance_network(self):
        net = FlowNetwork([Edge(0, 1, 1.0, 0.1)], {0: 0.0, 1: 0.0})
        inst = transform(net)
        assert inst.z == 0.0
        assert inst.base.m == 1  # no auxiliary edges at all

    def test_multiple_supplies(self):
        net = FlowNetwork(
            [Edge(0, 2, 4.0, 0.1), Edge(1, 2, 4.0, 0.2)],
            {0: 2.0, 1: 1.0, 2: -3.0},
        )
        inst = transform(net)
        assert inst.z == 3.0
        base = inst.base
        # aux edges in sorted node order after the originals
        assert base.edges[2] == Edge(3, 0, 2.0, 0.0, AUXILIARY)
        assert base.edges[3] == Edge(3, 1, 1.0, 0.0, AUXILIARY)
        assert base.edges[4] == Edge(2, 4, 3.0, 0.0, AUXILIARY)
        assert base.m == 5

    def test_original_indices_preserved(self):
        net = FlowNetwork(
            [Edge(0, 2, 4.0, 0.1), Edge(1, 2, 4.0, 0.2)],
            {0: 2.0, 1: 1.0, 2: -3.0},
        )
        inst = transform(net)
        for e in range(net.m):
            assert inst.base.edges[e].tail == net.edges[e].tail
            assert inst.base.edges[e].head == net.edges[e].head
            assert inst.base.is_original(e)

    def test_transform_rejects_retransform(self):
        inst = transform(single_edge_network())
        with pytest.raises(InvariantError, match="auxiliary"):
            transform(inst.base)

    def test_as_transformed_validation(self):
        net = single_edge_network()
        inst = as_transformed(net, 0, 1)
        assert inst.z == 3.0
        with pytest.raises(InvariantError):
            as_transformed(net, 1, 0)  # b(source) != z

    def test_interior_balance_rejected(self):
        # interior imbalances cancel, so only the interior check can fire
        net = FlowNetwork(
            [Edge(0, 1, 2.0, 0.1), Edge(1, 2, 2.0, 0.1), Edge(3, 2, 2.0, 0.1)],
            {0: 2.0, 1: 1.0, 3: -1.0, 2: -2.0},
        )
        with pytest.raises(InvariantError, match="interior"):
            as_transformed(net, 0, 2)


class TestFlowAndResidual:
    def test_arc_encoding(self):
        assert arc_edge(6) == 3 and arc_edge(7) == 3
        assert arc_is_forward(6) and not arc_is_forward(7)
        assert arc_reverse(6) == 7 and arc_reverse(7) == 6

    def test_zero_flow_residual(self):
        inst = transform(single_edge_network())
        view = residual(inst, zero_flow(inst))
        # forward arcs present, backward absent, all empty
        for e in range(inst.m):
            assert view.has(2 * e)
            assert not view.has(2 * e + 1)
            assert view.is_empty(2 * e)
        assert view.is_good(0)  # the one original edge
        assert not view.is_good(2)  # aux edge: empty but not good
        assert view.residual_capacity(0) == 5.0
        assert view.cost(0) == 0.5 and view.cost(1) == -0.5

    def test_saturated_and_interior(self):
        inst = transform(single_edge_network(cap=5.0, demand=3.0))
        flow = flow_from_values(inst, [3.0, 3.0, 3.0])
        view = residual(inst, flow)
        # original edge interior: both arcs present, neither empty
        assert view.has(0) and view.has(1)
        assert not view.is_empty(0) and not view.is_empty(1)
        # aux edges saturated: backward arc is the empty one
        assert not view.has(2) and view.has(3)
        assert view.is_empty(3)
        assert view.residual_capacity(0) == 2.0
        assert view.residual_capacity(1) == 3.0

    def test_arcs_enumeration(self):
        inst = transform(single_edge_network())
        flow = flow_from_values(inst, [3.0, 3.0, 3.0])
        arcs = set(residual(inst, flow).arcs())
        assert arcs == {0, 1, 3, 5}  # aux edges saturated at cap 3

    def test_arcs_from(self):
        inst = transform(single_edge_network())
        view = residual(inst, zero_flow(inst))
        assert set(view.arcs_from(inst.source)) == {2}
        assert set(view.arcs_from(0)) == {0}

    def test_check_feasible_bounds(self):
        inst = transform(single_edge_network())
        with pytest.raises(InfeasibleFlow, match="outside"):
            flow_from_values(inst, [6.0, 3.0, 3.0])
        with pytest.raises(InfeasibleFlow, match="conservation"):
            flow_from_values(inst, [1.0, 3.0, 3.0])
        with pytest.raises(InfeasibleFlow, match="expected"):
            flow_from_values(inst, [1.0])

    def test_flow_value_reported(self):
        inst = transform(single_edge_network())
        assert flow_from_values(inst, [2.0, 2.0, 2.0]).value == 2.0
        assert check_feasible(inst, (0.0, 0.0, 0.0)) == 0.0


class TestAgainstLP:
    def test_max_flow_matches_lp_oracle(self):
        # max_flow_value is SSP-driven; linprog is an independent oracle
        for seed in range(50):
            inst = random_instance(seed, n=6, m=10)
            got = max_flow_value(inst)
            want = lp_feasible_value(inst.base)
            assert got == pytest.approx(want, abs=1e-7), seed

    def test_uniform_pool_feasibility(self):
        for seed in range(20):
            inst = uniform_instance(seed, n=5, m=8)
            got = max_flow_value(inst)
            want = lp_feasible_value(inst.base)
            assert got == pytest.approx(want, abs=1e-7), seed
