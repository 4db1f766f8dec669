import pytest
from hypothesis import given, settings, strategies as st

from sspflow import (
    AUXILIARY,
    Edge,
    FlowNetwork,
    InvariantError,
    ParseError,
    read_instance,
    transform,
    write_instance,
)

from conftest import random_instance, single_edge_network


BASIC = """\
p min 2 1
n 1 3.0
n 2 -3.0
a 1 2 3.0 0.5
"""


def test_basic_parse():
    net = read_instance(BASIC)
    assert net.nodes == (1, 2)
    assert net.balance[1] == 3.0 and net.balance[2] == -3.0
    assert net.edges == (Edge(1, 2, 3.0, 0.5),)
    assert net.cost_bound == 1.0


def test_comments_and_blank_lines():
    text = "c a comment\n\n" + BASIC + "c trailing\n"
    assert read_instance(text) == read_instance(BASIC)


def test_costbound_extension():
    text = "c costbound 8.0\np min 2 1\nn 1 2.0\nn 2 -2.0\na 1 2 2.0 5.5\n"
    net = read_instance(text)
    assert net.cost_bound == 8.0
    assert net.edges[0].cost == 5.5


def test_aux_flag_round_trip():
    inst = transform(single_edge_network())
    text = write_instance(inst.base)
    back = read_instance(text)
    assert back == inst.base
    assert back.edges[1].kind == AUXILIARY


def test_two_cycle_file_rejected():
    text = "p min 2 2\nn 1 1.0\nn 2 -1.0\na 1 2 1.0 0.1\na 2 1 1.0 0.1\n"
    with pytest.raises(InvariantError, match="2-cycle"):
        read_instance(text)


class TestParseErrors:
    def test_missing_header(self):
        with pytest.raises(ParseError, match="before problem line"):
            read_instance("n 1 0.0\n")

    def test_duplicate_header(self):
        with pytest.raises(ParseError) as exc:
            read_instance("p min 1 0\np min 1 0\nn 1 0.0\n")
        assert exc.value.line == 2

    def test_duplicate_node_line(self):
        text = "p min 2 1\nn 1 1.0\nn 1 1.0\nn 2 -2.0\na 1 2 2.0 0.1\n"
        with pytest.raises(ParseError) as exc:
            read_instance(text)
        assert exc.value.line == 3

    def test_count_mismatch(self):
        text = "p min 3 1\nn 1 1.0\nn 2 -1.0\na 1 2 1.0 0.1\n"
        with pytest.raises(ParseError, match="declares 3 nodes"):
            read_instance(text)

    def test_bad_token_reports_line(self):
        text = "p min 2 1\nn 1 1.0\nn 2 -1.0\na 1 2 oops 0.1\n"
        with pytest.raises(ParseError) as exc:
            read_instance(text)
        assert exc.value.line == 4

    def test_unknown_line_kind(self):
        with pytest.raises(ParseError, match="unknown"):
            read_instance("p min 1 0\nn 1 0.0\nq nonsense\n")

    def test_too_many_digits(self):
        text = "p min 2 1\nn 1 1.0\nn 2 -1.0\na 1 2 1.0 0.123456789012345678901\n"
        with pytest.raises(ParseError, match="significant digits"):
            read_instance(text)

    def test_leading_zeros_not_significant(self):
        text = "p min 2 1\nn 1 1.0\nn 2 -1.0\na 1 2 1.0 0.08817195540675103\n"
        net = read_instance(text)
        assert net.edges[0].cost == 0.08817195540675103


class TestRoundTrip:
    def test_canonical_form_is_stable(self):
        inst = random_instance(3)
        text = write_instance(inst.base)
        assert write_instance(read_instance(text)) == text

    def test_round_trip_pool(self):
        for seed in range(20):
            net = random_instance(seed, n=6, m=9).base
            assert read_instance(write_instance(net)) == net

    @settings(max_examples=60, deadline=None)
    @given(
        caps=st.lists(
            st.floats(0.0, 100.0, allow_nan=False, width=64),
            min_size=3,
            max_size=3,
        ),
        costs=st.lists(
            st.floats(0.0, 1.0, allow_nan=False, width=64),
            min_size=3,
            max_size=3,
        ),
        demand=st.floats(0.0, 50.0, allow_nan=False, width=64),
    )
    def test_round_trip_property(self, caps, costs, demand):
        net = FlowNetwork(
            [
                Edge(0, 1, caps[0], costs[0]),
                Edge(1, 2, caps[1], costs[1]),
                Edge(0, 2, caps[2], costs[2]),
            ],
            {0: demand, 2: -demand},
        )
        assert read_instance(write_instance(net)) == net


def test_writer_emits_costbound_first_line():
    net = single_edge_network()
    lines = write_instance(net).splitlines()
    assert lines[0] == "c costbound 1.0"
    assert lines[1] == "p min 2 1"
