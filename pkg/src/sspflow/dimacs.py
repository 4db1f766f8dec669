"""Extended DIMACS min-cost-flow text format.

Grammar (line-oriented, whitespace-separated):

    c <free-form comment>
    p min <node-count> <edge-count>
    n <id> <balance-decimal>
    a <tail> <head> <capacity-decimal> <cost-decimal> [aux]

One extension in each direction: a comment line ``c costbound <value>``
records the cost-range convention (readers without the extension skip
it as a comment), and a trailing ``aux`` token marks auxiliary edges on
transformed-instance files. Decimals carry up to 17 significant digits;
the canonical writer emits ``repr(float)``, the shortest form that
round-trips. Canonical files list every node (sorted by id) and edges
in index order, so read∘write is the identity.
"""

from __future__ import annotations

from .errors import ParseError
from .network import AUXILIARY, ORIGINAL, Edge, FlowNetwork


def _num(token: str, what: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", lineno) from None
    mantissa = token.lower().split("e")[0].lstrip("+-").replace(".", "")
    digits = len(mantissa.lstrip("0"))  # leading zeros are not significant
    if digits > 17:
        raise ParseError(f"{what} {token!r} exceeds 17 significant digits", lineno)
    return value


def _int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", lineno) from None


def read_instance(text: str) -> FlowNetwork:
    """Parse extended DIMACS text into a FlowNetwork."""
    header: tuple[int, int] | None = None
    balance: dict[int, float] = {}
    edges: list[Edge] = []
    declared_nodes: set[int] = set()
    cost_bound = 1.0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        tag = fields[0]
        if tag == "c":
            if len(fields) == 3 and fields[1] == "costbound":
                cost_bound = _num(fields[2], "cost bound", lineno)
            continue
        if tag == "p":
            if header is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(fields) != 4 or fields[1] != "min":
                raise ParseError("problem line must read 'p min <n> <m>'", lineno)
            header = (_int(fields[2], "node count", lineno),
                      _int(fields[3], "edge count", lineno))
            continue
        if header is None:
            raise ParseError("node/arc line before problem line", lineno)
        if tag == "n":
            if len(fields) != 3:
                raise ParseError("node line must read 'n <id> <balance>'", lineno)
            node = _int(fields[1], "node id", lineno)
            if node in declared_nodes:
                raise ParseError(f"duplicate node line for {node}", lineno)
            declared_nodes.add(node)
            balance[node] = _num(fields[2], "balance", lineno)
            continue
        if tag == "a":
            if len(fields) not in (5, 6):
                raise ParseError(
                    "arc line must read 'a <tail> <head> <cap> <cost> [aux]'", lineno
                )
            kind = ORIGINAL
            if len(fields) == 6:
                if fields[5] != "aux":
                    raise ParseError(f"unknown arc flag {fields[5]!r}", lineno)
                kind = AUXILIARY
            edges.append(
                Edge(
                    _int(fields[1], "tail", lineno),
                    _int(fields[2], "head", lineno),
                    _num(fields[3], "capacity", lineno),
                    _num(fields[4], "cost", lineno),
                    kind,
                )
            )
            continue
        raise ParseError(f"unknown line type {tag!r}", lineno)

    if header is None:
        raise ParseError("missing problem line")
    nodes = set(declared_nodes)
    for e in edges:
        nodes.add(e.tail)
        nodes.add(e.head)
    n_declared, m_declared = header
    if len(edges) != m_declared:
        raise ParseError(f"problem line declares {m_declared} edges, file has {len(edges)}")
    if len(nodes) != n_declared:
        raise ParseError(f"problem line declares {n_declared} nodes, file has {len(nodes)}")
    return FlowNetwork(edges, balance, nodes, cost_bound)


def write_instance(network: FlowNetwork) -> str:
    """Serialize to canonical extended DIMACS text."""
    lines = [f"c costbound {network.cost_bound!r}"]
    lines.append(f"p min {network.n} {network.m}")
    for v in network.nodes:
        lines.append(f"n {v} {network.balance[v]!r}")
    for e in network.edges:
        flag = " aux" if e.kind == AUXILIARY else ""
        lines.append(f"a {e.tail} {e.head} {e.capacity!r} {e.cost!r}{flag}")
    return "\n".join(lines) + "\n"
