"""graph6 and edge-list codecs."""

import logging

import networkx as nx

from src.core.models import Graph, GraphError, MAX_VERTICES

logger = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"


class Graph6Error(GraphError):
    """Malformed graph6 input; offset is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.reason = message
        self.offset = offset


def _check_byte(data: bytes, i: int) -> int:
    value = data[i]
    if not 63 <= value <= 126:
        raise Graph6Error(f"byte {value!r} outside the graph6 range 63..126", i)
    return value - 63


def _decode_order(data: bytes) -> tuple[int, int]:
    """Return (n, length of the order field)."""
    if not data:
        raise Graph6Error("empty graph6 string", 0)
    first = _check_byte(data, 0)
    if first != 63:
        return first, 1
    if len(data) < 2:
        raise Graph6Error("truncated order field", 1)
    if data[1] == 126:
        raise Graph6Error(f"order exceeds the {MAX_VERTICES}-vertex cap", 1)
    if len(data) < 4:
        raise Graph6Error("truncated order field", len(data))
    n = 0
    for i in range(1, 4):
        n = (n << 6) | _check_byte(data, i)
    return n, 4


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 token (an optional >>graph6<< header is accepted)."""
    token = text.strip()
    base = 0
    if token.startswith(GRAPH6_HEADER):
        token = token[len(GRAPH6_HEADER):]
        base = len(GRAPH6_HEADER)
    try:
        data = token.encode("ascii")
    except UnicodeEncodeError as e:
        raise Graph6Error("non-ASCII character", base + e.start) from e

    try:
        n, start = _decode_order(data)
    except Graph6Error as e:
        raise Graph6Error(e.reason, base + e.offset) from None
    if n > MAX_VERTICES:
        raise Graph6Error(f"order {n} exceeds the {MAX_VERTICES}-vertex cap", base)

    bit_count = n * (n - 1) // 2
    expected = (bit_count + 5) // 6
    body = data[start:]
    if len(body) < expected:
        raise Graph6Error("truncated adjacency body", base + len(data))
    if len(body) > expected:
        raise Graph6Error("unexpected trailing bytes", base + start + expected)
    for i in range(start, len(data)):
        try:
            _check_byte(data, i)
        except Graph6Error:
            raise Graph6Error(f"byte {data[i]!r} outside the graph6 range 63..126", base + i) from None
    padding = expected * 6 - bit_count
    if expected and padding and (data[-1] - 63) & ((1 << padding) - 1):
        raise Graph6Error("nonzero padding bits", base + len(data) - 1)

    return Graph.from_networkx(nx.from_graph6_bytes(data))


def emit_graph6(g: Graph) -> str:
    """Encode g under its current labeling, without header or newline."""
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode("ascii").strip()


def parse_edgelist(text: str) -> list[Graph]:
    """Parse one or more graphs in "n m" + m lines of "u v" form.

    Blank lines and lines starting with '#' are ignored.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append((lineno, line))

    def ints(lineno: int, line: str) -> tuple[int, int]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: expected two integers, got {line!r}") from None

    graphs = []
    i = 0
    while i < len(lines):
        lineno, line = lines[i]
        n, m = ints(lineno, line)
        if n < 0 or m < 0:
            raise GraphError(f"line {lineno}: negative header values")
        if m > len(lines) - i - 1:
            raise GraphError(f"line {lineno}: expected {m} edge lines, input ends early")
        edges = [ints(*lines[i + 1 + j]) for j in range(m)]
        try:
            graphs.append(Graph.from_edges(n, edges))
        except GraphError as e:
            raise GraphError(f"line {lineno}: {e}") from None
        i += m + 1
    return graphs


def emit_edgelist(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def read_graphs(text: str, fmt: str = "graph6") -> list[Graph]:
    """Parse every graph in text; graph6 input holds one graph per line."""
    if fmt == "edgelist":
        return parse_edgelist(text)
    if fmt != "graph6":
        raise GraphError(f"unknown input format {fmt!r}")
    graphs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        token = line.strip()
        if not token or token == GRAPH6_HEADER:
            continue
        try:
            graphs.append(parse_graph6(token))
        except Graph6Error as e:
            logger.debug("graph6 parse failure on line %d", lineno)
            raise Graph6Error(f"line {lineno}: {e.reason}", e.offset) from None
    return graphs
