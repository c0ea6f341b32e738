"""Binary dot-product representations and the pattern graphs they induce."""

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

from src.core.models import (
    BinaryRepresentation, BitVector, BlowUpPattern, Graph, GraphError, Part,
)

MAX_PATTERN_DIMENSION = 6


class RepresentationError(ValueError):
    """Malformed certificate or a representation that does not fit its graph."""
    pass


@dataclass(frozen=True)
class RepresentationCheck:
    valid: bool
    pair: Optional[tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class StarGraph:
    """G*_(d,d-2): clique side first, then the independent side."""
    graph: Graph
    clique: tuple[int, ...]
    independent: tuple[int, ...]
    representation: BinaryRepresentation


def dot(x: BitVector, y: BitVector) -> int:
    if x.d != y.d:
        raise RepresentationError(f"dimension mismatch: {x.d} vs {y.d}")
    return (x.bits & y.bits).bit_count()


def norm_vectors(d: int, k: int) -> list[int]:
    """All vectors of dimension d with exactly k ones, in increasing order."""
    if not 0 <= k <= d:
        return []
    return sorted(sum(1 << i for i in ones) for ones in combinations(range(d), k))


def verify_representation(g: Graph, rep: BinaryRepresentation) -> RepresentationCheck:
    """Check uv in E(g) iff f(u).f(v) >= p for every pair of distinct vertices."""
    if rep.n != g.n:
        raise RepresentationError(f"representation covers {rep.n} vertices, graph has {g.n}")
    vectors = rep.vectors
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if ((vectors[u] & vectors[v]).bit_count() >= rep.p) != g.has_edge(u, v):
                return RepresentationCheck(valid=False, pair=(u, v))
    return RepresentationCheck(valid=True)


def format_certificate(rep: BinaryRepresentation) -> str:
    """Line "d p n", then one 0/1 row per vertex (empty rows when d = 0)."""
    lines = [f"{rep.d} {rep.p} {rep.n}"]
    lines.extend(rep.rows())
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> BinaryRepresentation:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise RepresentationError("empty certificate")
    header = lines[0].split()
    if len(header) != 3:
        raise RepresentationError(f"certificate header must be 'd p n', got {lines[0]!r}")
    try:
        d, p, n = (int(x) for x in header)
    except ValueError:
        raise RepresentationError(f"certificate header must be integers, got {lines[0]!r}") from None
    rows = lines[1:]
    if len(rows) != n:
        raise RepresentationError(f"expected {n} vector rows, got {len(rows)}")
    vectors = []
    for i, row in enumerate(rows, start=2):
        row = row.strip()
        if len(row) != d or any(c not in "01" for c in row):
            raise RepresentationError(f"line {i}: expected {d} characters of 0/1, got {row!r}")
        vectors.append(BitVector.from_string(row).bits if d else 0)
    try:
        return BinaryRepresentation(d=d, p=p, vectors=tuple(vectors))
    except ValueError as e:
        raise RepresentationError(str(e)) from None


def theta_upper_bound(g: Graph, p: int) -> int:
    """|E| + p - 1 for graphs with edges, else 0.

    One private element per edge gives a 1-intersection representation;
    adding p - 1 elements shared by every vertex lifts each intersection
    by p - 1, so adjacent pairs reach p and non-adjacent pairs stop at p - 1.
    """
    if p < 1:
        raise ValueError("threshold must be at least 1")
    m = g.edge_count
    return m + p - 1 if m else 0


def padded_edge_representation(g: Graph, p: int) -> BinaryRepresentation:
    """The certificate behind theta_upper_bound."""
    d = theta_upper_bound(g, p)
    if d == 0:
        return BinaryRepresentation(d=0, p=p, vectors=(0,) * g.n)
    m = g.edge_count
    shared = ((1 << (p - 1)) - 1) << m
    vectors = [shared] * g.n
    for k, (u, v) in enumerate(g.edges()):
        vectors[u] |= 1 << k
        vectors[v] |= 1 << k
    return BinaryRepresentation(d=d, p=p, vectors=tuple(vectors))


def star_representation(t: int, d: int, p: int) -> BinaryRepresentation:
    """K_{1,t} with centre 0: centre all ones, leaves distinct norm-p vectors."""
    if not 1 <= p <= d:
        raise RepresentationError(f"need 1 <= p <= d, got p={p}, d={d}")
    leaves = norm_vectors(d, p)
    if t > len(leaves):
        raise RepresentationError(f"K_{{1,{t}}} needs more than C({d},{p}) = {len(leaves)} leaves")
    return BinaryRepresentation(d=d, p=p, vectors=((1 << d) - 1,) + tuple(leaves[:t]))


def build_G_dp(d: int, p: int) -> BlowUpPattern:
    """G_(d,p): vertex x is the bit-vector x; CLIQUE part iff x.x >= p."""
    if p < 1:
        raise ValueError("threshold must be at least 1")
    if not 0 <= d <= MAX_PATTERN_DIMENSION:
        raise GraphError(f"G_(d,p) is built for 0 <= d <= {MAX_PATTERN_DIMENSION}, got d={d}")
    order = 1 << d
    rows = []
    for x in range(order):
        row = 0
        for y in range(order):
            if y != x and (x & y).bit_count() >= p:
                row |= 1 << y
        rows.append(row)
    parts = tuple(Part.CLIQUE if x.bit_count() >= p else Part.INDEPENDENT for x in range(order))
    return BlowUpPattern(base=Graph(n=order, adj=tuple(rows)), parts=parts)


def build_G_star(d: int) -> StarGraph:
    """G*_(d,d-2) from the norm d-1 and norm d-2 vectors.

    Clique vertex i carries 1 - e_i; independent vertices carry 1 - e_i - e_j
    for i < j in lexicographic order.
    """
    if d < 3:
        raise GraphError(f"G*_(d,d-2) needs d >= 3, got {d}")
    full = (1 << d) - 1
    vectors = [full & ~(1 << i) for i in range(d)]
    vectors += [full & ~(1 << i) & ~(1 << j) for i, j in combinations(range(d), 2)]
    n = len(vectors)
    rows = []
    for u in range(n):
        row = 0
        for v in range(n):
            if v != u and (vectors[u] & vectors[v]).bit_count() >= d - 2:
                row |= 1 << v
        rows.append(row)
    return StarGraph(
        graph=Graph(n=n, adj=tuple(rows)),
        clique=tuple(range(d)),
        independent=tuple(range(d, n)),
        representation=BinaryRepresentation(d=d, p=d - 2, vectors=tuple(vectors)),
    )


def star_pattern(d: int) -> BlowUpPattern:
    """G*_(d,d-2) with every vertex in the CLIQUE part."""
    return BlowUpPattern.uniform(build_G_star(d).graph, Part.CLIQUE)


def u_prime_count(d: int, xs) -> int:
    """Norm d-2 vectors meeting none of the norm d-1 vectors xs at d-2."""
    xs = _check_high_vectors(d, xs)
    return sum(
        1 for y in norm_vectors(d, d - 2)
        if all((y & x).bit_count() < d - 2 for x in xs)
    )


def u_double_prime_count(d: int, xs) -> int:
    """Norm d-2 vectors meeting xs[0] at d-2 and no other xs[j]."""
    xs = _check_high_vectors(d, xs)
    first, rest = xs[0], xs[1:]
    return sum(
        1 for y in norm_vectors(d, d - 2)
        if (y & first).bit_count() == d - 2 and all((y & x).bit_count() < d - 2 for x in rest)
    )


def _check_high_vectors(d: int, xs) -> list[int]:
    xs = [x.bits if isinstance(x, BitVector) else int(x) for x in xs]
    if len(set(xs)) != len(xs):
        raise RepresentationError("vectors must be distinct")
    for x in xs:
        if x >> d or x.bit_count() != d - 1:
            raise RepresentationError(f"vector {x:b} is not of norm {d - 1} in dimension {d}")
    return xs


def expected_u_prime(d: int) -> int:
    return comb(max(d - 3, 0), 2)


def expected_u_double_prime(d: int, i: int) -> int:
    return d - i
