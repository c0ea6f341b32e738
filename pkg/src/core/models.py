"""Data models for graphs, representations, verdicts and catalogs."""

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Iterator, Optional


MAX_VERTICES = 512
ENUMERATION_CAP = 10


class GraphError(ValueError):
    """A graph invariant or size cap was violated."""
    pass


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_mask(vertices) -> int:
    """Pack a collection of vertex indices into a bit mask."""
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Graph:
    """A finite simple graph stored as adjacency bit-rows.

    Row u has bit v set iff uv is an edge. Graphs are immutable values.
    """
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "adj", tuple(self.adj))
        if __debug__:
            self.validate()

    def validate(self) -> None:
        """Check symmetry, irreflexivity and the vertex cap."""
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        full = self.full_mask
        for u, row in enumerate(self.adj):
            if row < 0 or row & ~full:
                raise GraphError(f"row {u} has bits at positions >= {self.n}")
            if row >> u & 1:
                raise GraphError(f"vertex {u} is adjacent to itself")
            for v in iter_bits(row):
                if not self.adj[v] >> u & 1:
                    raise GraphError(f"adjacency is not symmetric for {u}-{v}")

    @classmethod
    def empty(cls, n: int) -> "Graph":
        """The edgeless graph on n vertices."""
        return cls(n=n, adj=(0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph from an iterable of vertex pairs."""
        if not 0 <= n <= MAX_VERTICES:
            raise GraphError(f"vertex count {n} outside [0, {MAX_VERTICES}]")
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n=n, adj=tuple(rows))

    @classmethod
    def from_networkx(cls, G) -> "Graph":
        """Convert a networkx graph; vertices are indexed in node order."""
        nodes = list(G.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in G.edges()))

    def to_networkx(self):
        """Convert to a networkx graph on nodes 0..n-1."""
        import networkx as nx

        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges())
        return G

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, u: int) -> list[int]:
        return list(iter_bits(self.adj[u]))

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()

    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adj)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (u, v) pairs with u < v, sorted."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def isolated_vertices(self) -> list[int]:
        return [u for u in range(self.n) if not self.adj[u]]

    def universal_vertices(self) -> list[int]:
        return [u for u in range(self.n) if self.degree(u) == self.n - 1]

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by least vertex."""
        seen = 0
        result = []
        for start in range(self.n):
            if seen >> start & 1:
                continue
            component = 1 << start
            frontier = component
            while frontier:
                reach = 0
                for v in iter_bits(frontier):
                    reach |= self.adj[v]
                frontier = reach & ~component
                component |= frontier
            seen |= component
            result.append(list(iter_bits(component)))
        return result

    def induced(self, vertices) -> "Graph":
        """Induced subgraph; new vertex i is vertices[i]."""
        vertices = list(vertices)
        position = {v: i for i, v in enumerate(vertices)}
        if len(position) != len(vertices):
            raise GraphError("induced subgraph vertices must be distinct")
        rows = []
        for v in vertices:
            row = 0
            for u in iter_bits(self.adj[v]):
                if u in position:
                    row |= 1 << position[u]
            rows.append(row)
        return Graph(n=len(vertices), adj=tuple(rows))

    def delete_vertex(self, v: int) -> "Graph":
        return self.induced(u for u in range(self.n) if u != v)

    def add_vertex(self, neighborhood: int) -> "Graph":
        """Append a vertex adjacent to the vertices in the neighborhood mask."""
        if neighborhood & ~self.full_mask:
            raise GraphError("neighborhood refers to missing vertices")
        new = self.n
        rows = [row | ((neighborhood >> u & 1) << new) for u, row in enumerate(self.adj)]
        rows.append(neighborhood)
        return Graph(n=self.n + 1, adj=tuple(rows))

    def relabel(self, perm) -> "Graph":
        """Return the graph with vertex v renamed perm[v]."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of the vertices")
        rows = [0] * self.n
        for u in range(self.n):
            row = 0
            for v in iter_bits(self.adj[u]):
                row |= 1 << perm[v]
            rows[perm[u]] = row
        return Graph(n=self.n, adj=tuple(rows))

    def complement(self) -> "Graph":
        full = self.full_mask
        return Graph(n=self.n, adj=tuple(full & ~row & ~(1 << u) for u, row in enumerate(self.adj)))


class NamedTag(Enum):
    """Constructors for the named graphs used by the characterizations."""
    COMPLETE = "complete"
    EMPTY = "empty"
    PATH = "path"
    CYCLE = "cycle"
    STAR = "star"
    COMPLETE_MINUS_EDGE = "complete_minus_edge"
    K23_PLUS_E = "k23_plus_e"
    CLIQUE_PENDANTS = "clique_pendants"
    TRIANGLE_PENDANTS_1 = "triangle_pendants_1"
    TRIANGLE_PENDANTS_11 = "triangle_pendants_11"
    DIAMOND_PENDANTS = "diamond_pendants"
    UNION = "union"


@dataclass(frozen=True)
class NamedGraphSpec:
    """A named graph: constructor tag plus integer parameters.

    UNION specs carry their members in parts. label overrides the
    generated symbolic name (e.g. "2K_2").
    """
    tag: NamedTag
    params: tuple[int, ...] = ()
    parts: tuple["NamedGraphSpec", ...] = ()
    label: Optional[str] = None

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        return _spec_name(self)


def _sub(value) -> str:
    text = str(value)
    return text if len(text) == 1 else "{" + text + "}"


def _spec_name(spec: NamedGraphSpec) -> str:
    tag, params = spec.tag, spec.params
    if tag is NamedTag.UNION:
        return "|".join(part.name for part in spec.parts)
    if tag is NamedTag.COMPLETE:
        return f"K_{_sub(params[0])}"
    if tag is NamedTag.EMPTY:
        return f"coK_{_sub(params[0])}"
    if tag is NamedTag.PATH:
        return f"P_{_sub(params[0])}"
    if tag is NamedTag.CYCLE:
        return f"C_{_sub(params[0])}"
    if tag is NamedTag.STAR:
        return f"K_{{1,{params[0]}}}"
    if tag is NamedTag.COMPLETE_MINUS_EDGE:
        return f"K_{_sub(params[0])}-e"
    if tag is NamedTag.K23_PLUS_E:
        return "K_{2,3}+e"
    if tag is NamedTag.CLIQUE_PENDANTS:
        return f"K_{_sub(params[0])}^{{+({params[1]})}}"
    if tag is NamedTag.TRIANGLE_PENDANTS_1:
        return f"K_3^{{+({params[0]},1)}}"
    if tag is NamedTag.TRIANGLE_PENDANTS_11:
        return f"K_3^{{+({params[0]},1,1)}}"
    if tag is NamedTag.DIAMOND_PENDANTS:
        return f"(K_4-e)^{{+({params[0]})}}"
    raise GraphError(f"unknown tag {tag}")


class Part(Enum):
    """Side of the base-graph partition V(G0) = C u I."""
    CLIQUE = "C"
    INDEPENDENT = "I"


class TwinMode(Enum):
    """Neighborhood-equality relation used for twins."""
    TRUE_TWINS = "true"
    OPEN_TWINS = "open"
    BOTH = "both"


@dataclass(frozen=True)
class BlowUpPattern:
    """Base graph G0 with a C/I label and a bag size per vertex."""
    base: Graph
    parts: tuple[Part, ...]
    sizes: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        sizes = tuple(self.sizes) if self.sizes else (1,) * self.base.n
        object.__setattr__(self, "sizes", sizes)
        if len(self.parts) != self.base.n:
            raise GraphError("every base vertex needs a part label")
        if len(self.sizes) != self.base.n:
            raise GraphError("every base vertex needs a bag size")
        if any(s < 0 for s in self.sizes):
            raise GraphError("bag sizes must be nonnegative")

    @classmethod
    def uniform(cls, base: Graph, part: Part = Part.CLIQUE) -> "BlowUpPattern":
        """Pattern with every base vertex in the same part."""
        return cls(base=base, parts=(part,) * base.n)

    def with_sizes(self, sizes) -> "BlowUpPattern":
        return BlowUpPattern(base=self.base, parts=self.parts, sizes=tuple(sizes))

    @property
    def total_size(self) -> int:
        return sum(self.sizes)

    def clique_part(self) -> list[int]:
        return [u for u, part in enumerate(self.parts) if part is Part.CLIQUE]

    def independent_part(self) -> list[int]:
        return [u for u, part in enumerate(self.parts) if part is Part.INDEPENDENT]


@dataclass(frozen=True)
class IsoCertificate:
    """Canonical graph6 bytes plus the labeling that produced them.

    labeling[v] is the canonical position of vertex v. generators are
    automorphisms found during the search (perm[v] = image of v).
    """
    certificate: bytes
    labeling: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    @property
    def graph6(self) -> str:
        return self.certificate.decode("ascii")

    def orbits(self) -> list[list[int]]:
        """Vertex orbits of the group generated by the stored automorphisms."""
        n = len(self.labeling)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for perm in self.generators:
            for v, image in enumerate(perm):
                a, b = find(v), find(image)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())


@dataclass(frozen=True)
class BitVector:
    """A 0/1 vector of dimension d; bit i holds coordinate i."""
    d: int
    bits: int = 0

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("dimension must be nonnegative")
        if self.bits < 0 or self.bits >> self.d:
            raise ValueError(f"bits do not fit dimension {self.d}")

    @classmethod
    def ones(cls, d: int) -> "BitVector":
        return cls(d, (1 << d) - 1)

    @classmethod
    def unit(cls, d: int, i: int) -> "BitVector":
        return cls(d, 1 << i)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        if any(c not in "01" for c in text):
            raise ValueError(f"not a 0/1 string: {text!r}")
        return cls(len(text), sum(1 << i for i, c in enumerate(text) if c == "1"))

    @property
    def norm(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.d))

    def __sub__(self, other: "BitVector") -> "BitVector":
        if other.d != self.d or other.bits & ~self.bits:
            raise ValueError("subtraction leaves the 0/1 cube")
        return BitVector(self.d, self.bits & ~other.bits)


@dataclass(frozen=True)
class BinaryRepresentation:
    """Dimension d, threshold p and one vector (as an int) per vertex."""
    d: int
    p: int
    vectors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        if self.d < 0:
            raise ValueError("dimension must be nonnegative")
        if self.p < 1:
            raise ValueError("threshold must be at least 1")
        for u, x in enumerate(self.vectors):
            if x < 0 or x >> self.d:
                raise ValueError(f"vector of vertex {u} exceeds dimension {self.d}")

    @property
    def n(self) -> int:
        return len(self.vectors)

    def vector(self, u: int) -> BitVector:
        return BitVector(self.d, self.vectors[u])

    def rows(self) -> list[str]:
        return [str(self.vector(u)) for u in range(self.n)]

    def pad(self, extra: int = 1) -> "BinaryRepresentation":
        """Same representation with extra all-zero coordinates."""
        return BinaryRepresentation(self.d + extra, self.p, self.vectors)

    def restrict(self, vertices) -> "BinaryRepresentation":
        return BinaryRepresentation(self.d, self.p, tuple(self.vectors[v] for v in vertices))

    def relabel(self, perm) -> "BinaryRepresentation":
        """Vertex v's vector moves to position perm[v]; restrict(perm) undoes it."""
        vectors = [0] * self.n
        for v, x in enumerate(self.vectors):
            vectors[perm[v]] = x
        return BinaryRepresentation(self.d, self.p, tuple(vectors))


@dataclass(frozen=True)
class SearchConfig:
    """Budgets and switches for the exact representation search."""
    node_budget: int = 10 ** 8
    max_dimension: int = 16
    symmetry_breaking: bool = True
    randomized_restarts: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.node_budget < 1:
            raise ValueError("node budget must be positive")
        if self.max_dimension < 1:
            raise ValueError("dimension cap must be positive")

    def to_dict(self) -> dict:
        return {
            "node_budget": self.node_budget,
            "max_dimension": self.max_dimension,
            "symmetry_breaking": self.symmetry_breaking,
            "randomized_restarts": self.randomized_restarts,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SearchConfig":
        return cls(
            node_budget=int(data.get("node_budget", data.get("budget", 10 ** 8))),
            max_dimension=int(data.get("max_dimension", 16)),
            symmetry_breaking=bool(data.get("symmetry_breaking", True)),
            randomized_restarts=bool(data.get("randomized_restarts", False)),
            seed=int(data.get("seed", 0)),
        )


class Outcome(Enum):
    """Result of an exact decision."""
    YES = "YES"
    NO = "NO"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class DecisionResult:
    """Outcome of deciding Theta_p(G) <= d."""
    outcome: Outcome
    d: int
    p: int
    representation: Optional[BinaryRepresentation] = None
    nodes: int = 0

    @property
    def present(self) -> bool:
        return self.outcome is Outcome.YES


@dataclass(frozen=True)
class ThetaResult:
    """Exact Theta_p, or bounds when the budget ran out."""
    p: int
    value: Optional[int]
    lower: int
    upper: int
    representation: Optional[BinaryRepresentation] = None

    @property
    def outcome(self) -> Outcome:
        return Outcome.YES if self.value is not None else Outcome.INDETERMINATE


@dataclass(frozen=True)
class ForbCheck:
    """Result of a Forb(F) membership test."""
    holds: bool
    name: Optional[str] = None
    embedding: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class FamilyMember:
    name: str
    graph: Graph


@dataclass(frozen=True)
class ForbiddenFamily:
    """Named forbidden graphs, pairwise non-isomorphic."""
    d: int
    members: tuple[FamilyMember, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def names(self) -> list[str]:
        return [m.name for m in self.members]

    def get(self, name: str) -> Optional[Graph]:
        for member in self.members:
            if name in member.name.split("/"):
                return member.graph
        return None


class ConditionOutcome(Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    SKIPPED = "SKIPPED"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class ConditionResult:
    """One theorem condition with its (already verified) witness."""
    outcome: ConditionOutcome
    witness: Optional[str] = None
    detail: object = field(default=None, compare=False)


@dataclass(frozen=True)
class TheoremVerdict:
    """Outcomes of conditions i/ii/iii of one theorem on one graph."""
    theorem: int
    d: int
    conditions: dict

    def evaluated(self) -> list[ConditionOutcome]:
        return [
            c.outcome for c in self.conditions.values()
            if c.outcome in (ConditionOutcome.HOLDS, ConditionOutcome.FAILS)
        ]

    @property
    def consistent(self) -> bool:
        """True when every evaluated condition agrees."""
        return len(set(self.evaluated())) <= 1

    @property
    def all_hold(self) -> bool:
        return all(o is ConditionOutcome.HOLDS for o in self.evaluated())

    @property
    def any_indeterminate(self) -> bool:
        return any(c.outcome is ConditionOutcome.INDETERMINATE for c in self.conditions.values())

    def report_lines(self) -> list[str]:
        lines = []
        for key in ("i", "ii", "iii"):
            cond = self.conditions[key]
            lines.append(f"cond={key} outcome={cond.outcome.value} witness={cond.witness or '-'}")
        return lines


@dataclass(frozen=True)
class CaseTrace:
    """How the constructive builder handled a graph."""
    clique: tuple[int, ...]
    k: int
    y: tuple[int, ...]
    z: tuple[int, ...]
    case: str
    k_eff: int
    rationale: dict = field(default_factory=dict, compare=False)
    note: str = ""


@dataclass(frozen=True)
class StarReport:
    """Outcome of checking that K_{1,C(d,p)+1} is a minimal forbidden graph."""
    d: int
    p: int
    k: int
    is_mfis: bool
    details: tuple[str, ...] = ()


@dataclass(frozen=True)
class CatalogEntry:
    graph6: str
    order: int
    name: Optional[str] = None


@dataclass(frozen=True)
class MfisCatalog:
    """Minimal forbidden induced subgraphs of G(d,p) up to max_n vertices."""
    d: int
    p: int
    max_n: int
    entries: tuple[CatalogEntry, ...]
    version: str
    budget: int
    theorem1_bound: int
    corollary1_bound: int
    created_at: datetime = field(default_factory=datetime.now, compare=False)
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def exceeds_corollary1(self) -> bool:
        return any(e.order > self.corollary1_bound for e in self.entries)

    def certificates(self) -> set[str]:
        return {e.graph6 for e in self.entries}
