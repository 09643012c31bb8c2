"""Small pattern graphs: parsing, catalogs, canonical forms, and structure predicates.

Pattern graphs are the subgraph shapes whose signed counts we evaluate.
They are capped at 12 vertices; exact isomorphism machinery (canonical
codes, automorphism counts) works by exhaustive permutation with vertex
invariant pruning, which is cheap at this scale and has no failure modes.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache

MAX_VERTICES = 12
_CANON_MAX = 9


class GraphSpecError(ValueError):
    """Malformed graph specification or invalid operation input."""


class GraphTooLarge(ValueError):
    """Graph exceeds the size supported by an exhaustive operation."""


@dataclass(frozen=True)
class PatternGraph:
    """An unlabeled ≤12-vertex graph given as vertex count plus edge set.

    Edges are stored as a sorted tuple of (u, v) pairs with u < v.  The
    empty graph (n == 0) is a legal value only as the result of an edge
    symmetric difference; catalogs and parsers never produce it.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphTooLarge(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphSpecError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphSpecError(f"edge ({u},{v}) outside vertex range")
            if u > v:
                raise GraphSpecError("edges must be normalized with u < v")
            if (u, v) in seen:
                raise GraphSpecError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
        if tuple(sorted(self.edges)) != self.edges:
            raise GraphSpecError("edges must be sorted")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.n
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return tuple(d)

    def neighbors(self) -> tuple[frozenset, ...]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(s) for s in adj)

    def has_isolated_vertices(self) -> bool:
        return any(d == 0 for d in self.degrees())

    def edge_string(self) -> str:
        return ";".join(f"{u}-{v}" for u, v in self.edges)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[u, v] for u, v in self.edges]}

    @staticmethod
    def from_json(obj: dict) -> "PatternGraph":
        return make_graph(int(obj["n"]), [tuple(e) for e in obj["edges"]])


def make_graph(n: int, edges) -> PatternGraph:
    """Build a PatternGraph, normalizing edge orientation and order."""
    norm = sorted({(min(u, v), max(u, v)) for u, v in edges})
    return PatternGraph(n, tuple(norm))


# --- named constructors ---

def single_edge() -> PatternGraph:
    return make_graph(2, [(0, 1)])


def star(t: int) -> PatternGraph:
    if t < 1 or t + 1 > MAX_VERTICES:
        raise GraphSpecError(f"star size {t} out of range")
    return make_graph(t + 1, [(0, i) for i in range(1, t + 1)])


def cycle(t: int) -> PatternGraph:
    if t < 3 or t > MAX_VERTICES:
        raise GraphSpecError(f"cycle length {t} out of range")
    return make_graph(t, [(i, (i + 1) % t) for i in range(t)])


def triangle() -> PatternGraph:
    return cycle(3)


def path_graph(v: int) -> PatternGraph:
    if v < 2 or v > MAX_VERTICES:
        raise GraphSpecError(f"path on {v} vertices out of range")
    return make_graph(v, [(i, i + 1) for i in range(v - 1)])


def complete(t: int) -> PatternGraph:
    if t < 2 or t > MAX_VERTICES:
        raise GraphSpecError(f"complete graph size {t} out of range")
    return make_graph(t, itertools.combinations(range(t), 2))


def complete_bipartite(a: int, b: int) -> PatternGraph:
    if a < 1 or b < 1 or a + b > MAX_VERTICES:
        raise GraphSpecError(f"bipartite sizes ({a},{b}) out of range")
    return make_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def k4_minus() -> PatternGraph:
    """K4 with one edge removed: 4 vertices, 5 edges, degrees (2,2,3,3)."""
    g = complete(4)
    return make_graph(4, [e for e in g.edges if e != (1, 3)])


_TOKEN_RES = [
    (re.compile(r"^star(\d+)$"), lambda m: star(int(m.group(1)))),
    (re.compile(r"^cyc(\d+)$"), lambda m: cycle(int(m.group(1)))),
    (re.compile(r"^path(\d+)$"), lambda m: path_graph(int(m.group(1)))),
    (re.compile(r"^k(\d+)x(\d+)$"),
     lambda m: complete_bipartite(int(m.group(1)), int(m.group(2)))),
    (re.compile(r"^k4minus$"), lambda m: k4_minus()),
]

_ALIASES = {"edge": "star1", "wedge": "star2", "triangle": "cyc3"}


def parse_graph(spec: str) -> PatternGraph:
    """Parse a named token or a semicolon-separated "u-v" edge list.

    Named tokens: star<t>, cyc<t>, path<v>, k<t> (complete), k<a>x<b>
    (complete bipartite), k4minus, plus the aliases edge/wedge/triangle.
    A k-token whose integer exceeds the 12-vertex cap and has exactly two
    digits is read as complete bipartite, so "k23" is K_{2,3} and "k44"
    is K_{4,4} while "k12" stays the complete graph on 12 vertices.

    Explicit edge lists use 0-based indices; the vertex count is one plus
    the largest index, and any index below that left untouched by every
    edge is rejected as an isolated vertex.
    """
    s = spec.strip().lower()
    if not s:
        raise GraphSpecError("empty graph spec")
    s = _ALIASES.get(s, s)
    for rx, build in _TOKEN_RES:
        m = rx.match(s)
        if m:
            return build(m)
    m = re.match(r"^k(\d+)$", s)
    if m:
        t = int(m.group(1))
        if t <= MAX_VERTICES:
            return complete(t)
        if len(m.group(1)) == 2:
            return complete_bipartite(int(m.group(1)[0]), int(m.group(1)[1]))
        raise GraphSpecError(f"complete graph k{t} exceeds {MAX_VERTICES} vertices")
    if re.match(r"^[a-z]", s):
        raise GraphSpecError(f"unknown graph token {spec!r}")
    edges = []
    for part in s.split(";"):
        m = re.match(r"^(\d+)-(\d+)$", part.strip())
        if not m:
            raise GraphSpecError(f"malformed edge {part!r}")
        u, v = int(m.group(1)), int(m.group(2))
        if u == v:
            raise GraphSpecError(f"self-loop at vertex {u}")
        if u >= MAX_VERTICES or v >= MAX_VERTICES:
            raise GraphSpecError(f"vertex index above {MAX_VERTICES - 1} in {part!r}")
        edges.append((u, v))
    n = 1 + max(max(e) for e in edges)
    g = make_graph(n, edges)
    if g.has_isolated_vertices():
        raise GraphSpecError("edge list leaves isolated vertices")
    return g


# --- isomorphism machinery ---

def _vertex_invariants(g: PatternGraph) -> tuple:
    """Two refinement rounds of degree-based vertex invariants."""
    adj = g.neighbors()
    deg = g.degrees()
    inv1 = tuple((deg[v], tuple(sorted(deg[u] for u in adj[v]))) for v in range(g.n))
    ranks = {val: i for i, val in enumerate(sorted(set(inv1)))}
    inv2 = tuple(
        (ranks[inv1[v]], tuple(sorted(ranks[inv1[u]] for u in adj[v])))
        for v in range(g.n)
    )
    return inv2


def _class_groups(g: PatternGraph) -> list[list[int]]:
    """Vertices grouped by invariant class, classes in canonical order."""
    inv = _vertex_invariants(g)
    groups: dict = {}
    for v in range(g.n):
        groups.setdefault(inv[v], []).append(v)
    return [groups[key] for key in sorted(groups)]


def _class_permutations(groups):
    """All vertex arrangements assigning each class block in order."""
    for parts in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        yield tuple(itertools.chain.from_iterable(parts))


def _code_bits(g: PatternGraph, perm: tuple[int, ...]) -> int:
    """Upper-triangle adjacency bits of g with vertex perm[i] at slot i."""
    adj = g.neighbors()
    bits = 0
    idx = 0
    for i in range(g.n):
        ai = adj[perm[i]]
        for j in range(i + 1, g.n):
            if perm[j] in ai:
                bits |= 1 << idx
            idx += 1
    return bits


def _components(g: PatternGraph) -> list[list[int]]:
    adj = g.neighbors()
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def induced_subgraph(g: PatternGraph, vertices: list[int]) -> PatternGraph:
    pos = {v: i for i, v in enumerate(vertices)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    return make_graph(len(vertices), edges)


def components(g: PatternGraph) -> list[PatternGraph]:
    """Connected components as standalone graphs, in first-vertex order."""
    return [induced_subgraph(g, comp) for comp in _components(g)]


@lru_cache(maxsize=65536)
def canonical_form(g: PatternGraph) -> str:
    """Isomorphism-invariant code; equal codes iff isomorphic.

    Connected graphs up to 9 vertices are coded by the minimum adjacency
    bit string over invariant-class-preserving permutations.  Larger or
    disconnected graphs are coded by the sorted multiset of component
    codes, each component at most 9 vertices.
    """
    comps = _components(g)
    if len(comps) == 1 and g.n <= _CANON_MAX:
        groups = _class_groups(g)
        best = min(_code_bits(g, perm) for perm in _class_permutations(groups))
        return f"{g.n}:{best:x}"
    if len(comps) == 1:
        raise GraphTooLarge(f"connected graph on {g.n} > {_CANON_MAX} vertices")
    parts = []
    for comp in comps:
        sub = induced_subgraph(g, comp)
        if sub.n > _CANON_MAX:
            raise GraphTooLarge("component too large for canonicalization")
        parts.append(canonical_form(sub))
    return "U:" + "|".join(sorted(parts))


@lru_cache(maxsize=65536)
def automorphism_count(g: PatternGraph) -> int:
    """|Aut(g)| by exhaustive class-pruned permutation check."""
    if g.n == 0:
        return 1
    comps = _components(g)
    if len(comps) == 1:
        if g.n > _CANON_MAX:
            raise GraphTooLarge(f"graph on {g.n} > {_CANON_MAX} vertices")
        edge_set = set(g.edges)
        groups = _class_groups(g)
        count = 0
        for perm in _class_permutations(groups):
            # perm maps slot -> vertex; the induced vertex map is
            # original slot order (class-sorted) onto perm.
            base = tuple(itertools.chain.from_iterable(groups))
            mapping = dict(zip(base, perm))
            if all(
                (min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) in edge_set
                for u, v in g.edges
            ):
                count += 1
        return count
    by_code: dict = {}
    for comp in comps:
        sub = induced_subgraph(g, comp)
        by_code.setdefault(canonical_form(sub), []).append(sub)
    total = 1
    for code, subs in by_code.items():
        total *= automorphism_count(subs[0]) ** len(subs) * math.factorial(len(subs))
    return total


def labeled_copies_in_complete(g: PatternGraph, n: int) -> int:
    """Number of injective vertex maps of g into K_n: n(n-1)...(n-h+1)."""
    if n < g.n:
        raise GraphSpecError(f"complete graph on {n} vertices too small")
    return math.perm(n, g.n)


def copies_in_complete(g: PatternGraph, n: int) -> int:
    """Number of distinct subgraphs of K_n isomorphic to g.

    Equals the labeled count divided by |Aut(g)|; exact integer.
    """
    lab = labeled_copies_in_complete(g, n)
    aut = automorphism_count(g)
    assert lab % aut == 0
    return lab // aut


@lru_cache(maxsize=4096)
def distinct_embeddings(g: PatternGraph) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Distinct edge-set images of g on the fixed vertex set {0..n-1}.

    One entry per subgraph of K_n (n = g.n) isomorphic to g covering all
    n vertices; there are n!/|Aut(g)| of them.
    """
    if g.n > 8:
        raise GraphTooLarge("embedding enumeration limited to 8 vertices")
    images = set()
    for perm in itertools.permutations(range(g.n)):
        mapped = tuple(sorted(
            (min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges
        ))
        images.add(mapped)
    return tuple(sorted(images))


# --- combination operators ---

def disjoint_union(a: PatternGraph, b: PatternGraph) -> PatternGraph:
    if a.n + b.n > MAX_VERTICES:
        raise GraphTooLarge(f"union on {a.n + b.n} vertices exceeds cap")
    shifted = [(u + a.n, v + a.n) for u, v in b.edges]
    return make_graph(a.n + b.n, list(a.edges) + shifted)


def _apply_map(g: PatternGraph, mapping) -> list[tuple[int, int]]:
    if mapping is None:
        mapping = {v: v for v in range(g.n)}
    elif not isinstance(mapping, dict):
        mapping = {v: m for v, m in enumerate(mapping)}
    targets = [mapping.get(v) for v in range(g.n)]
    if any(t is None or t < 0 for t in targets):
        raise GraphSpecError("vertex map must cover every vertex")
    if len(set(targets)) != g.n:
        raise GraphSpecError("vertex map must be injective")
    return [(min(targets[u], targets[v]), max(targets[u], targets[v]))
            for u, v in g.edges]


def symmetric_product(a: PatternGraph, b: PatternGraph,
                      map_a=None, map_b=None) -> PatternGraph:
    """Edge symmetric difference of the two mapped graphs, isolated
    vertices removed and the survivors compacted to 0..m-1.

    The maps place both graphs on a common vertex set (identity when
    omitted).  Two identical copies cancel to the empty graph (n == 0).
    """
    ea = set(_apply_map(a, map_a))
    eb = set(_apply_map(b, map_b))
    diff = ea.symmetric_difference(eb)
    return pattern_from_edge_set(diff)


def pattern_from_edge_set(edge_set) -> PatternGraph:
    """Compact an embedded edge set into a PatternGraph without isolated
    vertices; the empty set yields the empty pattern."""
    diff = set(edge_set)
    if not diff:
        return PatternGraph(0, ())
    kept = sorted({v for e in diff for v in e})
    if len(kept) > MAX_VERTICES:
        raise GraphTooLarge(f"result on {len(kept)} vertices exceeds cap")
    pos = {v: i for i, v in enumerate(kept)}
    return make_graph(len(kept), [(pos[u], pos[v]) for u, v in diff])


# --- structure profile ---

@dataclass(frozen=True)
class GraphProfile:
    degree_sequence: tuple[int, ...]
    is_tree: bool
    is_connected: bool
    is_bipartite: bool
    bipartition_sizes: tuple[int, int] | None
    is_2connected: bool
    leaf_vertices: tuple[int, ...]
    all_degrees_even: bool
    has_odd_degree_vertex: bool
    max_degree: int


def _bridges(g: PatternGraph) -> list[tuple[int, int]]:
    """Cut edges via iterative DFS lowlink."""
    adj = g.neighbors()
    disc = [-1] * g.n
    low = [0] * g.n
    out: list[tuple[int, int]] = []
    timer = 0
    for root in range(g.n):
        if disc[root] != -1:
            continue
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if disc[u] == -1:
                    disc[u] = low[u] = timer
                    timer += 1
                    stack.append((u, v, iter(adj[u])))
                    advanced = True
                    break
                elif u != parent:
                    low[v] = min(low[v], disc[u])
            if not advanced:
                stack.pop()
                if parent != -1:
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        out.append((min(parent, v), max(parent, v)))
    return out


def _bipartition(g: PatternGraph):
    """Return per-component (side0, side1) lists or None if an odd cycle exists."""
    adj = g.neighbors()
    color = [-1] * g.n
    comps = []
    for root in range(g.n):
        if color[root] != -1:
            continue
        color[root] = 0
        sides = [[root], []]
        queue = [root]
        while queue:
            v = queue.pop()
            for u in adj[v]:
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    sides[color[u]].append(u)
                    queue.append(u)
                elif color[u] == color[v]:
                    return None
        comps.append(sides)
    return comps


def profile(g: PatternGraph) -> GraphProfile:
    """Structure predicates used by the comparison and example checks.

    ``is_2connected`` means connected with no cut edge (on >= 3 vertices),
    i.e. the graph stays connected after removing any single edge.  For
    disconnected bipartite graphs, ``bipartition_sizes`` reports the
    2-coloring minimizing the smaller side, which is the coloring that
    dominates tiny-community Fourier coefficients.
    """
    deg = g.degrees()
    comps = _components(g)
    connected = len(comps) == 1 and g.n > 0
    tree = connected and g.edge_count == g.n - 1
    sides = _bipartition(g)
    if sides is None:
        bip, bip_sizes = False, None
    else:
        bip = True
        u = sum(min(len(s0), len(s1)) for s0, s1 in sides)
        bip_sizes = (u, g.n - u)
    two_conn = connected and g.n >= 3 and not _bridges(g)
    leaves = tuple(v for v in range(g.n) if deg[v] == 1)
    all_even = all(d % 2 == 0 for d in deg)
    return GraphProfile(
        degree_sequence=tuple(sorted(deg)),
        is_tree=tree,
        is_connected=connected,
        is_bipartite=bip,
        bipartition_sizes=bip_sizes,
        is_2connected=two_conn,
        leaf_vertices=leaves,
        all_degrees_even=all_even,
        has_odd_degree_vertex=not all_even,
        max_degree=max(deg) if deg else 0,
    )


def is_star(g: PatternGraph) -> bool:
    if g.n < 2 or g.edge_count != g.n - 1:
        return False
    deg = sorted(g.degrees())
    return (g.n == 2 or (deg[:-1] == [1] * (g.n - 1) and deg[-1] == g.n - 1)) \
        and profile(g).is_connected


def is_cycle(g: PatternGraph) -> bool:
    return g.n >= 3 and all(d == 2 for d in g.degrees()) and profile(g).is_connected


# --- catalogs ---

def _edge_additions(g: PatternGraph) -> list[PatternGraph]:
    """Connected supergraphs of g with one extra edge (possibly one new vertex)."""
    out = []
    existing = set(g.edges)
    for u, v in itertools.combinations(range(g.n), 2):
        if (u, v) not in existing:
            out.append(make_graph(g.n, list(g.edges) + [(u, v)]))
    if g.n < MAX_VERTICES:
        for u in range(g.n):
            out.append(make_graph(g.n + 1, list(g.edges) + [(u, g.n)]))
    return out


@lru_cache(maxsize=16)
def _connected_catalog(max_edges: int) -> tuple[PatternGraph, ...]:
    levels: list[dict[str, PatternGraph]] = [
        {canonical_form(single_edge()): single_edge()}
    ]
    for _ in range(1, max_edges):
        nxt: dict[str, PatternGraph] = {}
        for g in levels[-1].values():
            for cand in _edge_additions(g):
                code = canonical_form(cand)
                if code not in nxt:
                    nxt[code] = cand
        levels.append(nxt)
    out = [g for level in levels for g in level.values()]
    return tuple(out)


def _sort_key(g: PatternGraph):
    return (g.n, g.edge_count, canonical_form(g))


@lru_cache(maxsize=32)
def enumerate_graphs(max_edges: int, connected_only: bool) -> tuple[PatternGraph, ...]:
    """One representative per isomorphism class of graphs without isolated
    vertices and at most ``max_edges`` edges, deterministically ordered.

    With ``connected_only`` False, multi-component graphs are assembled
    from the connected catalog; only assemblies within the 12-vertex cap
    are returned (complete for max_edges <= 6, truncated above).
    """
    if not 1 <= max_edges <= 8:
        raise GraphSpecError("max_edges must be in [1, 8]")
    conn = _connected_catalog(max_edges)
    if connected_only:
        return tuple(sorted(conn, key=_sort_key))
    out = []

    def assemble(start: int, acc: PatternGraph | None, edges_left: int):
        for i in range(start, len(conn)):
            c = conn[i]
            if c.edge_count > edges_left:
                continue
            if acc is not None and acc.n + c.n > MAX_VERTICES:
                continue
            merged = c if acc is None else disjoint_union(acc, c)
            out.append(merged)
            assemble(i, merged, edges_left - c.edge_count)

    assemble(0, None, max_edges)
    return tuple(sorted(out, key=_sort_key))


def connected_catalog(max_edges: int) -> tuple[PatternGraph, ...]:
    return enumerate_graphs(max_edges, True)
