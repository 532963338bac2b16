"""Pentagon-caterpillar graphs: 4-chromatic, K4-free, few chords per cycle.

G_m has spine pentagons S_0 .. S_m (labels a..e) joined c -> a along the
spine, leaf pentagons (labels A..E) hung off spine vertices, and one special
vertex v adjacent to the four non-attachment vertices of every leaf.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import NamedTuple, Optional

from .errors import BudgetExceeded, CapExceeded, InvalidArgument, InvalidParameter

SPINE_LABELS = "abcde"
LEAF_LABELS = "ABCDE"
DEFAULT_CYCLE_CAP = 10 ** 7
DEFAULT_NODE_BUDGET = 10 ** 6


class BlockId(NamedTuple):
    kind: str          # "S" spine or "L" leaf
    i: int
    x: Optional[str] = None   # attachment letter for leaves


class VertexId(NamedTuple):
    block: Optional[BlockId]
    label: str

    @property
    def special(self) -> bool:
        return self.block is None

    def dot_name(self) -> str:
        if self.block is None:
            return "v"
        if self.block.kind == "S":
            return f"S{self.block.i}.{self.label}"
        return f"L{self.block.i}.{self.block.x}.{self.label}"


SPECIAL = VertexId(None, "v")


def leaf_letters(i: int, m: int) -> str:
    if i == 0:
        return "abde"
    if i == m:
        return "bcde"
    return "bde"


def _rim(labels: str):
    return [(labels[t], labels[(t + 1) % 5]) for t in range(5)]


@dataclass
class GadgetGraph:
    m: int
    vertices: list
    index: dict
    nbrs: list                  # neighbour index sets, parallel to vertices
    blocks: list = field(default_factory=list)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.nbrs) // 2

    @property
    def v(self) -> int:
        return self.index[SPECIAL]

    @property
    def adjacency(self) -> dict:
        return {u: sorted((self.vertices[j] for j in self.nbrs[i]), key=self.index.get)
                for i, u in enumerate(self.vertices)}

    def edges(self) -> list:
        return [(i, j) for i in range(len(self.nbrs)) for j in sorted(self.nbrs[i]) if i < j]

    def degree(self, u) -> int:
        return len(self.nbrs[self.index[u]])

    def block_of(self, i: int) -> Optional[BlockId]:
        return self.vertices[i].block

    def block_vertices(self, block: BlockId) -> list:
        labels = SPINE_LABELS if block.kind == "S" else LEAF_LABELS
        return [self.index[VertexId(block, c)] for c in labels]

    def leaf_blocks(self) -> list:
        return [b for b in self.blocks if b.kind == "L"]

    def spine_blocks(self) -> list:
        return [b for b in self.blocks if b.kind == "S"]


def build_graph(m: int) -> GadgetGraph:
    if m < 1:
        raise InvalidParameter("m must be at least 1")
    vertices, edges, blocks = [], [], []

    def add_block(block, labels):
        blocks.append(block)
        for c in labels:
            vertices.append(VertexId(block, c))
        for a, b in _rim(labels):
            edges.append((VertexId(block, a), VertexId(block, b)))

    for i in range(m + 1):
        spine = BlockId("S", i)
        add_block(spine, SPINE_LABELS)
        for x in leaf_letters(i, m):
            leaf = BlockId("L", i, x)
            add_block(leaf, LEAF_LABELS)
            edges.append((VertexId(spine, x), VertexId(leaf, x.upper())))
        if i:
            edges.append((VertexId(BlockId("S", i - 1), "c"), VertexId(spine, "a")))
    vertices.append(SPECIAL)
    for block in blocks:
        if block.kind == "L":
            for c in LEAF_LABELS:
                if c != block.x.upper():
                    edges.append((SPECIAL, VertexId(block, c)))

    index = {u: k for k, u in enumerate(vertices)}
    nbrs = [set() for _ in vertices]
    for a, b in edges:
        nbrs[index[a]].add(index[b])
        nbrs[index[b]].add(index[a])
    return GadgetGraph(m=m, vertices=vertices, index=index, nbrs=nbrs, blocks=blocks)


def from_edges(edge_list, n=None) -> GadgetGraph:
    """Wrap an arbitrary small graph (integer vertices) for the generic checks."""
    verts = sorted({u for e in edge_list for u in e} | set(range(n or 0)))
    vids = [VertexId(BlockId("X", u), str(u)) for u in verts]
    index = {vid: k for k, vid in enumerate(vids)}
    pos = {u: k for k, u in enumerate(verts)}
    nbrs = [set() for _ in verts]
    for a, b in edge_list:
        nbrs[pos[a]].add(pos[b])
        nbrs[pos[b]].add(pos[a])
    return GadgetGraph(m=0, vertices=vids, index=index, nbrs=nbrs)


def pentagon() -> GadgetGraph:
    return from_edges([(t, (t + 1) % 5) for t in range(5)])


def complete_graph(n: int) -> GadgetGraph:
    return from_edges(list(combinations(range(n), 2)), n)


# ---------------------------------------------------------------- cliques

def _triangle_free(nbrs, allowed) -> bool:
    for u in allowed:
        for w in nbrs[u] & allowed:
            if w > u and nbrs[u] & nbrs[w] & allowed:
                return False
    return True


def check_k4_free(G: GadgetGraph) -> bool:
    """Structural route: G - v and the neighbourhood of v are both triangle-free.

    Only valid when every K4 would have to pass through the special vertex or
    lie in G - v, which is the case for any graph with a designated hub.
    Graphs without the special vertex fall back to the brute-force search.
    """
    if SPECIAL not in G.index:
        return not has_k4(G)
    v = G.v
    rest = set(range(G.vertex_count)) - {v}
    return _triangle_free(G.nbrs, rest) and _triangle_free(G.nbrs, set(G.nbrs[v]))


def has_k4(G: GadgetGraph) -> bool:
    """Generic 4-clique search: some edge whose common neighbourhood has an edge."""
    for u, w in G.edges():
        common = G.nbrs[u] & G.nbrs[w]
        for x in common:
            if G.nbrs[x] & common:
                return True
    return False


# ---------------------------------------------------------------- colouring

@dataclass
class ColoringSearch:
    colors: int
    coloring: Optional[list]
    nodes: int

    @property
    def satisfiable(self) -> bool:
        return self.coloring is not None


@dataclass
class ChromaticResult:
    chi: int
    coloring: list
    searches: list

    @property
    def unsat_certificate(self) -> Optional[ColoringSearch]:
        """The exhausted search for chi - 1 colours."""
        for s in self.searches:
            if s.colors == self.chi - 1:
                return s
        return None


def color_search(G: GadgetGraph, colors: int, node_budget: int = DEFAULT_NODE_BUDGET,
                 fix=None, probing: bool = True) -> ColoringSearch:
    """Backtracking with forward checking and singleton propagation.

    Before branching, every remaining (vertex, colour) pair is probed and
    discarded if propagation alone refutes it.  Vertices are chosen
    most-constrained first (smallest domain, then largest degree).  ``fix`` pins one vertex to colour 0, which is sound
    because colours are interchangeable.
    """
    n = G.vertex_count
    nbrs = [list(s) for s in G.nbrs]
    full = (1 << colors) - 1
    domains = [full] * n
    assignment = [-1] * n
    nodes = 0

    def assign(doms, assign_, u, c):
        """Assign and propagate; returns False on a wipe-out."""
        stack = [(u, c)]
        while stack:
            u, c = stack.pop()
            if assign_[u] != -1:
                if assign_[u] != c:
                    return False
                continue
            if not doms[u] >> c & 1:
                return False
            assign_[u] = c
            doms[u] = 1 << c
            bit = 1 << c
            for w in nbrs[u]:
                if doms[w] & bit:
                    if assign_[w] != -1:
                        return False
                    doms[w] &= ~bit
                    if doms[w] == 0:
                        return False
                    if doms[w] & (doms[w] - 1) == 0:
                        stack.append((w, doms[w].bit_length() - 1))
        return True

    def probe(doms, assign_):
        """Remove refuted values until nothing changes; False on a wipe-out."""
        changed = True
        while changed:
            changed = False
            for u in range(n):
                if assign_[u] != -1:
                    continue
                for c in range(colors):
                    if doms[u] >> c & 1 and not assign(list(doms), list(assign_), u, c):
                        doms[u] &= ~(1 << c)
                        changed = True
                        if doms[u] == 0:
                            return False
                        if doms[u] & (doms[u] - 1) == 0:
                            if not assign(doms, assign_, u, doms[u].bit_length() - 1):
                                return False
        return True

    def recurse(doms, assign_):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"{colors}-colouring search exceeded {node_budget} nodes",
                                 partial={"colors": colors, "nodes": nodes})
        if probing and not probe(doms, assign_):
            return None
        best, best_key = -1, None
        for u in range(n):
            if assign_[u] == -1:
                key = (bin(doms[u]).count("1"), -len(nbrs[u]))
                if best_key is None or key < best_key:
                    best, best_key = u, key
        if best == -1:
            return list(assign_)
        d = doms[best]
        for c in range(colors):
            if d >> c & 1:
                doms2, assign2 = list(doms), list(assign_)
                if assign(doms2, assign2, best, c):
                    found = recurse(doms2, assign2)
                    if found is not None:
                        return found
        return None

    if n == 0:
        return ColoringSearch(colors, [], 0)
    if colors == 0:
        return ColoringSearch(colors, None, 1)
    if fix is None:
        fix = max(range(n), key=lambda u: len(nbrs[u]))
    if not assign(domains, assignment, fix, 0):
        return ColoringSearch(colors, None, 1)
    found = recurse(domains, assignment)
    return ColoringSearch(colors, found, nodes)


def is_proper_coloring(G: GadgetGraph, coloring) -> bool:
    if coloring is None or len(coloring) != G.vertex_count:
        return False
    return all(coloring[u] != coloring[w] for u, w in G.edges())


def chromatic_number(G: GadgetGraph, limit: int = 5, node_budget: int = DEFAULT_NODE_BUDGET,
                     probing: bool = True) -> ChromaticResult:
    searches = []
    for c in range(1, limit + 1):
        try:
            res = color_search(G, c, node_budget, probing=probing)
        except BudgetExceeded as exc:
            exc.partial = {"searches": searches, **(exc.partial or {})}
            raise
        searches.append(res)
        if res.satisfiable:
            if not is_proper_coloring(G, res.coloring):
                raise AssertionError("search returned an improper colouring")
            return ChromaticResult(chi=c, coloring=res.coloring, searches=searches)
    raise BudgetExceeded(f"no proper colouring with at most {limit} colours",
                         partial={"searches": searches})


def leaf_forcing_holds(G: GadgetGraph, leaf: BlockId) -> bool:
    """Every proper 3-colouring of v + one leaf pentagon gives the
    attachment vertex the colour of v (exhaustive over 3^6 assignments)."""
    local = [G.v] + G.block_vertices(leaf)
    attach = G.index[VertexId(leaf, leaf.x.upper())]
    pos = {u: k for k, u in enumerate(local)}
    local_edges = [(pos[u], pos[w]) for u in local for w in G.nbrs[u] if w in pos and u < w]
    seen = 0
    for cols in product(range(3), repeat=len(local)):
        if all(cols[a] != cols[b] for a, b in local_edges):
            seen += 1
            if cols[pos[attach]] != cols[0]:
                return False
    return seen > 0


def propagation_holds() -> dict:
    """Exhaustive check of the pentagon propagation rules with alpha = 0.

    ``through``: a, b, d, e avoid 0 forces c = 0.
    ``terminal``: b, c, d, e avoid 0 forces a = 0.
    """
    rim = [(t, (t + 1) % 5) for t in range(5)]
    a, b, c, d, e = range(5)
    through = terminal = True
    for cols in product(range(3), repeat=5):
        if any(cols[p] == cols[q] for p, q in rim):
            continue
        if all(cols[t] for t in (a, b, d, e)) and cols[c] != 0:
            through = False
        if all(cols[t] for t in (b, c, d, e)) and cols[a] != 0:
            terminal = False
    return {"through": through, "terminal": terminal}


# ---------------------------------------------------------------- degeneracy

@dataclass
class DegeneracyResult:
    degenerate: bool
    order: list
    core: list

    def __bool__(self):
        return self.degenerate


def is_2_degenerate(G: GadgetGraph, skip_edge=None, keep=None) -> DegeneracyResult:
    """Peel vertices of degree <= 2; the leftover (if any) is the stuck core.

    ``skip_edge`` deletes one edge (pair of indices) and ``keep`` restricts
    to an induced vertex subset, without copying the graph.
    """
    alive = set(range(G.vertex_count)) if keep is None else set(keep)
    skip = frozenset(skip_edge) if skip_edge is not None else None

    def live_nbrs(u):
        out = G.nbrs[u] & alive
        if skip is not None and u in skip:
            out = out - skip
        return out

    deg = {u: len(live_nbrs(u)) for u in alive}
    queue = [u for u in sorted(alive) if deg[u] <= 2]
    queued = set(queue)
    order = []
    while queue:
        u = queue.pop()
        for w in live_nbrs(u):
            deg[w] -= 1
            if deg[w] <= 2 and w not in queued:
                queued.add(w)
                queue.append(w)
        alive.discard(u)
        order.append(u)
    return DegeneracyResult(degenerate=not alive, order=order, core=sorted(alive))


def edge_deletions_degenerate(G: GadgetGraph) -> list:
    """(edge, verdict) for G - e over every edge e."""
    return [(e, is_2_degenerate(G, skip_edge=e).degenerate) for e in G.edges()]


def all_proper_subgraphs_3colorable(G: GadgetGraph) -> bool:
    """True when G - e is 2-degenerate for every edge e.

    Degeneracy passes to subgraphs, and a proper subgraph misses at least one
    edge or one vertex (and then all its edges), so this covers every proper
    subgraph of a graph without isolated vertices.
    """
    return all(ok for _, ok in edge_deletions_degenerate(G))


# ---------------------------------------------------------------- cycles

@dataclass(frozen=True)
class CycleRecord:
    vertices: tuple     # vertex indices in cyclic order
    chord_count: int

    def edge_set(self) -> frozenset:
        vs = self.vertices
        return frozenset(frozenset((vs[t], vs[(t + 1) % len(vs)])) for t in range(len(vs)))


def chord_count(G: GadgetGraph, cycle) -> int:
    members = set(cycle)
    induced = sum(len(G.nbrs[u] & members) for u in cycle) // 2
    return induced - len(cycle)


def _record(G, cycle):
    return CycleRecord(tuple(cycle), chord_count(G, cycle))


def enumerate_cycles(G: GadgetGraph, cap: int = DEFAULT_CYCLE_CAP):
    """All simple cycles of an undirected graph, each once.

    Vertices are ranked by decreasing degree.  Each cycle is found from its
    lowest-ranked vertex by depth-first extension through higher-ranked
    vertices only; the orientation is fixed by requiring the second vertex to
    rank below the last.
    """
    if cap <= 0:
        raise InvalidArgument("cap must be positive")
    order = sorted(range(G.vertex_count), key=lambda u: (-len(G.nbrs[u]), u))
    rank = {u: k for k, u in enumerate(order)}
    found = 0
    best = -1
    for root in order:
        r0 = rank[root]
        path = [root]
        on_path = {root}
        stack = [iter(sorted((w for w in G.nbrs[root] if rank[w] > r0), key=rank.get))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            path.append(nxt)
            on_path.add(nxt)
            if len(path) >= 3 and root in G.nbrs[nxt] and rank[path[1]] < rank[nxt]:
                found += 1
                rec = _record(G, path)
                best = max(best, rec.chord_count)
                if found > cap:
                    raise CapExceeded(f"more than {cap} cycles", partial=best)
                yield rec
            stack.append(iter(sorted((w for w in G.nbrs[nxt]
                                      if rank[w] > r0 and w not in on_path), key=rank.get)))


def _block_tree(G: GadgetGraph):
    """Adjacency between blocks of G - v, with the joining vertex pair."""
    links = {b: {} for b in G.blocks}
    v = G.v
    for u, w in G.edges():
        if v in (u, w):
            continue
        bu, bw = G.block_of(u), G.block_of(w)
        if bu != bw:
            links[bu][bw] = (u, w)
            links[bw][bu] = (w, u)
    return links


def _block_path(links, start, goal):
    parent = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for b in frontier:
            for c in links[b]:
                if c not in parent:
                    parent[c] = b
                    nxt.append(c)
        frontier = nxt
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    return path[::-1]


def _rim_routes(G: GadgetGraph, block: BlockId, entry: int, exit_: int):
    rim = G.block_vertices(block)
    if entry == exit_:
        return [[entry]]
    p, q = rim.index(entry), rim.index(exit_)
    forward = [rim[(p + t) % 5] for t in range((q - p) % 5 + 1)]
    backward = [rim[(p - t) % 5] for t in range((p - q) % 5 + 1)]
    return [forward, backward]


def enumerate_cycles_structured(G: GadgetGraph):
    """Cycles of G_m from its block structure.

    Cycles avoiding v are the pentagons.  A cycle through v is v plus a path in
    G - v between two neighbours of v; that path follows the unique block-tree
    path and takes one of the two rim routes inside each block it crosses.
    """
    for block in G.blocks:
        yield _record(G, G.block_vertices(block))
    v = G.v
    links = _block_tree(G)
    for u, w in combinations(sorted(G.nbrs[v]), 2):
        blocks = _block_path(links, G.block_of(u), G.block_of(w))
        segments = []
        entry = u
        for t, b in enumerate(blocks):
            if t + 1 < len(blocks):
                exit_, next_entry = links[b][blocks[t + 1]]
            else:
                exit_, next_entry = w, None
            segments.append(_rim_routes(G, b, entry, exit_))
            entry = next_entry
        for choice in product(*segments):
            path = [x for seg in choice for x in seg]
            yield _record(G, [v] + path)


def max_chords(G: GadgetGraph, cap: int = DEFAULT_CYCLE_CAP, structured: bool = False) -> dict:
    gen = enumerate_cycles_structured(G) if structured else enumerate_cycles(G, cap)
    count, best, witness = 0, -1, None
    for rec in gen:
        count += 1
        if rec.chord_count > best:
            best, witness = rec.chord_count, rec
    return {"max_chords": best, "cycles": count, "witness": witness}


def chord_breakdown(G: GadgetGraph, cycle) -> dict:
    """Attribute each chord of a cycle through v to a block.

    Chords at v go to the block of the other endpoint; any other chord must
    have both ends in one block.  Returns counts per block plus the visited
    spine range, so lemma-level bounds can be checked.
    """
    v = G.v
    n = len(cycle)
    pos = {u: k for k, u in enumerate(cycle)}
    counts = {}
    cross = 0
    for u in cycle:
        for w in G.nbrs[u]:
            if w not in pos or w < u:
                continue
            if (pos[u] - pos[w]) % n in (1, n - 1):
                continue
            if u == v or w == v:
                block = G.block_of(w if u == v else u)
            elif G.block_of(u) == G.block_of(w):
                block = G.block_of(u)
            else:
                cross += 1
                continue
            counts[block] = counts.get(block, 0) + 1
    spine = sorted({G.block_of(u).i for u in cycle if u != v and G.block_of(u).kind == "S"})
    return {"counts": counts, "cross": cross,
            "spine_range": (spine[0], spine[-1]) if spine else None}


def to_dot(G: GadgetGraph) -> str:
    lines = ["graph G {"]
    for u, w in G.edges():
        lines.append(f'  "{G.vertices[u].dot_name()}" -- "{G.vertices[w].dot_name()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
