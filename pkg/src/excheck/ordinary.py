"""Ordinary-line configurations modelled inside the cyclic group Z/7m.

A point set on the cubic is represented by its residues: residue ``t`` stands
for ``t*g`` where ``g`` generates a cyclic subgroup of order ``7m`` of the real
points.  Three points are collinear exactly when their residues sum to zero,
so every count here is exact integer arithmetic.  ``embedding`` supplies the
geometric cross-check.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import InvalidArgument, InvalidParameter

# multiples of the subgroup generator h = 7 making up the tail T_s, in order
TAIL_MULTIPLIERS = (1, 2, -3, 3, -4)

# residue classes mod 7 on each side of the bipartition
SIDE_U = frozenset({1, 2, 4})
SIDE_V = frozenset({3, 5, 6})


@dataclass(frozen=True)
class GroupPointSet:
    m: int
    s: int
    members: frozenset

    @property
    def order(self) -> int:
        return 7 * self.m

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def tail(self) -> tuple:
        """Residues of the added points (all divisible by 7), in T_s order."""
        return tuple(tail_residues(self.m, self.s))

    def __contains__(self, r) -> bool:
        return r in self.members

    def sorted_members(self) -> list:
        return sorted(self.members)


def tail_residues(m: int, s: int) -> list:
    order = 7 * m
    return [(7 * c) % order for c in TAIL_MULTIPLIERS[:s]]


def build_base_set(m: int) -> GroupPointSet:
    """All residues of Z/7m outside the subgroup H = 7Z/7m."""
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidParameter(f"coset size m must be a positive integer, got {m!r}")
    m = int(m)
    members = frozenset(r for r in range(7 * m) if r % 7)
    return GroupPointSet(m=m, s=0, members=members)


def build_adjusted_set(n: int) -> GroupPointSet:
    """Base set for m = n // 6 plus the first ``n mod 6`` tail points."""
    if n < 72:
        raise InvalidParameter(f"adjusted construction needs n >= 72, got {n}")
    m, s = divmod(n, 6)
    base = build_base_set(m)
    tail = tail_residues(m, s)
    if len(set(tail)) != s or 0 in tail:
        # unreachable for m >= 12
        raise InvalidParameter(f"tail residues collide for m={m}, s={s}")
    return GroupPointSet(m=m, s=s, members=base.members | frozenset(tail))


def third_point(order: int, x: int, y: int) -> int:
    return (-(x + y)) % order


def is_ordinary(A: GroupPointSet, x: int, y: int) -> bool:
    if x == y:
        raise InvalidArgument("an ordinary line needs two distinct points")
    if x not in A.members or y not in A.members:
        raise InvalidArgument(f"residues {x}, {y} must both lie in the set")
    z = third_point(A.order, x, y)
    return z == x or z == y or z not in A.members


@dataclass(frozen=True)
class OrdinaryLineGraph:
    vertices: tuple
    edges: frozenset
    order: int = 0

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for x, y in self.edges:
            adj[x].append(y)
            adj[y].append(x)
        for v in adj:
            adj[v].sort()
        return adj


def _ordinary_mask(A: GroupPointSet):
    pts = np.array(A.sorted_members(), dtype=np.int64)
    member = np.zeros(A.order, dtype=bool)
    member[pts] = True
    z = (-(pts[:, None] + pts[None, :])) % A.order
    ordinary = ~member[z] | (z == pts[:, None]) | (z == pts[None, :])
    return pts, np.triu(ordinary, k=1)


def ordinary_line_graph(A: GroupPointSet) -> OrdinaryLineGraph:
    pts, mask = _ordinary_mask(A)
    ii, jj = np.nonzero(mask)
    edges = frozenset(zip(pts[ii].tolist(), pts[jj].tolist()))
    return OrdinaryLineGraph(vertices=tuple(pts.tolist()), edges=edges, order=A.order)


def count_ordinary(A: GroupPointSet) -> int:
    """ord(A) without materialising the edge set."""
    return int(_ordinary_mask(A)[1].sum())


def opposite_coset_edges(A: GroupPointSet) -> int:
    """Ordinary pairs joining C_i and C_{-i}; equals 3m^2 - 3ms."""
    return sum(1 for x, y in ordinary_line_graph(A).edges
               if x % 7 and (x + y) % 7 == 0)


def tangent_pairs(A: GroupPointSet) -> int:
    """Unordered pairs {x, -2x} with both ends in A and x != -2x."""
    pairs = set()
    for x in A.members:
        y = (-2 * x) % A.order
        if y != x and y in A.members:
            pairs.add((min(x, y), max(x, y)))
    return len(pairs)


@dataclass
class BipartiteResult:
    bipartite: bool
    coloring: dict = field(default_factory=dict)
    odd_cycle: list = field(default_factory=list)

    def __bool__(self):
        return self.bipartite


def is_bipartite(G) -> BipartiteResult:
    """BFS 2-colouring.

    ``G`` may be an :class:`OrdinaryLineGraph` or a plain adjacency mapping.
    On failure the result carries an odd closed walk that is a simple cycle.
    """
    adj = G.adjacency() if isinstance(G, OrdinaryLineGraph) else G
    color, parent = {}, {}
    for root in sorted(adj):
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    return BipartiteResult(False, odd_cycle=_odd_cycle(parent, u, w))
    return BipartiteResult(True, coloring=color)


def _odd_cycle(parent, u, w):
    def path_to_root(x):
        out = [x]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    pu, pw = path_to_root(u), path_to_root(w)
    common = set(pu) & set(pw)
    lca = next(x for x in pu if x in common)
    left = pu[: pu.index(lca) + 1]
    right = pw[: pw.index(lca)]
    return left + right[::-1]


def find_clique(adj: dict, r: int):
    """Return some r-clique as a sorted list, or None."""
    nbrs = {v: set(ws) for v, ws in adj.items()}

    def extend(clique, candidates):
        if len(clique) == r:
            return clique
        for v in sorted(candidates):
            found = extend(clique + [v], {w for w in candidates & nbrs[v] if w > v})
            if found:
                return found
        return None

    return extend([], set(nbrs))


def clique_free(G, r: int) -> bool:
    if r < 3:
        raise InvalidArgument("clique order r must be at least 3")
    adj = G.adjacency() if isinstance(G, OrdinaryLineGraph) else G
    if is_bipartite(adj):
        return True
    return find_clique(adj, r) is None


def construction_bound(m: int, s: int) -> int:
    return 3 * m * m - 3 * m * s


def theorem_bound(n: int) -> Fraction:
    return Fraction(n * n, 12) - Fraction(10 * n, 3)


@dataclass(frozen=True)
class BoundRecord:
    n: int
    m: int
    s: int
    ord: int
    construction_bound: int
    lower_bound: Fraction
    bipartite: bool

    @property
    def passed(self) -> bool:
        return (self.bipartite and self.ord >= self.construction_bound
                and self.construction_bound >= self.lower_bound)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m, "s": self.s, "ord": self.ord,
            "construction_bound": self.construction_bound,
            "lower_bound": str(self.lower_bound),
            "bipartite": self.bipartite, "pass": self.passed,
        }


def verify_bound(n: int) -> BoundRecord:
    A = build_adjusted_set(n)
    G = ordinary_line_graph(A)
    return BoundRecord(
        n=n, m=A.m, s=A.s, ord=G.edge_count,
        construction_bound=construction_bound(A.m, A.s),
        lower_bound=theorem_bound(n),
        bipartite=bool(is_bipartite(G)),
    )


def tail_graph(m: int, s: int) -> OrdinaryLineGraph:
    """Ordinary-line graph induced on the tail points inside the full set."""
    A = build_adjusted_set(6 * m + s)
    tail = set(A.tail)
    G = ordinary_line_graph(A)
    edges = frozenset(e for e in G.edges if e[0] in tail and e[1] in tail)
    return OrdinaryLineGraph(vertices=tuple(sorted(tail)), edges=edges, order=A.order)


def residue_side_respected(G: OrdinaryLineGraph) -> bool:
    """Every edge avoiding H joins the {1,2,4} side to the {3,5,6} side."""
    for x, y in G.edges:
        if x % 7 == 0 or y % 7 == 0:
            continue
        if not ({x % 7, y % 7} & SIDE_U and {x % 7, y % 7} & SIDE_V):
            return False
    return True


def collinear_triples(A: GroupPointSet):
    """Unordered triples of distinct members summing to 0 mod 7m."""
    order = A.order
    pts = A.sorted_members()
    for x, y in combinations(pts, 2):
        z = third_point(order, x, y)
        if z > y and z in A.members:
            yield (x, y, z)
