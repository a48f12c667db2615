"""Simple undirected graphs, their exact integer matrices, and the graph families used downstream.

Edges are stored as ``(u, v)`` pairs with ``u < v`` in lexicographic order. That order is
the edge index everywhere else in the package: incidence columns, line-graph vertices and the
edge-vertices of a Q-graph all follow it.
"""

from __future__ import annotations

import json
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .errors import InputError, PreconditionError

__all__ = [
    "Graph",
    "RegularityInfo",
    "QGraph",
    "FAMILIES",
    "from_edge_list",
    "from_json",
    "to_json",
    "generate",
    "parse_generator_spec",
    "antipode",
    "incidence",
    "adjacency",
    "signless_laplacian",
    "line_graph",
    "q_graph",
    "regularity",
    "is_connected",
    "is_isomorphic_bruteforce",
]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph in canonical form.

    Build instances with :func:`from_edge_list` or :func:`generate`; the constructor
    trusts its arguments.

    Attributes
    ----------
    n : int
        Number of vertices, labelled ``0..n-1``.
    edges : tuple of (int, int)
        Sorted edge list, each pair with ``u < v``.
    labels : tuple of str, optional
        Human-readable vertex names (bit strings for the hypercube families).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        a.setflags(write=False)
        return a

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.adjacency.sum(axis=1)
        d.setflags(write=False)
        return d

    def neighbors(self, u: int) -> list[int]:
        return np.flatnonzero(self.adjacency[u]).tolist()

    def vertex_index(self, label: str) -> int:
        """Index of the vertex whose label is ``label``."""
        if self.labels is None:
            raise InputError("graph carries no vertex labels")
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"no vertex labelled {label!r}") from None


@dataclass(frozen=True)
class RegularityInfo:
    is_regular: bool
    degree: int | None
    is_bipartite: bool
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None


@dataclass(frozen=True)
class QGraph:
    """A Q-graph together with the meaning of each of its vertices.

    ``roles[i]`` is ``("vertex", i)`` for the original vertices ``0..n-1`` and
    ``("edge", (u, v))`` for the edge-vertex sitting on base edge ``(u, v)``.
    """

    graph: Graph
    base: Graph
    roles: tuple[tuple[str, object], ...]

    def role_name(self, i: int) -> str:
        kind, what = self.roles[i]
        if kind == "vertex":
            return f"v{what}"
        u, v = what
        return f"e{u}-{v}"


def from_edge_list(n: int, pairs: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> Graph:
    """Canonical graph on ``n`` vertices from an iterable of vertex pairs.

    Raises
    ------
    InputError
        On out-of-range vertices, self-loops or repeated edges (in either orientation).
    """
    if int(n) != n or n < 0:
        raise InputError(f"vertex count must be a non-negative integer, got {n!r}")
    n = int(n)
    seen: set[tuple[int, int]] = set()
    for pair in pairs:
        if len(pair) != 2:
            raise InputError(f"edge must be a pair, got {pair!r}")
        u, v = (int(x) for x in pair)
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge {(u, v)} out of range for n={n}")
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InputError(f"duplicate edge {key}")
        seen.add(key)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise InputError("label count does not match vertex count")
    return Graph(n, tuple(sorted(seen)), labels)


def to_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges]}, separators=(",", ":"))


def from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
        n = data["n"]
        edges = data["edges"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"invalid graph JSON: {exc}") from None
    if not isinstance(n, int) or not isinstance(edges, list):
        raise InputError("graph JSON needs an integer 'n' and a list 'edges'")
    return from_edge_list(n, edges)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _bits(x: int, width: int) -> str:
    return format(x, f"0{width}b")


def _hypercube(d: int) -> Graph:
    size = 1 << d
    pairs = [(x, x ^ (1 << k)) for x in range(size) for k in range(d) if x < x ^ (1 << k)]
    return from_edge_list(size, pairs, [_bits(x, d) for x in range(size)])


def _cocktail(m: int) -> Graph:
    # K_{2m} minus the matching {2i, 2i+1}
    pairs = [(u, v) for u, v in combinations(range(2 * m), 2) if v != u + 1 or u % 2]
    return from_edge_list(2 * m, pairs)


def _halved_hypercube(d: int) -> Graph:
    width = 2 * d
    verts = [x for x in range(1 << width) if bin(x).count("1") % 2 == 0]
    index = {x: i for i, x in enumerate(verts)}
    pairs = [(index[x], index[y]) for x, y in combinations(verts, 2) if bin(x ^ y).count("1") == 2]
    return from_edge_list(len(verts), pairs, [_bits(x, width) for x in verts])


def _cycle(n: int) -> Graph:
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def _path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def _complete(n: int) -> Graph:
    return from_edge_list(n, combinations(range(n), 2))


def _petersen(_: int | None = None) -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(i + 5, (i + 2) % 5 + 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


# name -> (builder, minimum parameter); None means the family takes no parameter
FAMILIES = {
    "hypercube": (_hypercube, 1),
    "cocktail": (_cocktail, 2),
    "halved_hypercube": (_halved_hypercube, 1),
    "cycle": (_cycle, 3),
    "path": (_path, 2),
    "complete": (_complete, 2),
    "petersen": (_petersen, None),
}


def generate(family: str, parameter: int | None = None) -> Graph:
    """Build a member of a named graph family.

    ``hypercube(d)`` labels vertex ``x`` by the ``d``-bit string of ``x`` so that ``x`` and
    ``x ^ (2**d - 1)`` are antipodal. ``cocktail(m)`` removes the matching ``{2i, 2i+1}``
    from ``K_{2m}``. ``halved_hypercube(d)`` has the even-weight words of length ``2d`` as
    vertices (in increasing numeric order), adjacent at Hamming distance two.
    """
    try:
        builder, lower = FAMILIES[family]
    except KeyError:
        raise InputError(f"unknown graph family {family!r}; choose from {sorted(FAMILIES)}") from None
    if lower is None:
        return builder(parameter)
    if parameter is None or int(parameter) != parameter:
        raise InputError(f"family {family!r} needs an integer parameter")
    if parameter < lower:
        raise InputError(f"family {family!r} needs parameter >= {lower}, got {parameter}")
    return builder(int(parameter))


def parse_generator_spec(text: str) -> tuple[str, int | None]:
    """Split ``"family:param"`` (or a bare ``"family"``) into its parts."""
    family, sep, param = text.partition(":")
    if not sep:
        return family, None
    try:
        return family, int(param)
    except ValueError:
        raise InputError(f"generator parameter must be an integer, got {param!r}") from None


def antipode(family: str, parameter: int | None, u: int) -> int:
    """The vertex at maximum distance from ``u`` in the vertex-transitive families with a unique one."""
    if family == "hypercube":
        return u ^ ((1 << parameter) - 1)
    if family == "halved_hypercube":
        g = generate(family, parameter)
        word = int(g.labels[u], 2) ^ ((1 << (2 * parameter)) - 1)
        return g.vertex_index(_bits(word, 2 * parameter))
    if family == "cocktail":
        return u ^ 1
    if family == "cycle" and parameter % 2 == 0:
        return (u + parameter // 2) % parameter
    if family == "path":
        return parameter - 1 - u
    raise InputError(f"family {family!r} has no unique antipode")


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def incidence(g: Graph) -> np.ndarray:
    """Vertex-edge incidence matrix, shape ``(n, m)``, columns in canonical edge order."""
    r = np.zeros((g.n, g.m), dtype=np.int64)
    for j, (u, v) in enumerate(g.edges):
        r[u, j] = r[v, j] = 1
    return r


def adjacency(g: Graph) -> np.ndarray:
    return np.array(g.adjacency)


def signless_laplacian(g: Graph) -> np.ndarray:
    """``A + D`` as an exact integer matrix."""
    return g.adjacency + np.diag(g.degrees)


def line_graph(g: Graph) -> Graph:
    """Line graph; vertex ``j`` is edge ``j`` of ``g``."""
    by_vertex: list[list[int]] = [[] for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        by_vertex[u].append(j)
        by_vertex[v].append(j)
    pairs = {(a, b) for incident in by_vertex for a, b in combinations(incident, 2)}
    return from_edge_list(g.m, pairs)


def q_graph(g: Graph) -> QGraph:
    """Q-graph: one new vertex per edge, joined to both endpoints and to the new vertices of adjacent edges.

    Vertices ``0..n-1`` are the original vertices, ``n + j`` is the vertex on edge ``j``.
    The original vertices are pairwise non-adjacent in the result.
    """
    if g.m == 0:
        raise PreconditionError("Q-graph needs at least one edge")
    n = g.n
    pairs = [(u, n + j) for j, e in enumerate(g.edges) for u in e]
    pairs += [(n + a, n + b) for a, b in line_graph(g).edges]
    roles = tuple(("vertex", i) for i in range(n)) + tuple(("edge", e) for e in g.edges)
    return QGraph(from_edge_list(n + g.m, pairs), g, roles)


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def _two_colour(g: Graph) -> tuple[list[int], bool]:
    colour = [-1] * g.n
    ok = True
    for s in range(g.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    ok = False
    return colour, ok


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    queue = deque([0])
    while queue:
        for y in g.neighbors(queue.popleft()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == g.n


def regularity(g: Graph) -> RegularityInfo:
    degs = set(g.degrees.tolist())
    is_regular = len(degs) == 1
    colour, bipartite = _two_colour(g)
    parts = None
    if bipartite:
        parts = (
            tuple(i for i, c in enumerate(colour) if c == 0),
            tuple(i for i, c in enumerate(colour) if c == 1),
        )
    return RegularityInfo(is_regular, degs.pop() if is_regular else None, bipartite, parts)


def is_isomorphic_bruteforce(g: Graph, h: Graph) -> bool:
    """Exhaustive isomorphism test for tiny graphs (test helper; ``n <= 8``)."""
    from itertools import permutations

    if g.n != h.n or g.m != h.m:
        return False
    if g.n > 8:
        raise ValueError("brute-force isomorphism limited to n <= 8")
    target = set(h.edges)
    for perm in permutations(range(g.n)):
        if all((min(perm[u], perm[v]), max(perm[u], perm[v])) in target for u, v in g.edges):
            return True
    return False
