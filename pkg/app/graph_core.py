"""
Simple undirected graphs and the constructions the theorems are stated in.

Graphs are immutable. Vertices are 0..n-1; adjacency is kept as sorted
neighbour tuples, and a dense boolean matrix is materialized on demand for
graphs up to DENSE_LIMIT vertices (refinement, twin and distance routines
are quadratic and run on the matrix).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from app.models import GraphError, GraphKind, GraphRecord, SearchLimitError

logger = logging.getLogger(__name__)

# Unreachable distance. Never used in arithmetic; resolving-set code treats it
# as one more coordinate value.
INF = int(np.iinfo(np.int32).max)

DENSE_LIMIT = 2 ** 12


class Graph:
    """Simple undirected graph with optional per-vertex labels."""

    def __init__(self, vertex_count: int, edges: Iterable[Tuple[int, int]] = (),
                 labels: Optional[Sequence[str]] = None):
        if vertex_count < 0:
            raise GraphError(f"vertex count must be nonnegative, got {vertex_count}")
        if labels is not None and len(labels) != vertex_count:
            raise GraphError(f"expected {vertex_count} labels, got {len(labels)}")
        neighbors: List[set] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            neighbors[u].add(v)
            neighbors[v].add(u)
        self._neighbors = tuple(tuple(sorted(s)) for s in neighbors)
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, labels: Optional[Sequence[str]] = None) -> "Graph":
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise GraphError(f"adjacency matrix must be square, got shape {matrix.shape}")
        if not np.array_equal(matrix, matrix.T):
            raise GraphError("adjacency matrix is not symmetric")
        if matrix.diagonal().any():
            raise GraphError("adjacency matrix has self-loops")
        us, vs = np.nonzero(np.triu(matrix, 1))
        graph = cls(matrix.shape[0], zip(us.tolist(), vs.tolist()), labels)
        if matrix.shape[0] <= DENSE_LIMIT:
            dense = matrix.copy()
            dense.setflags(write=False)
            graph.__dict__["matrix"] = dense
        return graph

    @property
    def vertex_count(self) -> int:
        return len(self._neighbors)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self._neighbors) // 2

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._neighbors[v]

    def degree(self, v: int) -> int:
        return len(self._neighbors[v])

    def degrees(self) -> List[int]:
        return [len(nb) for nb in self._neighbors]

    def adjacent(self, u: int, v: int) -> bool:
        if self.vertex_count <= DENSE_LIMIT:
            return bool(self.matrix[u, v])
        return v in self._neighbors[u]

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as (u, v) with u < v, lexicographically sorted."""
        return [(u, v) for u, nb in enumerate(self._neighbors) for v in nb if u < v]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def index_of(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise GraphError(f"no vertex labelled {label!r}")

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix (read-only)."""
        n = self.vertex_count
        if n > DENSE_LIMIT:
            raise SearchLimitError(f"{n} vertices exceed the dense-matrix limit {DENSE_LIMIT}")
        dense = np.zeros((n, n), dtype=bool)
        for u, nb in enumerate(self._neighbors):
            if nb:
                dense[u, list(nb)] = True
        dense.setflags(write=False)
        return dense

    def check_vertices(self, vertices: Iterable[int]) -> List[int]:
        out = sorted(set(vertices))
        for v in out:
            if not 0 <= v < self.vertex_count:
                raise GraphError(f"vertex {v} out of range for {self.vertex_count} vertices")
        return out

    def to_record(self) -> GraphRecord:
        return GraphRecord(
            vertices=self.vertex_count,
            labels=list(self.labels) if self.labels is not None else [],
            edges=[[u, v] for u, v in self.edges()],
        )

    def same_as(self, other: "Graph") -> bool:
        return self._neighbors == other._neighbors

    def __repr__(self) -> str:
        return f"<Graph n={self.vertex_count} m={self.edge_count}>"


def neighborhood(graph: Graph, v: int, closed: bool = False) -> frozenset:
    graph.check_vertices([v])
    nb = frozenset(graph.neighbors(v))
    return nb | {v} if closed else nb


def degree_sequence(graph: Graph) -> List[int]:
    return sorted(graph.degrees(), reverse=True)


def induced_subgraph(graph: Graph, vertices: Sequence[int]) -> Graph:
    """Subgraph on `vertices`, renumbered in the given order."""
    order = list(vertices)
    graph.check_vertices(order)
    position = {v: i for i, v in enumerate(order)}
    edges = [(position[u], position[v]) for u in order for v in graph.neighbors(u)
             if v in position and position[u] < position[v]]
    labels = [graph.label(v) for v in order] if graph.labels is not None else None
    return Graph(len(order), edges, labels)


def is_connected(graph: Graph) -> bool:
    n = graph.vertex_count
    if n <= 1:
        return True
    seen = {0}
    stack = [0]
    while stack:
        for v in graph.neighbors(stack.pop()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == n


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def standard_graph(kind: GraphKind, n: int) -> Graph:
    kind = GraphKind(kind)
    if n < 1:
        raise GraphError(f"{kind.value} graph needs n >= 1, got {n}")
    if kind == GraphKind.COMPLETE:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif kind == GraphKind.EMPTY:
        edges = []
    elif kind == GraphKind.PATH:
        edges = [(i, i + 1) for i in range(n - 1)]
    else:
        if n < 3:
            raise GraphError(f"cycle needs n >= 3, got {n}")
        edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return Graph(n, edges)


def boutin_gap_graph(k: int) -> Graph:
    """Path v_-k..v_k, hub u adjacent to every v_i, pendant w on v_0.

    Vertex ids: v_i is i + k, u is 2k + 1, w is 2k + 2. u and w are not adjacent.
    """
    if k < 1:
        raise GraphError(f"gap graph needs k >= 1, got {k}")
    path = 2 * k + 1
    hub, pendant = path, path + 1
    edges = [(i, i + 1) for i in range(path - 1)]
    edges += [(i, hub) for i in range(path)]
    edges.append((k, pendant))
    labels = [f"v{i - k}" for i in range(path)] + ["u", "w"]
    return Graph(path + 2, edges, labels)


def corona_graph(center: Graph, satellite: Graph) -> Graph:
    """center ⊙ satellite: one satellite copy per center vertex, joined to it."""
    n, m = center.vertex_count, satellite.vertex_count
    edges = list(center.edges())
    for c in range(n):
        base = n + c * m
        edges += [(base + u, base + v) for u, v in satellite.edges()]
        edges += [(c, base + j) for j in range(m)]
    return Graph(n + n * m, edges)


# ---------------------------------------------------------------------------
# Generalized join
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JoinSpec:
    """Base graph on k vertices and one part graph per base vertex."""
    base: Graph
    parts: Tuple[Graph, ...]
    # Optional explicit isomorphism onto the join (source vertex -> join vertex).
    bijection: Optional[Tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.parts) != self.base.vertex_count:
            raise GraphError(f"join needs {self.base.vertex_count} parts, got {len(self.parts)}")
        for i, part in enumerate(self.parts):
            if part.vertex_count < 1:
                raise GraphError(f"join part {i} is empty")

    @property
    def offsets(self) -> List[int]:
        out, total = [], 0
        for part in self.parts:
            out.append(total)
            total += part.vertex_count
        return out

    @property
    def part_sizes(self) -> List[int]:
        return [p.vertex_count for p in self.parts]


def generalized_join(js: JoinSpec) -> Graph:
    """Sabidussi join: (x,y)~(x',y') iff x~x' in the base, or x = x' and y~y' in the part."""
    block = np.repeat(np.arange(js.base.vertex_count), js.part_sizes)
    matrix = js.base.matrix[block][:, block].copy()
    for offset, part in zip(js.offsets, js.parts):
        size = part.vertex_count
        matrix[offset:offset + size, offset:offset + size] = part.matrix
    labels = None
    if js.base.labels is not None:
        labels = [f"{js.base.label(x)}/{y}" for x, part in enumerate(js.parts)
                  for y in range(part.vertex_count)]
    return Graph.from_matrix(matrix, labels)


def embed_part_automorphisms(js: JoinSpec, part_index: int, perm: Sequence[int]) -> List[int]:
    """Extend an automorphism of one part by the identity to a permutation of the join."""
    part = js.parts[part_index]
    if sorted(perm) != list(range(part.vertex_count)):
        raise GraphError("part permutation is not a bijection")
    total = sum(js.part_sizes)
    image = list(range(total))
    offset = js.offsets[part_index]
    for y, z in enumerate(perm):
        image[offset + y] = offset + z
    return image


# ---------------------------------------------------------------------------
# Distances, isomorphism maps and twins
# ---------------------------------------------------------------------------

def all_pairs_distances(graph: Graph) -> np.ndarray:
    """BFS distances from every vertex at once; INF for unreachable pairs."""
    n = graph.vertex_count
    adjacency = graph.matrix
    dist = np.full((n, n), INF, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    visited = np.eye(n, dtype=bool)
    frontier = visited.copy()
    level = 0
    while frontier.any():
        level += 1
        frontier = (frontier @ adjacency) & ~visited
        dist[frontier] = level
        visited |= frontier
    dist.setflags(write=False)
    return dist


def check_bijection(mapping: Sequence[int], n: int) -> List[int]:
    image = [int(x) for x in mapping]
    if len(image) != n or sorted(image) != list(range(n)):
        raise GraphError(f"vertex map is not a bijection onto {n} vertices")
    return image


def verify_isomorphism(g: Graph, h: Graph, mapping: Sequence[int]) -> bool:
    """True iff u~v in g exactly when mapping[u]~mapping[v] in h."""
    if g.vertex_count != h.vertex_count:
        raise GraphError(f"vertex counts differ: {g.vertex_count} vs {h.vertex_count}")
    image = check_bijection(mapping, g.vertex_count)
    if g.edge_count != h.edge_count:
        return False
    return bool(np.array_equal(g.matrix, h.matrix[np.ix_(image, image)]))


def are_twins(graph: Graph, u: int, v: int) -> bool:
    """N(u)\\{v} == N(v)\\{u}."""
    return set(graph.neighbors(u)) - {v} == set(graph.neighbors(v)) - {u}


def twin_classes(graph: Graph) -> List[List[int]]:
    """Maximal twin classes, each ascending, ordered by least member.

    False twins share an open neighbourhood, true twins a closed one; no
    vertex has both kinds of twin, so the two groupings never overlap.
    """
    n = graph.vertex_count
    if n == 0:
        return []
    open_rows = graph.matrix
    closed_rows = open_rows | np.eye(n, dtype=bool)
    grouped: Set[int] = set()
    groups: List[List[int]] = []
    for rows in (open_rows, closed_rows):
        buckets: Dict[bytes, List[int]] = {}
        for v in range(n):
            buckets.setdefault(np.packbits(rows[v]).tobytes(), []).append(v)
        for members in buckets.values():
            if len(members) > 1:
                groups.append(members)
                grouped.update(members)
    classes = [sorted(m) for m in groups]
    classes += [[v] for v in range(n) if v not in grouped]
    classes.sort(key=lambda c: c[0])
    return classes


def twin_lower_bound(classes: Sequence[Sequence[int]]) -> int:
    return sum(len(c) - 1 for c in classes)
