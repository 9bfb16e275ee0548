"""
Graph automorphisms by equitable refinement and individualization.

A colouring is an int array over the vertices. Refinement splits cells by
(old colour, neighbour counts per colour) until stable; individualizing v
gives v a fresh colour directly after its old cell. The search walks the
leftmost path of the refinement tree and, bottom-up, asks for each level
which vertices of the target cell the current base point can be mapped to.
The product of those orbit lengths is the group order; the order reported
is recomputed from the generators by sympy's Schreier-Sims.
"""

import logging
from dataclasses import dataclass
from math import prod
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from app.config import settings
from app.graph_core import Graph
from app.models import AutGroupRecord, ConsistencyError, GraphError, SearchLimitError

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 10
ELEMENT_LIMIT = 40320


@dataclass(frozen=True)
class AutGroup:
    degree: int
    generators: Tuple[Tuple[int, ...], ...]
    order: int
    orbits: Tuple[Tuple[int, ...], ...]
    base: Tuple[int, ...] = ()

    @property
    def max_orbit(self) -> int:
        return max((len(o) for o in self.orbits), default=1)

    def to_record(self) -> AutGroupRecord:
        return AutGroupRecord(
            generators=[list(g) for g in self.generators],
            order=str(self.order),
            orbits=[list(o) for o in self.orbits],
        )


# ---------------------------------------------------------------------------
# Permutation helpers
# ---------------------------------------------------------------------------

def is_automorphism(graph: Graph, perm: Sequence[int]) -> bool:
    image = np.asarray(perm, dtype=np.int64)
    adjacency = graph.matrix
    return bool(np.array_equal(adjacency[np.ix_(image, image)], adjacency))


def orbit_partition(degree: int, generators: Iterable[Sequence[int]]) -> List[List[int]]:
    """Orbits of the group generated by `generators`, via union-find."""
    parent = list(range(degree))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gen in generators:
        for i, j in enumerate(gen):
            if i != j:
                a, b = find(i), find(int(j))
                if a < b:
                    parent[b] = a
                elif b < a:
                    parent[a] = b

    classes: dict = {}
    for v in range(degree):
        classes.setdefault(find(v), []).append(v)
    return sorted(classes.values(), key=lambda c: c[0])


def orbit_of(point: int, generators: Sequence[Sequence[int]]) -> set:
    seen = {point}
    frontier = [point]
    while frontier:
        x = frontier.pop()
        for gen in generators:
            y = int(gen[x])
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def greedy_base(orbits: Sequence[Sequence[int]]) -> List[int]:
    """One point per nontrivial orbit, largest orbits first."""
    ordered = sorted((o for o in orbits if len(o) > 1), key=lambda o: (-len(o), o[0]))
    return [o[0] for o in ordered]


def stabilizer_chain_order(degree: int, generators: Sequence[Sequence[int]]) -> int:
    """Exact group order from a Schreier-Sims base and strong generating set."""
    if not generators:
        return 1
    group = PermutationGroup([Permutation(list(g)) for g in generators])
    base, strong = group.schreier_sims_incremental(
        base=greedy_base(orbit_partition(degree, generators)))
    order = 1
    for i, point in enumerate(base):
        fixed = base[:i]
        level = [g.array_form for g in strong if all(g.array_form[b] == b for b in fixed)]
        order *= len(orbit_of(point, level))
    return order


# ---------------------------------------------------------------------------
# Refinement and search
# ---------------------------------------------------------------------------

def _relabel(colors: np.ndarray) -> np.ndarray:
    return np.unique(colors, return_inverse=True)[1].reshape(-1)


class AutomorphismSearch:
    """Refinement-tree search over one graph; reusable across queries."""

    def __init__(self, graph: Graph):
        n = graph.vertex_count
        if n > settings.MAX_AUT_VERTICES:
            raise SearchLimitError(
                f"{n} vertices exceed the automorphism search bound {settings.MAX_AUT_VERTICES}")
        self.graph = graph
        self.n = n
        self.adjacency = graph.matrix
        # float32 matmul is exact for counts below 2**24
        self.weights = self.adjacency.astype(np.float32)
        self.nodes = 0

    # -- colourings ---------------------------------------------------------

    def refine(self, colors: np.ndarray) -> np.ndarray:
        colors = _relabel(np.asarray(colors))
        n = self.n
        if n == 0:
            return colors
        while True:
            cells = int(colors.max()) + 1
            if cells == n:
                return colors
            onehot = np.zeros((n, cells), dtype=np.float32)
            onehot[np.arange(n), colors] = 1.0
            counts = (self.weights @ onehot).astype(np.int64)
            signature = np.column_stack([colors, counts])
            refined = np.unique(signature, axis=0, return_inverse=True)[1].reshape(-1)
            if int(refined.max()) + 1 == cells:
                return colors
            colors = refined

    def individualize(self, colors: np.ndarray, v: int) -> np.ndarray:
        split = 2 * colors
        split[v] += 1
        return self.refine(split)

    def initial(self, fixed: Sequence[int] = ()) -> np.ndarray:
        colors = np.zeros(self.n, dtype=np.int64)
        for rank, v in enumerate(fixed):
            colors[v] = rank + 1
        return self.refine(colors)

    @staticmethod
    def target_cell(colors: np.ndarray) -> Optional[int]:
        """First smallest non-singleton cell, or None when discrete."""
        sizes = np.bincount(colors)
        candidates = np.flatnonzero(sizes > 1)
        if candidates.size == 0:
            return None
        return int(candidates[np.argmin(sizes[candidates])])

    def _compatible(self, left: np.ndarray, right: np.ndarray) -> bool:
        sizes = np.bincount(left)
        if not np.array_equal(sizes, np.bincount(right, minlength=sizes.size)):
            return False
        cells = sizes.size
        if cells == self.n:
            return True
        onehot_l = np.zeros((self.n, cells), dtype=np.float32)
        onehot_l[np.arange(self.n), left] = 1.0
        onehot_r = np.zeros((self.n, cells), dtype=np.float32)
        onehot_r[np.arange(self.n), right] = 1.0
        quotient_l = onehot_l.T @ self.weights @ onehot_l
        quotient_r = onehot_r.T @ self.weights @ onehot_r
        return bool(np.array_equal(quotient_l, quotient_r))

    def _leaf(self, left: np.ndarray, right: np.ndarray) -> Optional[np.ndarray]:
        inverse = np.empty(self.n, dtype=np.int64)
        inverse[right] = np.arange(self.n)
        perm = inverse[left]
        if np.array_equal(self.adjacency[np.ix_(perm, perm)], self.adjacency):
            return perm
        return None

    def find_mapping(self, left: np.ndarray, right: np.ndarray) -> Optional[np.ndarray]:
        """An automorphism carrying colouring `left` onto `right`, if one exists."""
        if not self._compatible(left, right):
            return None
        # frame: [left child, right parent, right cell colour, candidates, next index]
        frames: List[list] = []
        node: Optional[Tuple[np.ndarray, np.ndarray]] = (left, right)
        while True:
            if node is not None:
                self.nodes += 1
                cur_left, cur_right = node
                cell = self.target_cell(cur_left)
                if cell is None:
                    perm = self._leaf(cur_left, cur_right)
                    if perm is not None:
                        return perm
                else:
                    v = int(np.flatnonzero(cur_left == cell)[0])
                    candidates = np.flatnonzero(cur_right == cell).tolist()
                    frames.append([self.individualize(cur_left, v), cur_right, candidates, 0])
                node = None
            if not frames:
                return None
            frame = frames[-1]
            child_left, parent_right, candidates, index = frame
            if index >= len(candidates):
                frames.pop()
                continue
            frame[3] = index + 1
            child_right = self.individualize(parent_right, candidates[index])
            if self._compatible(child_left, child_right):
                node = (child_left, child_right)

    # -- queries -------------------------------------------------------------

    def group(self) -> AutGroup:
        colors = self.initial()
        path = []
        while True:
            cell = self.target_cell(colors)
            if cell is None:
                break
            members = np.flatnonzero(colors == cell).tolist()
            child = self.individualize(colors, members[0])
            path.append((colors, members, child))
            colors = child

        generators: List[Tuple[int, ...]] = []
        lengths: List[int] = []
        for colors, members, child in reversed(path):
            v = members[0]
            orbit = {v}
            for w in members[1:]:
                if w in orbit:
                    continue
                perm = self.find_mapping(child, self.individualize(colors, w))
                if perm is not None:
                    generators.append(tuple(int(x) for x in perm))
                    orbit = orbit_of(v, generators)
            lengths.append(len(orbit))
        lengths.reverse()

        order = stabilizer_chain_order(self.n, generators)
        if order != prod(lengths):
            raise ConsistencyError(
                f"Schreier-Sims order {order} disagrees with search order {prod(lengths)} on {self.graph!r}"
            )
        orbits = orbit_partition(self.n, generators)
        logger.debug(f"Automorphism search on {self.graph!r}: {len(generators)} generators, "
                     f"order {order}, {self.nodes} nodes")
        return AutGroup(
            degree=self.n,
            generators=tuple(generators),
            order=order,
            orbits=tuple(tuple(o) for o in orbits),
            base=tuple(members[0] for _, members, _ in path),
        )

    def has_nontrivial_fixing(self, fixed: Iterable[int]) -> bool:
        """True iff a non-identity automorphism fixes every vertex of `fixed`."""
        colors = self.initial(self.graph.check_vertices(fixed))
        while True:
            cell = self.target_cell(colors)
            if cell is None:
                return False
            members = np.flatnonzero(colors == cell).tolist()
            child = self.individualize(colors, members[0])
            for w in members[1:]:
                if self.find_mapping(child, self.individualize(colors, w)) is not None:
                    return True
            # every automorphism fixing `fixed` also fixes members[0]
            colors = child


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def automorphism_group(graph: Graph) -> AutGroup:
    if graph.vertex_count == 0:
        return AutGroup(degree=0, generators=(), order=1, orbits=())
    return AutomorphismSearch(graph).group()


def orbits(group: AutGroup) -> List[List[int]]:
    return [list(o) for o in group.orbits]


def has_nontrivial_fixing_automorphism(graph: Graph, fixed: Iterable[int]) -> bool:
    if graph.vertex_count == 0:
        return False
    return AutomorphismSearch(graph).has_nontrivial_fixing(fixed)


def is_vertex_transitive(graph: Graph) -> bool:
    return len(automorphism_group(graph).orbits) <= 1


def group_elements(group: AutGroup, limit: int = ELEMENT_LIMIT) -> List[Tuple[int, ...]]:
    """Every element of a small group as an image tuple."""
    if group.order > limit:
        raise SearchLimitError(f"group of order {group.order} exceeds the element limit {limit}")
    if not group.generators:
        return [tuple(range(group.degree))]
    sympy_group = PermutationGroup([Permutation(list(g)) for g in group.generators])
    return sorted(tuple(p.array_form) for p in sympy_group.generate())


def enumerate_automorphisms(graph: Graph) -> List[Tuple[int, ...]]:
    """Brute-force oracle: all automorphisms of a graph on at most 10 vertices."""
    n = graph.vertex_count
    if n > BRUTE_FORCE_LIMIT:
        raise SearchLimitError(f"brute-force enumeration is limited to {BRUTE_FORCE_LIMIT} vertices")
    adjacency = graph.matrix
    degrees = graph.degrees()
    found: List[Tuple[int, ...]] = []
    image = [-1] * n
    used = [False] * n

    def extend(v: int) -> None:
        if v == n:
            found.append(tuple(image))
            return
        for w in range(n):
            if used[w] or degrees[w] != degrees[v]:
                continue
            if any(adjacency[u, v] != adjacency[image[u], w] for u in range(v)):
                continue
            image[v], used[w] = w, True
            extend(v + 1)
            image[v], used[w] = -1, False

    extend(0)
    return found


def is_determining_set_by_definition(graph: Graph, subset: Iterable[int],
                                     elements: Sequence[Sequence[int]]) -> bool:
    """Two automorphisms agreeing on `subset` are equal (restriction is injective)."""
    chosen = graph.check_vertices(subset)
    restrictions = {tuple(int(g[s]) for s in chosen) for g in elements}
    return len(restrictions) == len(elements)


def transposition(n: int, u: int, v: int) -> List[int]:
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"transposition ({u} {v}) out of range for {n} vertices")
    image = list(range(n))
    image[u], image[v] = v, u
    return image
