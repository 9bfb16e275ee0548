"""
Determining number and metric dimension.

Every result is a bound pair. Lower bounds come from twin classes (any
determining or resolving set omits at most one vertex per class), from the
group order (a determining set S embeds Aut(Γ) into the product of the orbits
of its points) and, for resolving sets, from a packing of pairwise disjoint
pair-resolver sets. Upper bounds are certificate sets that pass the fixing or
resolving test. When the two meet, the value is exact without search;
otherwise an exhaustive ascending-size search closes the gap while the
candidate budget lasts.
"""

import itertools
import logging
from math import comb
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from app.aut_engine import AutGroup, AutomorphismSearch
from app.config import settings
from app.graph_core import Graph, JoinSpec, all_pairs_distances, twin_classes, twin_lower_bound
from app.models import DomainError, InvariantKind, InvariantRecord, SearchLimitError
from app.ring_core import ProductRing, RingModel, zero_divisors, zn_context
from app.zdg_build import ideal_cores, omega_partition, require_composite, require_field_product

logger = logging.getLogger(__name__)

PAIR_PACKING_LIMIT = 512


class InvariantResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: InvariantKind
    lower: int
    upper: int
    certificate: List[int]
    exact: bool
    method: str

    @model_validator(mode="after")
    def check_bounds(self) -> "InvariantResult":
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        if len(self.certificate) != self.upper:
            raise ValueError("certificate size must equal the upper bound")
        return self

    @property
    def value(self) -> Optional[int]:
        return self.upper if self.exact else None

    def to_record(self, graph: Graph) -> InvariantRecord:
        return InvariantRecord(
            kind=self.kind,
            lower=self.lower,
            upper=self.upper,
            exact=self.exact,
            method=self.method,
            certificate=[graph.label(v) for v in self.certificate],
        )


class MetricVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex: int
    reference: List[int]
    distances: List[int]


def _exact(kind: InvariantKind, certificate: Sequence[int], method: str) -> InvariantResult:
    return InvariantResult(kind=kind, lower=len(certificate), upper=len(certificate),
                           certificate=sorted(certificate), exact=True, method=method)


# ---------------------------------------------------------------------------
# Tests and bounds
# ---------------------------------------------------------------------------

def metric_vector(graph: Graph, v: int, reference: Sequence[int],
                  dist: Optional[np.ndarray] = None) -> MetricVector:
    graph.check_vertices([v, *reference])
    dist = all_pairs_distances(graph) if dist is None else dist
    return MetricVector(vertex=v, reference=list(reference),
                        distances=[int(dist[v, w]) for w in reference])


def _resolves(dist: np.ndarray, reference: Sequence[int]) -> bool:
    n = dist.shape[0]
    if not reference:
        return n <= 1
    rows = dist[:, list(reference)]
    return np.unique(rows, axis=0).shape[0] == n


def is_resolving_set(graph: Graph, reference: Sequence[int],
                     dist: Optional[np.ndarray] = None) -> bool:
    graph.check_vertices(reference)
    dist = all_pairs_distances(graph) if dist is None else dist
    return _resolves(dist, list(reference))


def twin_certificate(classes: Sequence[Sequence[int]]) -> List[int]:
    """All but the least vertex of every twin class."""
    return sorted(v for c in classes for v in c[1:])


def orbit_order_bound(group: AutGroup) -> int:
    """Least s with (largest orbit)^s >= |Aut|."""
    size = 0
    reach = 1
    while reach < group.order:
        reach *= group.max_orbit
        size += 1
    return size


def pair_packing_bound(dist: np.ndarray) -> int:
    """Greedy count of pairwise disjoint resolver sets R(x,y) = {z : d(z,x) != d(z,y)}.

    Every resolving set meets every R(x,y), so a disjoint family of size m
    forces at least m landmarks. Pairs are taken by (|R|, x, y).
    """
    n = dist.shape[0]
    keys: List[Tuple[int, int, int]] = []
    for x in range(n - 1):
        sizes = (dist[:, [x]] != dist[:, x + 1:]).sum(axis=0)
        keys.extend((int(s), x, x + 1 + j) for j, s in enumerate(sizes))
    keys.sort()
    used = np.zeros(n, dtype=bool)
    count = 0
    for _, x, y in keys:
        resolvers = dist[:, x] != dist[:, y]
        if not (resolvers & used).any():
            used |= resolvers
            count += 1
            if used.all():
                break
    return count


def greedy_resolving_set(dist: np.ndarray) -> List[int]:
    """Repeatedly add the landmark leaving the fewest unseparated pairs."""
    n = dist.shape[0]
    classes = np.zeros(n, dtype=np.int64)
    chosen: List[int] = []
    while n and int(classes.max()) + 1 < n:
        best = None
        for z in range(n):
            if z in chosen:
                continue
            split = np.unique(np.column_stack([classes, dist[:, z]]), axis=0,
                              return_inverse=True)[1].reshape(-1)
            sizes = np.bincount(split)
            remaining = int((sizes * (sizes - 1) // 2).sum())
            if best is None or remaining < best[0]:
                best = (remaining, z, split)
        _, z, classes = best
        chosen.append(z)
    return sorted(chosen)


def greedy_fixing_set(search: AutomorphismSearch) -> List[int]:
    """Individualize the vertex whose refinement leaves the most cells."""
    chosen: List[int] = []
    colors = search.initial()
    while search.has_nontrivial_fixing(chosen):
        best = None
        for v in range(search.n):
            if v in chosen or np.count_nonzero(colors == colors[v]) == 1:
                continue
            split = search.individualize(colors, v)
            cells = int(split.max()) + 1
            if best is None or cells > best[0]:
                best = (cells, v, split)
        _, v, colors = best
        chosen.append(v)
    return sorted(chosen)


def minimized_orbit_set(search: AutomorphismSearch, group: AutGroup) -> List[int]:
    """All but one vertex per orbit, then drop every vertex that is not needed."""
    current = [v for orbit in group.orbits for v in orbit[1:]]
    for v in sorted(current):
        trial = [u for u in current if u != v]
        if not search.has_nontrivial_fixing(trial):
            current = trial
    return sorted(current)


def _twin_feasible(subset: Sequence[int], classes: Sequence[Sequence[int]]) -> bool:
    chosen = set(subset)
    return all(sum(1 for v in c if v not in chosen) <= 1 for c in classes)


def _ascending_search(n: int, sizes: range, accept: Callable[[Sequence[int]], bool],
                      classes: Optional[Sequence[Sequence[int]]], budget: int
                      ) -> Tuple[Optional[Tuple[int, ...]], bool]:
    """First accepted subset in (size, lexicographic) order.

    Returns (subset or None, completed). Each size is attempted only if its
    full candidate count fits in the remaining budget.
    """
    for size in sizes:
        count = comb(n, size)
        if count > budget:
            logger.info(f"Exhaustive search stopped at size {size}: {count} candidates exceed budget {budget}")
            return None, False
        budget -= count
        for subset in itertools.combinations(range(n), size):
            if classes is not None and not _twin_feasible(subset, classes):
                continue
            if accept(subset):
                return subset, True
    return None, True


# ---------------------------------------------------------------------------
# Determining number
# ---------------------------------------------------------------------------

def determining_number(graph: Graph, exhaustive_limit: Optional[int] = None,
                       certificates: Sequence[Sequence[int]] = ()) -> InvariantResult:
    """Det(Γ) as a certified bound pair; `certificates` are extra candidate sets."""
    limit = settings.EXHAUSTIVE_LIMIT if exhaustive_limit is None else exhaustive_limit
    kind = InvariantKind.DET
    n = graph.vertex_count
    if n <= 1:
        return _exact(kind, [], "single-vertex")

    search = AutomorphismSearch(graph)
    classes = twin_classes(graph)
    lower = twin_lower_bound(classes)
    best: Optional[List[int]] = None
    method = ""

    def offer(candidate: Sequence[int], name: str) -> None:
        nonlocal best, method
        candidate = graph.check_vertices(candidate)
        if best is not None and len(candidate) >= len(best):
            return
        if not search.has_nontrivial_fixing(candidate):
            best, method = candidate, name

    for cert in certificates:
        offer(cert, "certificate")
    offer(twin_certificate(classes), "twin-certificate")

    if best is None or len(best) > lower:
        group = search.group()
        lower = max(lower, orbit_order_bound(group))
        if best is None or len(best) > lower:
            offer(greedy_fixing_set(search), "greedy-refinement")
        if best is None or len(best) > lower:
            offer(minimized_orbit_set(search, group), "orbit-union")

    if len(best) == lower:
        return _exact(kind, best, f"bounds+{method}")

    found, completed = _ascending_search(
        n, range(lower, len(best)), lambda s: not search.has_nontrivial_fixing(s), classes, limit)
    if found is not None:
        return _exact(kind, list(found), "exhaustive")
    if completed:
        return _exact(kind, best, f"exhaustive+{method}")
    logger.warning(f"Det of {graph!r} left open: {lower} <= Det <= {len(best)}")
    return InvariantResult(kind=kind, lower=lower, upper=len(best), certificate=best,
                           exact=False, method=f"bounds+{method}")


def exhaustive_determining_number(graph: Graph, exhaustive_limit: Optional[int] = None) -> InvariantResult:
    """Oracle: the first fixing set in (size, lexicographic) order, no bounds used."""
    limit = settings.EXHAUSTIVE_LIMIT if exhaustive_limit is None else exhaustive_limit
    n = graph.vertex_count
    if n <= 1:
        return _exact(InvariantKind.DET, [], "exhaustive")
    search = AutomorphismSearch(graph)
    found, _ = _ascending_search(n, range(0, n + 1), lambda s: not search.has_nontrivial_fixing(s),
                                 None, limit)
    if found is None:
        raise SearchLimitError(f"exhaustive Det search on {graph!r} exceeded {limit} candidates")
    return _exact(InvariantKind.DET, list(found), "exhaustive")


# ---------------------------------------------------------------------------
# Metric dimension
# ---------------------------------------------------------------------------

def metric_dimension(graph: Graph, exhaustive_limit: Optional[int] = None,
                     certificates: Sequence[Sequence[int]] = ()) -> InvariantResult:
    """dim_M(Γ) as a certified bound pair; INF distances are ordinary coordinates."""
    limit = settings.EXHAUSTIVE_LIMIT if exhaustive_limit is None else exhaustive_limit
    kind = InvariantKind.METRIC_DIM
    n = graph.vertex_count
    if n <= 1:
        return _exact(kind, [], "single-vertex")

    dist = all_pairs_distances(graph)
    classes = twin_classes(graph)
    lower = twin_lower_bound(classes)
    if n <= PAIR_PACKING_LIMIT:
        lower = max(lower, pair_packing_bound(dist))
    best: Optional[List[int]] = None
    method = ""

    def offer(candidate: Sequence[int], name: str) -> None:
        nonlocal best, method
        candidate = graph.check_vertices(candidate)
        if best is not None and len(candidate) >= len(best):
            return
        if _resolves(dist, candidate):
            best, method = candidate, name

    for cert in certificates:
        offer(cert, "certificate")
    offer(twin_certificate(classes), "twin-certificate")
    if best is None or len(best) > lower:
        offer(greedy_resolving_set(dist), "greedy-cover")

    if len(best) == lower:
        return _exact(kind, best, f"bounds+{method}")

    found, completed = _ascending_search(
        n, range(lower, len(best)), lambda s: _resolves(dist, s), classes, limit)
    if found is not None:
        return _exact(kind, list(found), "exhaustive")
    if completed:
        return _exact(kind, best, f"exhaustive+{method}")
    logger.warning(f"dim_M of {graph!r} left open: {lower} <= dim_M <= {len(best)}")
    return InvariantResult(kind=kind, lower=lower, upper=len(best), certificate=best,
                           exact=False, method=f"bounds+{method}")


def exhaustive_metric_dimension(graph: Graph, exhaustive_limit: Optional[int] = None) -> InvariantResult:
    """Oracle: the first resolving set in (size, lexicographic) order, no bounds used."""
    limit = settings.EXHAUSTIVE_LIMIT if exhaustive_limit is None else exhaustive_limit
    n = graph.vertex_count
    dist = all_pairs_distances(graph)
    found, _ = _ascending_search(n, range(0, n + 1), lambda s: _resolves(dist, s), None, limit)
    if found is None:
        raise SearchLimitError(f"exhaustive dim_M search on {graph!r} exceeded {limit} candidates")
    return _exact(InvariantKind.METRIC_DIM, list(found), "exhaustive")


def is_minimum(graph: Graph, kind: InvariantKind, size: int,
               exhaustive_limit: Optional[int] = None) -> bool:
    """True iff no vertex set of `size - 1` is fixing (Det) or resolving (dim_M).

    Supersets of fixing and of resolving sets keep the property, so one size
    below is enough to rule out every smaller set.
    """
    limit = settings.EXHAUSTIVE_LIMIT if exhaustive_limit is None else exhaustive_limit
    if size <= 0:
        return True
    n = graph.vertex_count
    if comb(n, size - 1) > limit:
        raise SearchLimitError(f"C({n}, {size - 1}) candidates exceed the budget {limit}")
    subsets = itertools.combinations(range(n), size - 1)
    if kind == InvariantKind.DET:
        search = AutomorphismSearch(graph)
        return all(search.has_nontrivial_fixing(s) for s in subsets)
    dist = all_pairs_distances(graph)
    return not any(_resolves(dist, s) for s in subsets)


# ---------------------------------------------------------------------------
# Closed forms and canonical sets (ring element indices)
# ---------------------------------------------------------------------------

def det_dim_zn(n: int) -> int:
    """n - φ(n) - τ(n) - 1, the shared value of Det and dim_M of Γ(Z_n)."""
    require_composite(n)
    ctx = zn_context(n)
    return n - ctx.phi - ctx.tau - 1


def zn_canonical_set(n: int) -> List[int]:
    omega = omega_partition(n)
    return sorted(x for members in omega.classes.values() for x in members[1:])


def _require_non_boolean(ring: RingModel) -> ProductRing:
    ring = require_field_product(ring)
    if all(c.order == 2 for c in ring.components):
        raise DomainError(f"{ring.spec()} is Boolean; its formula does not apply")
    return ring


def det_dim_semisimple(ring: RingModel) -> int:
    """|Z(R)| - 2^k + 2 for a non-Boolean product of k >= 2 fields."""
    ring = _require_non_boolean(ring)
    return len(zero_divisors(ring)) - 2 ** ring.width + 2


def semisimple_canonical_set(ring: RingModel) -> List[int]:
    _require_non_boolean(ring)
    return sorted(x for core in ideal_cores(ring) for x in core.core[1:])


def boolean_element(n: int, zero_set: Sequence[int]) -> int:
    """Index in Z_2^n of the vector vanishing exactly on `zero_set` (1-based)."""
    zeros = set(zero_set)
    return sum(1 << (n - i) for i in range(1, n + 1) if i not in zeros)


def boolean_canonical_set(n: int, closing: bool = True) -> List[int]:
    """Vectors u_i vanishing on {2i-1, 2i, 2i+1}, i = 1..floor(n/2).

    For even n the last triple wraps to coordinate 1. For odd n the literal
    triples leave coordinates 1 and 2 with the same pattern, so `closing`
    appends the vector vanishing on {n, 1}.
    """
    if n < 5:
        raise DomainError(f"the triple construction needs n >= 5, got {n}")
    triples = [[2 * i - 1, 2 * i, (2 * i) % n + 1] for i in range(1, n // 2 + 1)]
    if n % 2 and closing:
        triples.append([n, 1])
    return sorted(boolean_element(n, t) for t in triples)


def boolean_separating_set(n: int) -> List[int]:
    """ceil(log2 n) vectors whose zero-sets give every coordinate a distinct code."""
    if n < 2:
        raise DomainError(f"Z_2^n has zero-divisors only for n >= 2, got {n}")
    width = (n - 1).bit_length()
    zero_sets = [[i for i in range(1, n + 1) if (i - 1) >> bit & 1] for bit in range(width)]
    return sorted(boolean_element(n, z) for z in zero_sets)


# ---------------------------------------------------------------------------
# Join composition
# ---------------------------------------------------------------------------

def join_det_distinct_degrees(part_sizes: Sequence[int]) -> int:
    if not part_sizes:
        raise DomainError("at least one part is required")
    if any(s < 1 for s in part_sizes):
        raise DomainError(f"part sizes must be positive, got {list(part_sizes)}")
    return sum(part_sizes) - len(part_sizes)


def join_det_vertex_transitive(part_dets: Sequence[int]) -> int:
    if not part_dets:
        raise DomainError("at least one part is required")
    return sum(part_dets)


def _is_complete_or_empty(graph: Graph) -> bool:
    m = graph.vertex_count
    return graph.edge_count in (0, m * (m - 1) // 2)


def distinct_degree_hypothesis(js: JoinSpec, join: Graph) -> bool:
    """Parts complete or empty, and no degree shared by vertices of different blocks."""
    if not all(_is_complete_or_empty(p) for p in js.parts):
        return False
    degrees = join.degrees()
    block_degrees = []
    for offset, size in zip(js.offsets, js.part_sizes):
        block_degrees.append(set(degrees[offset:offset + size]))
    for i, a in enumerate(block_degrees):
        for b in block_degrees[i + 1:]:
            if a & b:
                return False
    return True


def blocks_are_orbits(js: JoinSpec, group: AutGroup) -> bool:
    """Each block of the join is exactly one orbit of its automorphism group."""
    blocks = {tuple(range(offset, offset + size)) for offset, size in zip(js.offsets, js.part_sizes)}
    return blocks == set(group.orbits)
