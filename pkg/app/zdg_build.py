"""
Zero-divisor graphs and their relatives.

Builds Γ(R), the compressed graph Γ_E(R) and the annihilating-ideal graph
Γ_Ann(R), plus the divisor classes of Z_n and the zero-set masks of products
of fields that drive both generalized-join decompositions.

Vertex order is canonical everywhere: Γ(R) lists zero-divisors by element
index, ideals ⟨d⟩ of Z_n by ascending d, and ideals of a product of fields
by the integer value of their support bitmask (bit i-1 set when coordinate i
is a whole field).
"""

import bisect
import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from sympy import isprime

from app.graph_core import Graph, JoinSpec, standard_graph
from app.models import DomainError, GraphKind, OmegaNature, RingKind
from app.ring_core import (
    ProductRing,
    RingModel,
    ZnRing,
    annihilator,
    proper_divisors,
    zero_divisors,
)

logger = logging.getLogger(__name__)


class OmegaPartition(BaseModel):
    """Ω_d = {x : gcd(x, n) = d} for each proper divisor d, ascending."""
    model_config = ConfigDict(frozen=True)

    n: int
    classes: Dict[int, List[int]]

    def class_of(self, x: int) -> int:
        for d, members in self.classes.items():
            if x in members:
                return d
        raise DomainError(f"{x} is not a zero-divisor of Z_{self.n}")


class ThetaMask(BaseModel):
    """1-based coordinates where an element (or ideal) of a product ring is zero."""
    model_config = ConfigDict(frozen=True)

    subject: str
    mask: List[int]


class IdealCore(BaseModel):
    """An ideal of a product of fields and I' = {x in I : Θ_x = Θ_I}."""
    model_config = ConfigDict(frozen=True)

    label: str
    support: List[int]
    theta: List[int]
    core: List[int]


# ---------------------------------------------------------------------------
# Preconditions
# ---------------------------------------------------------------------------

def require_composite(n: int) -> None:
    if n < 4 or isprime(n):
        raise DomainError(f"n must be composite, got {n}")


def require_proper_divisor(n: int, d: int) -> None:
    if not (1 < d < n and n % d == 0):
        raise DomainError(f"{d} is not a proper divisor of {n}")


def require_field_product(ring: RingModel, min_width: int = 2) -> ProductRing:
    if not isinstance(ring, ProductRing) or not ring.is_field_product:
        raise DomainError(f"{ring.spec()} is not a product of finite fields")
    if ring.width < min_width:
        raise DomainError(f"{ring.spec()} needs at least {min_width} field factors")
    return ring


def vertex_ids(ring: RingModel, elements: Sequence[int]) -> List[int]:
    """Positions of zero-divisor elements among the vertices of Γ(R)."""
    zd = zero_divisors(ring)
    out = []
    for x in elements:
        pos = bisect.bisect_left(zd, x)
        if pos == len(zd) or zd[pos] != x:
            raise DomainError(f"element {x} is not a zero-divisor of {ring.spec()}")
        out.append(pos)
    return out


# ---------------------------------------------------------------------------
# Γ(R)
# ---------------------------------------------------------------------------

def _zero_product_mask(ring: RingModel, x: int, others: np.ndarray) -> np.ndarray:
    if isinstance(ring, ZnRing):
        return (x * others) % ring.n == 0
    return np.asarray(ring.mul_many(x, others.tolist())) == ring.zero


def zero_divisor_graph(ring: RingModel) -> Graph:
    """Γ(R): nonzero zero-divisors, x ~ y iff x != y and xy = 0."""
    zd = zero_divisors(ring)
    if not zd:
        raise DomainError(f"{ring.spec()} has no nonzero zero-divisors")
    labels = [ring.render(x) for x in zd]
    elements = np.asarray(zd, dtype=np.int64)

    if ring.has_table:
        matrix = ring.mul_table[np.ix_(elements, elements)] == ring.zero
        np.fill_diagonal(matrix, False)
        graph = Graph.from_matrix(matrix, labels)
    else:
        edges: List[Tuple[int, int]] = []
        for i, x in enumerate(zd):
            later = np.flatnonzero(_zero_product_mask(ring, x, elements[i + 1:]))
            edges.extend((i, i + 1 + int(j)) for j in later)
        graph = Graph(len(zd), edges, labels)
    logger.debug(f"Built Γ({ring.spec()}): {graph.vertex_count} vertices, {graph.edge_count} edges")
    return graph


# ---------------------------------------------------------------------------
# Z_n divisor classes
# ---------------------------------------------------------------------------

def omega_partition(n: int) -> OmegaPartition:
    require_composite(n)
    residues = np.arange(n, dtype=np.int64)
    gcds = np.gcd(residues, n)
    classes = {d: np.flatnonzero(gcds == d).tolist() for d in proper_divisors(n)}
    return OmegaPartition(n=n, classes=classes)


def omega_nature(n: int, d: int) -> OmegaNature:
    require_proper_divisor(n, d)
    return OmegaNature.CLIQUE if (d * d) % n == 0 else OmegaNature.INDEPENDENT


def zn_vertex_degree(n: int, d: int) -> int:
    """Degree of every vertex of Ω_d in Γ(Z_n)."""
    return d - 2 if omega_nature(n, d) == OmegaNature.CLIQUE else d - 1


# ---------------------------------------------------------------------------
# Γ_E(R) and Γ_Ann(R)
# ---------------------------------------------------------------------------

def compressed_graph(ring: RingModel) -> Tuple[Graph, Dict[int, int]]:
    """Γ_E(R) and the map from each zero-divisor to its class vertex.

    Classes are keyed by the annihilator member list itself and numbered in
    order of their least element.
    """
    zd = zero_divisors(ring)
    if not zd:
        raise DomainError(f"{ring.spec()} has no nonzero zero-divisors")
    class_index: Dict[Tuple[int, ...], int] = {}
    representatives: List[int] = []
    class_map: Dict[int, int] = {}
    for x in zd:
        key = tuple(annihilator(ring, x).members)
        if key not in class_index:
            class_index[key] = len(representatives)
            representatives.append(x)
        class_map[x] = class_index[key]

    edges = [(i, j)
             for i, x in enumerate(representatives)
             for j in range(i + 1, len(representatives))
             if ring.mul(x, representatives[j]) == ring.zero]
    labels = [f"[{ring.render(x)}]" for x in representatives]
    graph = Graph(len(representatives), edges, labels)
    logger.debug(f"Built Γ_E({ring.spec()}): {graph.vertex_count} classes from {len(zd)} zero-divisors")
    return graph, class_map


def _mask_ideals(ring: ProductRing) -> List[int]:
    """Support bitmasks of the proper nonzero ideals, ascending."""
    return list(range(1, 2 ** ring.width - 1))


def _mask_coordinates(mask: int, width: int) -> List[int]:
    return [i + 1 for i in range(width) if mask >> i & 1]


def _ideal_label(ring: ProductRing, support_mask: int) -> str:
    parts = [f"F{c.order}" if support_mask >> i & 1 else "0"
             for i, c in enumerate(ring.components)]
    return "(" + ",".join(parts) + ")"


def annihilating_ideal_graph(ring: RingModel) -> Graph:
    """Γ_Ann for Z_n (divisor lattice) or a product of fields (mask lattice)."""
    if isinstance(ring, ZnRing):
        n = ring.n
        require_composite(n)
        divs = proper_divisors(n)
        edges = [(i, j) for i, d in enumerate(divs) for j in range(i + 1, len(divs))
                 if (d * divs[j]) % n == 0]
        return Graph(len(divs), edges, [f"<{d}>" for d in divs])
    if ring.kind == RingKind.PRODUCT:
        ring = require_field_product(ring)
        masks = _mask_ideals(ring)
        edges = [(i, j) for i, a in enumerate(masks) for j in range(i + 1, len(masks))
                 if a & masks[j] == 0]
        return Graph(len(masks), edges, [_ideal_label(ring, m) for m in masks])
    raise DomainError(f"annihilating-ideal graph is not supported for {ring.spec()}")


# ---------------------------------------------------------------------------
# Θ masks and ideal cores
# ---------------------------------------------------------------------------

def theta_mask(ring: RingModel, x: int) -> ThetaMask:
    ring = require_field_product(ring, min_width=1)
    ring.check_element(x)
    zeros = [i + 1 for i, d in enumerate(ring.decompose(x)) if d == 0]
    if not zeros or len(zeros) == ring.width:
        raise DomainError(f"{ring.render(x)} is not a zero-divisor of {ring.spec()}")
    return ThetaMask(subject=ring.render(x), mask=zeros)


def ideal_cores(ring: RingModel) -> List[IdealCore]:
    """Cores I' of the proper nonzero ideals, in canonical ideal order."""
    ring = require_field_product(ring)
    by_support: Dict[int, List[int]] = {}
    for x in zero_divisors(ring):
        mask = sum(1 << (i - 1) for i in ring.support(x))
        by_support.setdefault(mask, []).append(x)
    cores = []
    full = 2 ** ring.width - 1
    for mask in _mask_ideals(ring):
        cores.append(IdealCore(
            label=_ideal_label(ring, mask),
            support=_mask_coordinates(mask, ring.width),
            theta=_mask_coordinates(full ^ mask, ring.width),
            core=by_support.get(mask, []),
        ))
    return cores


# ---------------------------------------------------------------------------
# Join decompositions
# ---------------------------------------------------------------------------

def _block_bijection(vertex_elements: Sequence[int], blocks: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Send each Γ(R) vertex to (block offset + rank of its element in the block)."""
    position = {}
    offset = 0
    for block in blocks:
        for rank, x in enumerate(block):
            position[x] = offset + rank
        offset += len(block)
    return tuple(position[x] for x in vertex_elements)


def zn_join_decomposition(n: int) -> JoinSpec:
    """Γ(Z_n) as Γ_Ann(Z_n)[Λ_d], Λ_d complete or empty on φ(n/d) vertices."""
    omega = omega_partition(n)
    base = annihilating_ideal_graph(ZnRing(n))
    parts = []
    for d, members in omega.classes.items():
        kind = GraphKind.COMPLETE if omega_nature(n, d) == OmegaNature.CLIQUE else GraphKind.EMPTY
        parts.append(standard_graph(kind, len(members)))
    bijection = _block_bijection(zero_divisors(ZnRing(n)), list(omega.classes.values()))
    return JoinSpec(base=base, parts=tuple(parts), bijection=bijection)


def semisimple_join_decomposition(ring: RingModel) -> JoinSpec:
    """Γ(R) as Γ_Ann(R)[Λ_I], Λ_I empty on |I'| vertices."""
    cores = ideal_cores(ring)
    base = annihilating_ideal_graph(ring)
    parts = tuple(standard_graph(GraphKind.EMPTY, len(c.core)) for c in cores)
    bijection = _block_bijection(zero_divisors(ring), [c.core for c in cores])
    return JoinSpec(base=base, parts=parts, bijection=bijection)


def omega_class_bijection(n: int) -> List[int]:
    """ψ(Ω_d) = ⟨d⟩ as a vertex map from Γ_E(Z_n) onto Γ_Ann(Z_n)."""
    graph, class_map = compressed_graph(ZnRing(n))
    divs = proper_divisors(n)
    image = [0] * graph.vertex_count
    for x, cls in class_map.items():
        image[cls] = divs.index(int(np.gcd(x, n)))
    return image
