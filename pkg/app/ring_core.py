"""
Finite commutative ring models.

Every ring addresses its elements by a canonical index 0..order-1:

- Z_n: the residue itself.
- GF(p^k): the coefficient vector of the polynomial representative read in
  mixed radix, constant term least significant (x in GF(4) is index 2).
- Products: mixed radix over the component indices, first component most
  significant ((0,1) in F_2 x F_2 is index 1, (1,0) is index 2).

Multiplication tables are materialized for small rings and verified
exhaustively; larger rings multiply lazily.
"""

import itertools
import logging
import re
from functools import cached_property
from math import gcd, prod
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from sympy import divisors, factorint, totient
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_irreducible_p, gf_mul, gf_rem, gf_strip

from app.config import settings
from app.models import DomainError, RingKind, RingSpecError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Number theory
# ---------------------------------------------------------------------------

def euler_phi(n: int) -> int:
    """Euler totient, computed from the factorization of n."""
    return int(totient(n))


def proper_divisors(n: int) -> List[int]:
    """Divisors of n other than 1 and n, ascending."""
    return [d for d in divisors(n) if 1 < d < n]


def is_prime_power(q: int) -> Optional[Tuple[int, int]]:
    """Return (p, k) with q = p**k, or None."""
    if q < 2:
        return None
    factors = factorint(q)
    if len(factors) != 1:
        return None
    (p, k), = factors.items()
    return int(p), int(k)


class ZnContext(BaseModel):
    """Divisor data for Z_n: proper divisors, their count and phi(n)."""
    model_config = ConfigDict(frozen=True)

    n: int
    proper_divisors: List[int]
    tau: int
    phi: int


def zn_context(n: int) -> ZnContext:
    if n < 2:
        raise DomainError(f"zn_context needs n >= 2, got {n}")
    divs = proper_divisors(n)
    return ZnContext(n=n, proper_divisors=divs, tau=len(divs), phi=euler_phi(n))


# ---------------------------------------------------------------------------
# Ring models
# ---------------------------------------------------------------------------

class AnnihilatorSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    element: int
    members: List[int]


class RingModel:
    """A finite commutative ring with canonical element indices."""

    kind: RingKind
    order: int

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def render(self, x: int) -> str:
        raise NotImplementedError

    def is_zero_divisor(self, x: int) -> bool:
        """True for nonzero x with x*y = 0 for some nonzero y."""
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError

    def check_element(self, x: int) -> None:
        if not 0 <= x < self.order:
            raise DomainError(f"element index {x} out of range for {self.spec()} (order {self.order})")

    @property
    def has_table(self) -> bool:
        return self.order <= settings.VERIFY_TABLE_LIMIT

    @cached_property
    def mul_table(self) -> np.ndarray:
        if not self.has_table:
            raise DomainError(f"{self.spec()} is too large for a materialized table")
        table = self._build_mul_table()
        table.setflags(write=False)
        return table

    @cached_property
    def add_table(self) -> np.ndarray:
        if not self.has_table:
            raise DomainError(f"{self.spec()} is too large for a materialized table")
        table = self._build_add_table()
        table.setflags(write=False)
        return table

    def _build_mul_table(self) -> np.ndarray:
        n = self.order
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                table[a, b] = table[b, a] = self.mul(a, b)
        return table

    def _build_add_table(self) -> np.ndarray:
        n = self.order
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                table[a, b] = table[b, a] = self.add(a, b)
        return table

    def verify_tables(self) -> None:
        """Exhaustive ring-axiom check on the multiplication table."""
        table = self.mul_table
        n = self.order
        idx = np.arange(n)
        if not np.array_equal(table, table.T):
            raise RingSpecError(f"{self.spec()}: multiplication is not commutative")
        if not np.array_equal(table[self.one], idx):
            raise RingSpecError(f"{self.spec()}: index {self.one} is not a multiplicative identity")
        if np.any(table[self.zero] != self.zero):
            raise RingSpecError(f"{self.spec()}: zero is not absorbing")
        for a in range(n):
            # (a*b)*c == a*(b*c) for all b, c
            if not np.array_equal(table[table[a]], table[a][table]):
                raise RingSpecError(f"{self.spec()}: multiplication is not associative at {a}")
        logger.debug(f"Verified ring tables of {self.spec()} (order {n})")

    def mul_many(self, a: int, others: Sequence[int]) -> List[int]:
        if self.has_table:
            return self.mul_table[a, list(others)].tolist()
        return [self.mul(a, b) for b in others]

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec()} order={self.order}>"


class ZnRing(RingModel):
    kind = RingKind.ZN

    def __init__(self, n: int):
        if n < 2:
            raise RingSpecError(f"Z_n needs n >= 2, got {n}")
        self.n = n
        self.order = n

    @property
    def one(self) -> int:
        return 1

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.n

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.n

    def _build_mul_table(self) -> np.ndarray:
        r = np.arange(self.n, dtype=np.int64)
        return np.outer(r, r) % self.n

    def _build_add_table(self) -> np.ndarray:
        r = np.arange(self.n, dtype=np.int64)
        return (r[:, None] + r[None, :]) % self.n

    def render(self, x: int) -> str:
        return str(x)

    def is_zero_divisor(self, x: int) -> bool:
        return x != 0 and gcd(x, self.n) > 1

    def spec(self) -> str:
        return f"zn:{self.n}"


def least_irreducible(p: int, k: int) -> List[int]:
    """Least monic irreducible of degree k over GF(p), low-degree-first.

    Candidates are compared on (c_0, c_1, ..., c_{k-1}) lexicographically.
    """
    for tail in itertools.product(range(p), repeat=k):
        dense = [1] + list(reversed(tail))
        if gf_irreducible_p(dense, p, ZZ):
            return list(tail) + [1]
    raise RingSpecError(f"no irreducible polynomial of degree {k} over GF({p})")


class FiniteField(RingModel):
    """GF(p^k) as GF(p)[x] modulo the least monic irreducible of degree k."""

    kind = RingKind.FIELD

    def __init__(self, q: int):
        pk = is_prime_power(q)
        if pk is None:
            raise RingSpecError(f"field order {q} is not a prime power")
        if q > settings.MAX_FIELD_ORDER:
            raise RingSpecError(f"field order {q} exceeds the bound {settings.MAX_FIELD_ORDER}")
        self.p, self.k = pk
        self.q = q
        self.order = q
        self.modulus = least_irreducible(self.p, self.k) if self.k > 1 else [0, 1]
        self._dense_modulus = list(reversed(self.modulus))

    @property
    def one(self) -> int:
        return 1

    def coefficients(self, x: int) -> List[int]:
        """Low-degree-first coefficient vector of element x (length k)."""
        coeffs = []
        for _ in range(self.k):
            x, c = divmod(x, self.p)
            coeffs.append(c)
        return coeffs

    def from_coefficients(self, coeffs: Sequence[int]) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + c
        return x

    def _dense(self, x: int) -> List[int]:
        return gf_strip(list(reversed(self.coefficients(x))))

    def _from_dense(self, dense: Sequence[int]) -> int:
        coeffs = list(reversed(list(dense)))
        coeffs += [0] * (self.k - len(coeffs))
        return self.from_coefficients(coeffs)

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        product = gf_mul(self._dense(a), self._dense(b), self.p, ZZ)
        return self._from_dense(gf_rem(product, self._dense_modulus, self.p, ZZ))

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._from_dense(gf_add(self._dense(a), self._dense(b), self.p, ZZ))

    def render(self, x: int) -> str:
        if self.k == 1:
            return str(x)
        terms = []
        for degree, c in reversed(list(enumerate(self.coefficients(x)))):
            if c == 0:
                continue
            if degree == 0:
                terms.append(str(c))
                continue
            coeff = "" if c == 1 else str(c)
            power = "x" if degree == 1 else f"x^{degree}"
            terms.append(coeff + power)
        return "+".join(terms) if terms else "0"

    def is_zero_divisor(self, x: int) -> bool:
        return False

    def spec(self) -> str:
        return f"gf:{self.q}"

    def verify_tables(self) -> None:
        super().verify_tables()
        table = self.mul_table
        if self.order > 1 and not np.all((table[1:, 1:] == self.one).any(axis=1)):
            raise RingSpecError(f"{self.spec()}: some nonzero element has no inverse")


class ProductRing(RingModel):
    kind = RingKind.PRODUCT

    def __init__(self, components: Sequence[RingModel]):
        if not components:
            raise RingSpecError("a product ring needs at least one component")
        self.components = list(components)
        self.radices = [c.order for c in self.components]
        self.order = prod(self.radices)
        if self.order > settings.MAX_RING_ORDER:
            raise RingSpecError(f"ring order {self.order} exceeds the bound {settings.MAX_RING_ORDER}")
        # weight of component i in the mixed-radix index, first component most significant
        self.weights = [prod(self.radices[i + 1:]) for i in range(len(self.radices))]

    @property
    def width(self) -> int:
        return len(self.components)

    @property
    def is_field_product(self) -> bool:
        return all(c.kind == RingKind.FIELD for c in self.components)

    def decompose(self, x: int) -> Tuple[int, ...]:
        digits = []
        for w, r in zip(self.weights, self.radices):
            digits.append((x // w) % r)
        return tuple(digits)

    def compose(self, digits: Sequence[int]) -> int:
        return sum(d * w for d, w in zip(digits, self.weights))

    @property
    def one(self) -> int:
        return self.compose([c.one for c in self.components])

    def mul(self, a: int, b: int) -> int:
        da, db = self.decompose(a), self.decompose(b)
        return self.compose([c.mul(x, y) for c, x, y in zip(self.components, da, db)])

    def add(self, a: int, b: int) -> int:
        da, db = self.decompose(a), self.decompose(b)
        return self.compose([c.add(x, y) for c, x, y in zip(self.components, da, db)])

    def _digit_matrix(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        return np.stack([(idx // w) % r for w, r in zip(self.weights, self.radices)], axis=1)

    def _combine(self, tables: List[np.ndarray]) -> np.ndarray:
        digits = self._digit_matrix()
        out = np.zeros((self.order, self.order), dtype=np.int64)
        for i, (w, t) in enumerate(zip(self.weights, tables)):
            col = digits[:, i]
            out += w * t[col[:, None], col[None, :]]
        return out

    def _build_mul_table(self) -> np.ndarray:
        return self._combine([c.mul_table for c in self.components])

    def _build_add_table(self) -> np.ndarray:
        return self._combine([c.add_table for c in self.components])

    def render(self, x: int) -> str:
        parts = [c.render(d) for c, d in zip(self.components, self.decompose(x))]
        return "(" + ",".join(parts) + ")"

    def is_zero_divisor(self, x: int) -> bool:
        if x == 0:
            return False
        return any(d == 0 or c.is_zero_divisor(d)
                   for c, d in zip(self.components, self.decompose(x)))

    def support(self, x: int) -> frozenset:
        """1-based coordinates where x is nonzero."""
        return frozenset(i + 1 for i, d in enumerate(self.decompose(x)) if d != 0)

    def spec(self) -> str:
        items = []
        for c in self.components:
            if c.kind != RingKind.FIELD:
                return "prod:" + ",".join(c.spec() for c in self.components)
            items.append(f"f{c.order}")
        return "prod:" + ",".join(items)


# ---------------------------------------------------------------------------
# Construction and queries
# ---------------------------------------------------------------------------

_SPEC_RE = re.compile(r"(zn|gf|bool|prod):(.+)")
_ITEM_RE = re.compile(r"f(\d+)")


def _parse_int(text: str, spec: str) -> int:
    if not text.isdigit():
        raise RingSpecError(f"malformed ring spec {spec!r}: expected an integer, got {text!r}")
    return int(text)


def make_ring(spec: str) -> RingModel:
    """Build a ring from 'zn:N', 'gf:Q', 'bool:N' or 'prod:fQ1,fQ2,...'."""
    raw = spec
    match = _SPEC_RE.fullmatch(spec.strip().lower())
    if not match:
        raise RingSpecError(f"malformed ring spec {raw!r}")
    head, body = match.groups()

    if head == "zn":
        n = _parse_int(body, raw)
        if n > settings.MAX_RING_ORDER:
            raise RingSpecError(f"ring order {n} exceeds the bound {settings.MAX_RING_ORDER}")
        ring: RingModel = ZnRing(n)
    elif head == "gf":
        ring = FiniteField(_parse_int(body, raw))
    elif head == "bool":
        count = _parse_int(body, raw)
        if count < 1:
            raise RingSpecError(f"malformed ring spec {raw!r}: bool needs at least one factor")
        if 2 ** count > settings.MAX_RING_ORDER:
            raise RingSpecError(f"ring order 2^{count} exceeds the bound {settings.MAX_RING_ORDER}")
        ring = ProductRing([FiniteField(2) for _ in range(count)])
    else:
        items = body.split(",")
        fields = []
        for item in items:
            item_match = _ITEM_RE.fullmatch(item.strip())
            if not item_match:
                raise RingSpecError(f"malformed ring spec {raw!r}: bad item {item!r}")
            fields.append(FiniteField(int(item_match.group(1))))
        ring = ProductRing(fields)

    if ring.has_table:
        ring.verify_tables()
    logger.debug(f"Built ring {ring.spec()} of order {ring.order}")
    return ring


def zero_divisors(ring: RingModel) -> List[int]:
    """Nonzero zero-divisors in ascending canonical order."""
    return [x for x in range(1, ring.order) if ring.is_zero_divisor(x)]


def annihilator(ring: RingModel, x: int) -> AnnihilatorSet:
    ring.check_element(x)
    if ring.has_table:
        members = np.flatnonzero(ring.mul_table[x] == ring.zero).tolist()
    else:
        members = [w for w in range(ring.order) if ring.mul(x, w) == ring.zero]
    return AnnihilatorSet(element=x, members=members)
