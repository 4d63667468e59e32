"""Products of Galois rings with pairwise coprime characteristics.

A product ring R = R_1 x ... x R_k is encoded on the index range
0 .. |R|-1 in mixed radix: the element with component indices
(i_1, ..., i_k) has global index sum(i_k * prod of earlier sizes),
component 1 least significant.  Every ideal of such a ring is mR for a
divisor m of the characteristic c, so ideals are referred to by their
divisor throughout; m = 1 is R itself and m = c is the zero ideal.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .galois import DEFAULT_MAX_RING_SIZE, GaloisRing, is_prime, make_galois_ring

GLOBAL_TABLE_LIMIT = 700


class EmptySetError(ValueError):
    """Raised for set operations that are undefined on the empty set."""


class CGRing:
    """Ordered product of Galois rings with distinct underlying primes."""

    def __init__(self, components: Iterable[GaloisRing]):
        self.components = tuple(components)
        if not self.components:
            raise ValueError("a product ring needs at least one component")
        primes = [c.p for c in self.components]
        if len(set(primes)) != len(primes):
            raise ValueError(f"component characteristics must be coprime, got primes {primes}")
        self.primes = tuple(primes)
        self.char = math.prod(c.char for c in self.components)
        self.size = math.prod(c.size for c in self.components)
        self.unit_count = math.prod(c.unit_count for c in self.components)
        self.one = self.from_parts([1] * len(self.components))
        self._units: tuple[int, ...] | None = None
        self._ideals: dict[int, frozenset[int]] = {}
        self._mul_table: list[list[int]] | None = None
        self._divisors: list[int] | None = None

    def __repr__(self) -> str:
        return f"CGRing({self.spec()})"

    def spec(self) -> str:
        return "x".join(c.spec() for c in self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CGRing):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    # -- encoding ---------------------------------------------------------

    def parts(self, a: int) -> tuple[int, ...]:
        out = []
        for comp in self.components:
            a, r = divmod(a, comp.size)
            out.append(r)
        return tuple(out)

    def from_parts(self, parts) -> int:
        a = 0
        for comp, i in reversed(list(zip(self.components, parts))):
            a = a * comp.size + i
        return a

    def elements(self) -> range:
        return range(self.size)

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        out = 0
        shift = 1
        for comp in self.components:
            a, ra = divmod(a, comp.size)
            b, rb = divmod(b, comp.size)
            out += comp.add(ra, rb) * shift
            shift *= comp.size
        return out

    def neg(self, a: int) -> int:
        return self.from_parts(
            comp.neg(i) for comp, i in zip(self.components, self.parts(a))
        )

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        out = 0
        shift = 1
        for comp in self.components:
            a, ra = divmod(a, comp.size)
            b, rb = divmod(b, comp.size)
            out += comp.mul(ra, rb) * shift
            shift *= comp.size
        return out

    def mul_table(self) -> list[list[int]]:
        """Dense multiplication table, built once; only for small rings."""
        if self._mul_table is None:
            if self.size > GLOBAL_TABLE_LIMIT:
                raise ValueError(f"ring of size {self.size} is too large to tabulate")
            for comp in self.components:
                comp.mul_table()
            mul = self.mul
            self._mul_table = [
                [mul(a, b) for b in self.elements()] for a in self.elements()
            ]
        return self._mul_table

    def scale(self, a: int, k: int) -> int:
        return self.from_parts(
            comp.scale(i, k) for comp, i in zip(self.components, self.parts(a))
        )

    def pow(self, a: int, k: int) -> int:
        out = self.one
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def is_unit(self, a: int) -> bool:
        return all(comp.is_unit(i) for comp, i in zip(self.components, self.parts(a)))

    def inv(self, a: int) -> int:
        return self.from_parts(
            comp.inv(i) for comp, i in zip(self.components, self.parts(a))
        )

    def units(self) -> tuple[int, ...]:
        if self._units is None:
            self._units = tuple(a for a in self.elements() if self.is_unit(a))
        return self._units

    # -- ideals -------------------------------------------------------------

    def divisors(self) -> list[int]:
        if self._divisors is None:
            c = self.char
            small = [m for m in range(1, math.isqrt(c) + 1) if c % m == 0]
            self._divisors = sorted(set(small + [c // m for m in small]))
        return self._divisors

    def valuations(self, m: int) -> tuple[int, ...]:
        """Per-component p-adic valuation vector of a divisor of c."""
        if self.char % m:
            raise ValueError(f"{m} does not divide the characteristic {self.char}")
        out = []
        for comp in self.components:
            v = 0
            while m % comp.p == 0:
                m //= comp.p
                v += 1
            out.append(v)
        return tuple(out)

    def divisor_from_valuations(self, vals) -> int:
        return math.prod(c.p**v for c, v in zip(self.components, vals))

    def ideal(self, m: int) -> frozenset[int]:
        """The ideal mR as a set of element indices."""
        if m not in self._ideals:
            vals = self.valuations(m)
            comp_sets = []
            for comp, v in zip(self.components, vals):
                q = comp.p**v
                comp_sets.append(
                    [a for a in comp.elements() if all(x % q == 0 for x in comp.coeffs(a))]
                )
            shift = 1
            acc = [0]
            for comp, cs in zip(self.components, comp_sets):
                acc = [base + i * shift for base in acc for i in cs]
                shift *= comp.size
            self._ideals[m] = frozenset(acc)
        return self._ideals[m]

    def ideal_size(self, m: int) -> int:
        vals = self.valuations(m)
        return math.prod(
            c.p ** ((c.n - v) * c.d) for c, v in zip(self.components, vals)
        )

    def maximal_divisors(self) -> list[int]:
        return sorted(self.primes)

    def minimal_divisors(self) -> list[int]:
        return sorted(self.char // p for p in self.primes)

    def socle_divisor(self) -> int:
        """Divisor of the largest ideal annihilated by every prime, prod of c_p / p."""
        return math.prod(c.char // c.p for c in self.components)

    def ideal_generators(self, m: int) -> list[int]:
        """Additive generators of mR, one per coefficient slot per component."""
        gens = []
        k = len(self.components)
        for ci, (comp, v) in enumerate(zip(self.components, self.valuations(m))):
            if v == comp.n:
                continue
            for j in range(comp.d):
                parts = [0] * k
                parts[ci] = comp.index(
                    tuple(comp.p**v if jj == j else 0 for jj in range(comp.d))
                )
                gens.append(self.from_parts(parts))
        return gens

    def coset_closed(self, X: frozenset[int], m: int) -> bool:
        """Whether X is a union of cosets of the ideal mR."""
        add = self.add
        for g in self.ideal_generators(m):
            for x in X:
                if add(x, g) not in X:
                    return False
        return True

    def lower_ideal(self, X: frozenset[int]) -> int:
        """Divisor of the largest ideal I with X + I = X."""
        if not X:
            raise EmptySetError("the lower ideal of the empty set is undefined")
        order = sorted(self.divisors(), key=lambda m: (-self.ideal_size(m), m))
        for m in order:
            if self.coset_closed(X, m):
                return m
        raise AssertionError("unreachable, the zero ideal always qualifies")

    def upper_ideal(self, X: frozenset[int]) -> int:
        """Divisor of the smallest ideal containing X."""
        if not X:
            raise EmptySetError("the upper ideal of the empty set is undefined")
        g = 0
        for x in X:
            content = self.divisor_from_valuations(
                comp.valuation(i) for comp, i in zip(self.components, self.parts(x))
            )
            g = math.gcd(g, content)
            if g == 1:
                break
        return g

    def annihilator(self, X: frozenset[int]) -> int:
        """Divisor of {r : rX = 0}; the whole ring for empty X."""
        mins = [comp.n for comp in self.components]
        for x in X:
            for k, (comp, i) in enumerate(zip(self.components, self.parts(x))):
                mins[k] = min(mins[k], comp.valuation(i))
        return self.divisor_from_valuations(
            comp.n - v for comp, v in zip(self.components, mins)
        )

    # -- projections and subrings -------------------------------------------

    def project(self, a: int, primes: Iterable[int]) -> int:
        keep = set(primes)
        return self.from_parts(
            i if comp.p in keep else 0
            for comp, i in zip(self.components, self.parts(a))
        )

    def project_set(self, X: Iterable[int], primes: Iterable[int]) -> frozenset[int]:
        keep = set(primes)
        return frozenset(self.project(a, keep) for a in X)

    def scale_set(self, X: Iterable[int], k: int) -> frozenset[int]:
        return frozenset(self.scale(a, k) for a in X)

    def component_divisor(self, primes: Iterable[int]) -> int:
        """Divisor m with mR = the sub-product over the given primes."""
        keep = set(primes)
        return math.prod(c.char for c in self.components if c.p not in keep)

    def embed_component_units(self, comp_index: int) -> list[int]:
        """Units of one component as global units, 1 in the other slots."""
        out = []
        k = len(self.components)
        for u in self.components[comp_index].unit_indices():
            parts = [1] * k
            parts[comp_index] = u
            out.append(self.from_parts(parts))
        return out

    def embed_principal_units(self, comp_index: int) -> list[int]:
        """The group 1 + pR_p of one component, as global units."""
        comp = self.components[comp_index]
        p = comp.p
        out = []
        k = len(self.components)
        for a in comp.elements():
            cs = comp.coeffs(a)
            if cs[0] % p == 1 and all(c % p == 0 for c in cs[1:]):
                parts = [1] * k
                parts[comp_index] = a
                out.append(self.from_parts(parts))
        return out

    # -- group actions ---------------------------------------------------

    def is_subgroup(self, K: frozenset[int]) -> bool:
        if self.one not in K:
            return False
        return all(self.mul(a, b) in K for a in K for b in K)

    def orbit(self, K: Iterable[int], x: int) -> frozenset[int]:
        return frozenset(self.mul(k, x) for k in K)

    def orbit_partition(
        self, K: Iterable[int], carrier: Iterable[int] | None = None
    ) -> list[frozenset[int]]:
        """Orbits of a unit subgroup acting by multiplication, ordered by minimum."""
        pool = sorted(carrier) if carrier is not None else self.elements()
        pool_set = set(pool)
        seen: set[int] = set()
        out = []
        for x in pool:
            if x in seen:
                continue
            orb = self.orbit(K, x)
            if not orb <= pool_set:
                raise ValueError("carrier is not invariant under the group")
            seen |= orb
            out.append(orb)
        return out

    # -- purity ------------------------------------------------------------

    def is_pure_set(self, X: frozenset[int]) -> bool:
        return self.lower_ideal(X) == self.char

    def is_pure_subgroup(self, K: frozenset[int]) -> bool:
        """No coset 1 + I of a nonzero ideal inside K.

        It is enough to test the minimal ideals, one per prime.
        """
        one = self.one
        for p in self.primes:
            if all(self.add(one, g) in K for g in self.ideal(self.char // p)):
                return False
        return True

    def pure_subgroup_by_rank(self, K: frozenset[int]) -> bool:
        """Rank criterion: pure iff rk(K meet 1+pR_p) < d_p for every p.

        Valid when every non-field component has p odd or n = 2; for p = 2
        and n >= 3 the principal unit group is not homocyclic and the
        criterion breaks, so such rings are rejected.
        """
        for ci, comp in enumerate(self.components):
            if comp.n == 1:
                continue
            if comp.p == 2 and comp.n > 2:
                raise ValueError("rank criterion needs odd p or n <= 2, use is_pure_subgroup")
            principal = set(self.embed_principal_units(ci))
            H = K & principal
            powers = {self.pow(h, comp.p) for h in H}
            quot, rank = len(H) // len(powers), 0
            while quot > 1:
                quot //= comp.p
                rank += 1
            if rank >= comp.d:
                return False
        return True


@dataclass(frozen=True)
class QuotientMap:
    """Quotient ring R/mR with the natural projection and least-preimage lift."""

    source: CGRing
    ring: CGRing
    divisor: int
    pi: Callable[[int], int] = field(repr=False)
    section: Callable[[int], int] = field(repr=False)


@dataclass(frozen=True)
class IdealRingMap:
    """The ideal mR as a ring with identity m*1.

    `ring` is the abstract model (a product of smaller Galois rings),
    `to_model` is the ring epimorphism x -> mx read in the model, and
    `embed` is the additive bijection from the model onto mR inside the
    source ring.  embed(model identity) = m * 1.
    """

    source: CGRing
    ring: CGRing
    divisor: int
    to_model: Callable[[int], int] = field(repr=False)
    embed: Callable[[int], int] = field(repr=False)

    def section_map(self) -> dict[int, int]:
        """Inverse of embed, as a dict over the members of mR."""
        return {self.embed(j): j for j in self.ring.elements()}


def quotient(ring: CGRing, m: int) -> QuotientMap:
    """R / mR for a divisor m > 1 of the characteristic."""
    vals = ring.valuations(m)
    if m == 1:
        raise ValueError("quotient by the whole ring is degenerate")
    kept = [
        (ci, comp, v) for ci, (comp, v) in enumerate(zip(ring.components, vals)) if v > 0
    ]
    target = CGRing([make_galois_ring(comp.p, v, comp.d) for _, comp, v in kept])

    def pi(a: int, _kept=kept, _src=ring, _dst=target) -> int:
        parts = _src.parts(a)
        out = []
        for (ci, comp, v), new in zip(_kept, _dst.components):
            q = comp.p**v
            out.append(new.index(tuple(c % q for c in comp.coeffs(parts[ci]))))
        return _dst.from_parts(out)

    def section(b: int, _kept=kept, _src=ring, _dst=target) -> int:
        sub = _dst.parts(b)
        parts = [0] * len(_src.components)
        for (ci, comp, v), new, i in zip(_kept, _dst.components, sub):
            parts[ci] = comp.index(new.coeffs(i))
        return _src.from_parts(parts)

    return QuotientMap(ring, target, m, pi, section)


def ideal_ring(ring: CGRing, m: int) -> IdealRingMap:
    """Ring structure on mR, for a proper divisor m of the characteristic."""
    vals = ring.valuations(m)
    if m == ring.char:
        raise ValueError("the zero ideal does not carry a ring structure")
    kept = [
        (ci, comp, v)
        for ci, (comp, v) in enumerate(zip(ring.components, vals))
        if v < comp.n
    ]
    target = CGRing([make_galois_ring(comp.p, comp.n - v, comp.d) for _, comp, v in kept])

    def to_model(a: int, _kept=kept, _src=ring, _dst=target) -> int:
        parts = _src.parts(a)
        out = []
        for (ci, comp, v), new in zip(_kept, _dst.components):
            q = comp.p ** (comp.n - v)
            out.append(new.index(tuple(c % q for c in comp.coeffs(parts[ci]))))
        return _dst.from_parts(out)

    def embed(b: int, _kept=kept, _src=ring, _dst=target, _m=m) -> int:
        sub = _dst.parts(b)
        parts = [0] * len(_src.components)
        for (ci, comp, v), new, i in zip(_kept, _dst.components, sub):
            parts[ci] = comp.index(new.coeffs(i))
        return _src.scale(_src.from_parts(parts), _m)

    return IdealRingMap(ring, target, m, to_model, embed)


def make_cg_ring(components, max_size: int = DEFAULT_MAX_RING_SIZE) -> CGRing:
    """Build a product ring from GaloisRing objects or (p, n, d) tuples."""
    built = []
    for comp in components:
        if isinstance(comp, GaloisRing):
            built.append(comp)
        else:
            p, n, d = comp
            built.append(make_galois_ring(p, n, d, max_size=max_size))
    ring = CGRing(built)
    if ring.size > max_size:
        raise ValueError(f"|R| = {ring.size} exceeds the size limit {max_size}")
    return ring


_COMPONENT_RE = re.compile(r"^GR\((\d+)(?:\^(\d+))?(?:,(\d+))?\)$")


def parse_ring_spec(spec: str, max_size: int = DEFAULT_MAX_RING_SIZE) -> CGRing:
    """Parse strings like "GR(4,2)xGR(9)" or "GR(2^2,2)xGR(3^2)"."""
    comps = []
    for token in spec.replace(" ", "").split("x"):
        match = _COMPONENT_RE.match(token)
        if not match:
            raise ValueError(f"bad ring component {token!r}")
        base, exp, d = match.groups()
        base = int(base)
        if exp is not None:
            p, n = base, int(exp)
            if not is_prime(p):
                raise ValueError(f"{p} is not prime in {token!r}")
        elif base < 2:
            raise ValueError(f"bad ring component {token!r}")
        else:
            p = min(f for f in range(2, base + 1) if base % f == 0)
            n = 0
            q = base
            while q > 1:
                if q % p:
                    raise ValueError(f"{base} is not a prime power in {token!r}")
                q //= p
                n += 1
        comps.append((p, n, int(d) if d else 1))
    return make_cg_ring(comps, max_size=max_size)
