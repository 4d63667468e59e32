"""Exact character sums and dual Schur rings.

Character values live in Z[x]/(Phi_c(x)) with Phi_c the c-th cyclotomic
polynomial, so equality of character sums is decided exactly.  The
generating character is assembled from the component traces, and every
character of the additive group is chi(r*.) for a unique r, which lets
dual Schur rings live on the same element indices as the source ring.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .cgring import CGRing
from .sring import (
    SRing,
    StructureError,
    is_tensor_over,
    quotient_sring,
    restrict,
    wreath_pairs,
)


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient of integer polynomials known to divide exactly (monic den)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        coef = num[i + len(den) - 1]
        out[i] = coef
        for j, d in enumerate(den):
            num[i + j] -= coef * d
    if any(num):
        raise ArithmeticError("division left a remainder")
    return out


def cyclotomic_polynomial(c: int) -> tuple[int, ...]:
    """Coefficients of Phi_c, low degree first."""
    if c < 1:
        raise ValueError("conductor must be positive")
    memo: dict[int, list[int]] = {}

    def build(n: int) -> list[int]:
        if n not in memo:
            num = [-1] + [0] * (n - 1) + [1]
            for d in range(1, n):
                if n % d == 0:
                    num = _poly_div_exact(num, build(d))
            memo[n] = num
        return memo[n]

    return tuple(build(c))


@dataclass(frozen=True)
class CycInt:
    """An element of Z[x]/(Phi_c), stored as phi(c) integer coefficients."""

    c: int
    coeffs: tuple[int, ...]

    def __add__(self, other: CycInt) -> CycInt:
        if self.c != other.c:
            raise ValueError("mixed conductors")
        return CycInt(self.c, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CycInt:
        return CycInt(self.c, tuple(-a for a in self.coeffs))

    def __sub__(self, other: CycInt) -> CycInt:
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_doc(self) -> dict:
        return {"c": self.c, "coeffs": list(self.coeffs)}


class CharacterTable:
    """Exponent table e with chi(r*x) = zeta_c^e(rx), plus reduced zeta powers.

    The exponent map combines the component traces, scaled so each
    component contributes on its own coprime part of the conductor.
    Faithfulness of r -> chi(r*.) is checked exhaustively on build.
    """

    def __init__(self, ring: CGRing):
        self.ring = ring
        c = ring.char
        self.c = c
        modulus = cyclotomic_polynomial(c)
        self.phi = len(modulus) - 1
        self.zero = CycInt(c, (0,) * self.phi)

        rows: list[tuple[int, ...]] = []
        row = [1] + [0] * (self.phi - 1)
        for _ in range(c):
            rows.append(tuple(row))
            lead = row[-1]
            row = [0] + row[:-1]
            if lead:
                for i in range(self.phi):
                    row[i] -= lead * modulus[i]
                row = row[: self.phi]
        self.power_rows = rows

        weights = [c // comp.char for comp in ring.components]
        self.exponent = [
            sum(w * comp.trace(part) for w, comp, part in
                zip(weights, ring.components, ring.parts(x))) % c
            for x in ring.elements()
        ]
        if ring.size <= 700:
            ring.mul_table()
        for s in ring.elements():
            if s and all(self.exponent[ring.mul(s, x)] == 0 for x in ring.elements()):
                raise StructureError(f"generating character not faithful at {s}")

    def char_value(self, r: int, x: int) -> CycInt:
        return CycInt(self.c, self.power_rows[self.exponent[self.ring.mul(r, x)]])

    def _sum_key(self, r: int, S: Iterable[int]) -> tuple[int, ...]:
        mul, exponent = self.ring.mul, self.exponent
        counts: Counter[int] = Counter(exponent[mul(r, x)] for x in S)
        total = [0] * self.phi
        for k, n in counts.items():
            row = self.power_rows[k]
            for i in range(self.phi):
                total[i] += n * row[i]
        return tuple(total)

    def char_sum(self, r: int, S: Iterable[int]) -> CycInt:
        return CycInt(self.c, self._sum_key(r, S))


_TABLES: dict[CGRing, CharacterTable] = {}


def character_table(ring: CGRing) -> CharacterTable:
    if ring not in _TABLES:
        _TABLES[ring] = CharacterTable(ring)
    return _TABLES[ring]


def dual_sring(A: SRing, table: CharacterTable | None = None) -> SRing:
    """Group r by the vector of character sums over the classes of A."""
    table = table or character_table(A.ring)
    groups: dict[tuple, list[int]] = {}
    for r in A.ring.elements():
        key = tuple(table._sum_key(r, X) for X in A.classes)
        groups.setdefault(key, []).append(r)
    B = SRing(A.ring, groups.values())
    if B.rank != A.rank:
        raise StructureError(f"dual rank {B.rank} differs from rank {A.rank}")
    return B


def perp_of_ideal(ring: CGRing, m: int, table: CharacterTable | None = None) -> frozenset[int]:
    """Characters annihilating mR, as element labels; equals (c/m)R."""
    table = table or character_table(ring)
    members = ring.ideal(m)
    return frozenset(
        r for r in ring.elements()
        if all(table.exponent[ring.mul(r, x)] == 0 for x in members)
    )


# -- duality laws as a checkable report ----------------------------------------


@dataclass(frozen=True)
class DualityReport:
    ok: bool
    failures: tuple[str, ...]

    def to_doc(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def _proper_prime_splits(ring: CGRing) -> list[frozenset[int]]:
    primes = sorted(ring.primes)
    out = []
    for k in range(1, len(primes)):
        out.extend(frozenset(sub) for sub in combinations(primes, k))
    return out


def check_duality(A: SRing) -> DualityReport:
    """Verify the duality laws on one Schur ring; failures mean bugs."""
    ring = A.ring
    c = ring.char
    table = character_table(ring)
    failures: list[str] = []

    B = dual_sring(A, table)
    if dual_sring(B, table) != A:
        failures.append("dual of the dual differs from the input")
    if B.rank != A.rank:
        failures.append("rank not preserved")

    perp = {c // m for m in A.a_ideal_divisors()}
    dual_ideals = set(B.a_ideal_divisors())
    if perp != dual_ideals:
        failures.append("A-ideal sets do not correspond under m -> c/m")

    certs = {(w.outer, w.inner) for w in wreath_pairs(A)}
    swapped = {(c // inner, c // outer) for outer, inner in certs}
    dual_certs = {(w.outer, w.inner) for w in wreath_pairs(B)}
    if swapped != dual_certs:
        failures.append("wreath certificates do not swap to the dual")

    if A.is_pure() != B.is_pure():
        failures.append("purity not preserved by the dual")

    for Q in _proper_prime_splits(ring):
        split, dual_split = is_tensor_over(A, Q), is_tensor_over(B, Q)
        if split.ok != dual_split.ok:
            failures.append(f"tensor split over {sorted(Q)} does not match the dual")
        elif split.ok:
            if (dual_sring(split.left) != dual_split.left
                    or dual_sring(split.right) != dual_split.right):
                failures.append(f"tensor factors over {sorted(Q)} are not dual factors")

    for m in A.a_ideal_divisors():
        if m == 1 or c // m not in dual_ideals:
            continue
        if dual_sring(quotient_sring(A, m)) != restrict(B, c // m):
            failures.append(f"dual of the quotient by {m}R is not the restriction to {c // m}R")

    return DualityReport(not failures, tuple(failures))


# -- separation ----------------------------------------------------------------


@dataclass(frozen=True)
class SeparationReport:
    orbit: frozenset[int]
    pure: bool
    separator: int | None
    nonzero: int | None

    @property
    def separated(self) -> bool:
        return self.separator is not None

    def to_doc(self) -> dict:
        return {
            "orbit": sorted(self.orbit),
            "pure": self.pure,
            "separator": self.separator,
            "nonzero": self.nonzero,
        }


def separation_check(ring: CGRing, K: Iterable[int], S: Iterable[int],
                     S2: Iterable[int]) -> SeparationReport:
    """Search for a unit character separating two subsets of one K-orbit.

    For a pure orbit the separating unit exists whenever S != S2, and
    some unit character has nonzero sum on a nonempty S; both witnesses
    are reported, or left None as a refutation on non-pure orbits.
    """
    K = frozenset(K)
    S, S2 = frozenset(S), frozenset(S2)
    if not S:
        raise ValueError("S must be nonempty")
    orbit = ring.orbit(K, next(iter(S)))
    if not (S | S2) <= orbit:
        raise ValueError("S and S2 must lie in a single K-orbit")
    table = character_table(ring)
    separator = None
    nonzero = None
    for r in ring.units():
        key = table._sum_key(r, S)
        if nonzero is None and any(key):
            nonzero = r
        if separator is None and S != S2 and key != table._sum_key(r, S2):
            separator = r
        if nonzero is not None and (separator is not None or S == S2):
            break
    return SeparationReport(orbit, ring.is_pure_set(orbit), separator, nonzero)
