"""Schur rings over a product ring, represented as verified partitions.

A Schur ring is stored as its partition of the element indices into
classes.  Four axioms make a partition a Schur ring here: {0} is a
class, classes are closed under negation, the additive convolution of
any two classes has constant multiplicity on every class, and u*X is a
class for every unit u.  Verification reports witnesses instead of
raising, so broken inputs can be inspected.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cgring import CGRing, ideal_ring, parse_ring_spec, quotient
from .galois import DEFAULT_MAX_RING_SIZE


class PartitionError(ValueError):
    """The given classes do not partition the ring."""


class StructureError(RuntimeError):
    """An internal Schur ring law failed; the input partition is broken."""


class SRing:
    """A partition of a CGRing into classes, ordered by least element."""

    def __init__(self, ring: CGRing, classes: Iterable[Iterable[int]]):
        self.ring = ring
        norm = sorted((frozenset(X) for X in classes), key=lambda X: min(X, default=-1))
        self.classes = tuple(norm)
        self.class_of = [-1] * ring.size
        for k, X in enumerate(self.classes):
            if not X:
                raise PartitionError("empty class")
            for x in X:
                if not 0 <= x < ring.size:
                    raise PartitionError(f"element {x} outside the ring")
                if self.class_of[x] != -1:
                    raise PartitionError(f"element {x} covered twice")
                self.class_of[x] = k
        if any(k == -1 for k in self.class_of):
            missing = self.class_of.index(-1)
            raise PartitionError(f"element {missing} not covered")
        self._class_set = frozenset(self.classes)

    @property
    def rank(self) -> int:
        return len(self.classes)

    def __repr__(self) -> str:
        return f"SRing({self.ring.spec()}, rank {self.rank})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SRing):
            return NotImplemented
        return self.ring == other.ring and self._class_set == other._class_set

    def __hash__(self) -> int:
        return hash((self.ring, self._class_set))

    def class_containing(self, x: int) -> frozenset[int]:
        return self.classes[self.class_of[x]]

    def is_class(self, X: frozenset[int]) -> bool:
        return X in self._class_set

    def is_aset(self, X: Iterable[int]) -> bool:
        """Whether X is a union of classes (the empty union counts)."""
        X = frozenset(X)
        covered: set[int] = set()
        for x in X:
            if x not in covered:
                cls = self.class_containing(x)
                if not cls <= X:
                    return False
                covered |= cls
        return True

    # -- intrinsic structure ------------------------------------------------

    def a_ideal_divisors(self) -> list[int]:
        """Divisors m such that the ideal mR is a union of classes."""
        return [m for m in self.ring.divisors() if self.is_aset(self.ring.ideal(m))]

    def is_dense(self) -> bool:
        return len(self.a_ideal_divisors()) == len(self.ring.divisors())

    def unit_class_indices(self) -> list[int]:
        units = set(self.ring.units())
        return [k for k, X in enumerate(self.classes) if X & units]

    def lower_ideal(self) -> int:
        """The common lower ideal of the classes that meet the units.

        All such classes share one lower ideal; disagreement means the
        partition is not a Schur ring.
        """
        found = {self.ring.lower_ideal(self.classes[k]) for k in self.unit_class_indices()}
        if len(found) != 1:
            raise StructureError(f"unit classes disagree on the lower ideal: {sorted(found)}")
        return found.pop()

    def is_pure(self) -> bool:
        return self.lower_ideal() == self.ring.char

    def is_rational(self, primes: Iterable[int] | None = None) -> bool:
        """Whether every class is fixed setwise by the chosen component units."""
        keep = set(primes) if primes is not None else set(self.ring.primes)
        for ci, comp in enumerate(self.ring.components):
            if comp.p not in keep:
                continue
            for u in self.ring.embed_component_units(ci):
                for X in self.classes:
                    if frozenset(self.ring.mul(u, x) for x in X) != X:
                        return False
        return True

    def to_doc(self) -> dict:
        return {
            "ring": self.ring.spec(),
            "classes": [sorted(X) for X in self.classes],
        }


def sring_from_doc(doc: dict, max_size: int = DEFAULT_MAX_RING_SIZE) -> SRing:
    ring = parse_ring_spec(doc["ring"], max_size=max_size)
    return SRing(ring, doc["classes"])


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    failures: tuple[dict, ...]

    def to_doc(self) -> dict:
        return {"ok": self.ok, "failures": [dict(f) for f in self.failures]}


def verify_sring(ring: CGRing, classes: Sequence[Iterable[int]]) -> VerifyReport:
    """Check the four Schur ring axioms, reporting witnesses for failures."""
    try:
        A = SRing(ring, classes)
    except PartitionError as err:
        return VerifyReport(False, ({"axiom": "partition", "witness": str(err)},))
    failures: list[dict] = []

    if not A.is_class(frozenset({0})):
        failures.append({"axiom": "zero-class", "witness": sorted(A.class_containing(0))})

    for k, X in enumerate(A.classes):
        image = frozenset(ring.neg(x) for x in X)
        if not A.is_class(image):
            failures.append({"axiom": "negation", "class": k, "witness": sorted(image)})

    for u in ring.units():
        for k, X in enumerate(A.classes):
            image = frozenset(ring.mul(u, x) for x in X)
            if not A.is_class(image):
                failures.append({"axiom": "unit-invariance", "unit": u, "class": k})
                break
        else:
            continue
        break

    for i, X in enumerate(A.classes):
        for j in range(i, A.rank):
            Y = A.classes[j]
            counts: Counter[int] = Counter()
            for x in X:
                for y in Y:
                    counts[ring.add(x, y)] += 1
            for k, Z in enumerate(A.classes):
                values = {counts[z] for z in Z}
                if len(values) > 1:
                    zs = sorted(Z, key=lambda z: counts[z])
                    failures.append({
                        "axiom": "convolution",
                        "pair": [i, j],
                        "class": k,
                        "witness": {str(zs[0]): counts[zs[0]], str(zs[-1]): counts[zs[-1]]},
                    })
    return VerifyReport(not failures, tuple(failures))


# -- constructions -----------------------------------------------------------


def cyclotomic(ring: CGRing, K: Iterable[int]) -> SRing:
    """The Schur ring whose classes are the orbits of a unit subgroup."""
    K = frozenset(K)
    if not all(ring.is_unit(k) for k in K) or not ring.is_subgroup(K):
        raise ValueError("K must be a subgroup of the units")
    return SRing(ring, ring.orbit_partition(K))


def _split_classes(classes: list[set[int]], class_of: list[int], k: int,
                   groups: dict) -> None:
    parts = sorted(groups.values(), key=lambda part: min(part))
    classes[k] = set(parts[0])
    for part in parts[1:]:
        classes.append(set(part))
        for x in part:
            class_of[x] = len(classes) - 1


def _refine_by_key(classes: list[set[int]], class_of: list[int], key) -> bool:
    changed = False
    for k in range(len(classes)):
        groups: dict = {}
        for x in classes[k]:
            groups.setdefault(key(x), []).append(x)
        if len(groups) > 1:
            _split_classes(classes, class_of, k, groups)
            changed = True
    return changed


def schur_closure(ring: CGRing, seeds: Sequence[Iterable[int]] = ()) -> SRing:
    """The smallest Schur ring whose A-sets include the seeds.

    The initial partition separates {0}, the unit-multiplication strata
    mR^x, and each seed from its complement; it is then refined until
    negation, unit translation, and convolution multiplicities are
    constant on every class.  The fixed point is the coarsest stable
    refinement, hence the smallest such Schur ring.
    """
    seed_sets = [frozenset(S) for S in seeds]
    start: dict = {}
    for x in ring.elements():
        stratum = ring.upper_ideal(frozenset({x})) if x else 0
        key = (x == 0, stratum, tuple(x in S for S in seed_sets))
        start.setdefault(key, []).append(x)
    classes: list[set[int]] = [set(part) for part in start.values()]
    class_of = [-1] * ring.size
    for k, part in enumerate(classes):
        for x in part:
            class_of[x] = k

    units = ring.units()
    while True:
        changed = _refine_by_key(classes, class_of, lambda x: class_of[ring.neg(x)])
        changed |= _refine_by_key(
            classes, class_of, lambda x: tuple(class_of[ring.mul(u, x)] for u in units)
        )
        # One convolution split restarts the scan: class ids shift after a split.
        split = True
        while split:
            split = False
            for i in range(len(classes)):
                for j in range(i, len(classes)):
                    counts: Counter[int] = Counter()
                    for x in classes[i]:
                        for y in classes[j]:
                            counts[ring.add(x, y)] += 1
                    for k in range(len(classes)):
                        groups: dict = {}
                        for z in classes[k]:
                            groups.setdefault(counts[z], []).append(z)
                        if len(groups) > 1:
                            _split_classes(classes, class_of, k, groups)
                            split = changed = True
                            break
                    if split:
                        break
                if split:
                    break
        if not changed:
            break
    return SRing(ring, classes)


# -- derived rings -----------------------------------------------------------


def restrict(A: SRing, m: int) -> SRing:
    """The Schur ring induced on the ideal mR, read in its model ring."""
    members = A.ring.ideal(m)
    if not A.is_aset(members):
        raise ValueError(f"the ideal {m}R is not an A-ideal")
    sub = ideal_ring(A.ring, m)
    iota = sub.section_map()
    classes = [frozenset(iota[x] for x in X) for X in A.classes if X <= members]
    return SRing(sub.ring, classes)


def quotient_sring(A: SRing, m: int) -> SRing:
    """The image of A in R/mR; m = characteristic means quotient by 0."""
    if not A.is_aset(A.ring.ideal(m)):
        raise ValueError(f"the ideal {m}R is not an A-ideal")
    q = quotient(A.ring, m)
    images = {frozenset(q.pi(x) for x in X) for X in A.classes}
    try:
        return SRing(q.ring, images)
    except PartitionError as err:
        raise StructureError(f"quotient images do not partition: {err}") from err


def tensor(A1: SRing, A2: SRing) -> SRing:
    """Tensor product over the product of the two underlying rings."""
    ring = CGRing(A1.ring.components + A2.ring.components)
    s1 = A1.ring.size
    classes = [
        frozenset(x + y * s1 for x in X for y in Y)
        for X in A1.classes
        for Y in A2.classes
    ]
    return SRing(ring, classes)


@dataclass(frozen=True)
class TensorSplit:
    ok: bool
    reason: str | None
    primes: frozenset[int]
    left: SRing | None
    right: SRing | None


def is_tensor_over(A: SRing, primes: Iterable[int]) -> TensorSplit:
    """Test whether A is the tensor product of its parts over a prime split.

    Succeeds iff both component ideals are A-ideals and every class is
    the product of its two projections; the factors are returned as
    Schur rings over the component rings.
    """
    ring = A.ring
    Q = frozenset(primes)
    Qc = frozenset(ring.primes) - Q
    if not Q or not Qc:
        return TensorSplit(False, "the prime split must be proper", Q, None, None)
    if not Q <= set(ring.primes):
        return TensorSplit(False, f"primes {sorted(Q - set(ring.primes))} not in the ring", Q, None, None)
    m_left, m_right = ring.component_divisor(Q), ring.component_divisor(Qc)
    for m in (m_left, m_right):
        if not A.is_aset(ring.ideal(m)):
            return TensorSplit(False, f"the ideal {m}R is not an A-ideal", Q, None, None)
    for X in A.classes:
        XQ = ring.project_set(X, Q)
        XQc = ring.project_set(X, Qc)
        if len(XQ) * len(XQc) != len(X):
            return TensorSplit(False, f"class {sorted(X)} is not a product set", Q, None, None)
        product = frozenset(ring.add(a, b) for a in XQ for b in XQc)
        if product != X:
            return TensorSplit(False, f"class {sorted(X)} is not a product set", Q, None, None)
    return TensorSplit(True, None, Q, restrict(A, m_left), restrict(A, m_right))


# -- wreath structure --------------------------------------------------------


@dataclass(frozen=True)
class WreathCert:
    """A-ideals I = outer*R and J = inner*R with J inside IL(X) meet I
    for every class X outside I; nontrivial when I is proper and J nonzero."""

    outer: int
    inner: int
    nontrivial: bool


def wreath_pairs(A: SRing) -> list[WreathCert]:
    """All ordered A-ideal pairs satisfying the layering condition."""
    ring = A.ring
    ideals = A.a_ideal_divisors()
    lower = [ring.lower_ideal(X) for X in A.classes]
    out = []
    for m_outer in ideals:
        members = ring.ideal(m_outer)
        outside = [k for k, X in enumerate(A.classes) if not X <= members]
        for m_inner in ideals:
            if m_inner % m_outer:
                continue
            if all(m_inner % lower[k] == 0 for k in outside):
                nontrivial = m_outer != 1 and m_inner != ring.char
                out.append(WreathCert(m_outer, m_inner, nontrivial))
    return out


def has_nontrivial_wreath(A: SRing) -> bool:
    return any(cert.nontrivial for cert in wreath_pairs(A))


# -- Schur-Wielandt maps -------------------------------------------------------


def power_map(A: SRing, X: Iterable[int], m: int) -> frozenset[int]:
    """The set m*X; a class again whenever gcd(m, |R|) = 1."""
    return A.ring.scale_set(X, m)


def frobenius_set(A: SRing, X: Iterable[int], p: int) -> frozenset[int]:
    """The set {p*x : x in X, |(x + H) meet X| not 0 mod p}, H the p-torsion."""
    ring = A.ring
    if ring.char % p:
        raise ValueError(f"{p} does not divide the characteristic")
    X = frozenset(X)
    H = ring.ideal(ring.char // p)
    out = []
    for x in X:
        hits = sum(1 for h in H if ring.add(x, h) in X)
        if hits % p:
            out.append(ring.scale(x, p))
    return frozenset(out)


def coset_count(A: SRing, m: int, X: Iterable[int]) -> int:
    """The constant |X meet (x + H)| over x in X, H = mR an A-ideal."""
    ring = A.ring
    H = ring.ideal(m)
    if not A.is_aset(H):
        raise ValueError(f"the ideal {m}R is not an A-ideal")
    X = frozenset(X)
    found = {sum(1 for h in H if ring.add(x, h) in X) for x in X}
    if len(found) != 1:
        raise StructureError(f"coset counts not constant: {sorted(found)}")
    return found.pop()
