"""Decomposition and classification of Schur rings over CG-rings.

Pure Schur rings over rings of odd characteristic split as tensor
products of rank-2 pieces over non-field sub-products with a cyclotomic
remainder; Schur rings whose unit classes are fixed by every unit carry
a nontrivial wreath layering or a rank-2 tensor factor.  Both splits are
certified and reassembled exactly.  The splits are guaranteed for valid
inputs, so a failed step raises FalsificationError instead of returning
a soft negative: it signals a bug, not a property of the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .cgring import CGRing, ideal_ring
from .duality import dual_sring
from .sring import (
    SRing,
    TensorSplit,
    WreathCert,
    cyclotomic,
    is_tensor_over,
    quotient_sring,
    wreath_pairs,
)

KIND_PURE_TENSOR = "PureTensor"
KIND_RATIONAL_WREATH = "RationalWreath"
KIND_RATIONAL_TENSOR = "RationalTensorRank2"
KIND_NOT_APPLICABLE = "NotApplicable"

ROLE_CYCLOTOMIC = "cyclotomic"
ROLE_RANK2 = "rank2"
ROLE_REST = "rest"


class FalsificationError(RuntimeError):
    """A guaranteed decomposition step failed on a valid input."""


Factor = tuple[frozenset[int], SRing, str]


@dataclass(frozen=True)
class Decomposition:
    kind: str
    factors: tuple[Factor, ...]
    certificates: tuple[WreathCert | TensorSplit, ...]
    reason: str | None = None

    def to_doc(self) -> dict:
        doc: dict = {
            "kind": self.kind,
            "factors": [
                {
                    "primes": sorted(Q),
                    "ring": F.ring.spec(),
                    "classes": [sorted(X) for X in F.classes],
                    "role": role,
                }
                for Q, F, role in self.factors
            ],
            "certificates": [_cert_doc(cert) for cert in self.certificates],
        }
        if self.reason is not None:
            doc["reason"] = self.reason
        return doc


def _cert_doc(cert: WreathCert | TensorSplit) -> dict:
    if isinstance(cert, WreathCert):
        return {"type": "wreath", "outer": cert.outer, "inner": cert.inner}
    return {"type": "tensor", "primes": sorted(cert.primes)}


def _is_field(ring: CGRing) -> bool:
    return len(ring.components) == 1 and ring.components[0].n == 1


def _proper_prime_subsets(ring: CGRing) -> Iterator[frozenset[int]]:
    primes = sorted(ring.primes)
    for size in range(1, len(primes)):
        for Q in combinations(primes, size):
            yield frozenset(Q)


def _rank2_nonfield_split(A: SRing) -> TensorSplit | None:
    """First tensor split whose left factor has rank 2 over a non-field.

    Complement subsets are enumerated too, so a rank-2 factor on either
    side of some split is found.
    """
    for Q in _proper_prime_subsets(A.ring):
        split = is_tensor_over(A, Q)
        if split.ok and split.left.rank == 2 and not _is_field(split.left.ring):
            return split
    return None


def _rank2_nonfield_decomposable(A: SRing) -> bool:
    if A.rank == 2 and not _is_field(A.ring):
        return True
    return _rank2_nonfield_split(A) is not None


# -- reassembly ---------------------------------------------------------------


def reassemble(ring: CGRing, factors: tuple[Factor, ...]) -> SRing:
    """Rebuild a Schur ring on `ring` from factors over disjoint prime sets.

    Elements are grouped by the tuple of factor classes of their
    projections, which is the tensor partition in the original component
    order regardless of the order the factors were split off in.
    """
    if not factors:
        raise ValueError("there are no factors to reassemble")
    seen: set[int] = set()
    maps = []
    for Q, F, _role in factors:
        overlap = seen & Q
        if overlap:
            raise ValueError(f"primes {sorted(overlap)} appear in two factors")
        seen |= Q
        sub = ideal_ring(ring, ring.component_divisor(Q))
        if sub.ring != F.ring:
            raise ValueError(
                f"factor ring {F.ring.spec()} does not match the"
                f" sub-product over {sorted(Q)}"
            )
        maps.append((Q, F, sub.section_map()))
    missing = set(ring.primes) - seen
    if missing:
        raise ValueError(f"the factors miss primes {sorted(missing)}")
    parts: dict[tuple[int, ...], list[int]] = {}
    for x in ring.elements():
        key = tuple(F.class_of[iota[ring.project(x, Q)]] for Q, F, iota in maps)
        parts.setdefault(key, []).append(x)
    return SRing(ring, list(parts.values()))


# -- pure decomposition -------------------------------------------------------


def decompose_pure(A: SRing) -> Decomposition:
    """Split a pure Schur ring over an odd ring into rank-2 and cyclotomic factors.

    Rank-2 factors over non-field sub-products are peeled greedily,
    smallest prime sets first; the remainder must be rank 2 over a
    non-field itself or the orbit partition of the class containing 1.
    Even characteristic and non-pure inputs are out of scope and give
    NotApplicable; any other failure raises FalsificationError.
    """
    ring = A.ring
    if ring.char % 2 == 0:
        return Decomposition(KIND_NOT_APPLICABLE, (), (), "the characteristic is even")
    if not A.is_pure():
        return Decomposition(KIND_NOT_APPLICABLE, (), (), "the input is not pure")

    factors: list[Factor] = []
    certs: list[TensorSplit] = []
    rest = A
    peeled = True
    while peeled:
        peeled = False
        for Q in _proper_prime_subsets(rest.ring):
            split = is_tensor_over(rest, Q)
            if split.ok and split.left.rank == 2 and not _is_field(split.left.ring):
                factors.append((Q, split.left, ROLE_RANK2))
                certs.append(split)
                rest = split.right
                peeled = True
                break

    if rest.rank == 2 and not _is_field(rest.ring):
        factors.append((frozenset(rest.ring.primes), rest, ROLE_RANK2))
    else:
        state = f"dense={rest.is_dense()}, pure={rest.is_pure()}"
        K = rest.class_containing(rest.ring.one)
        try:
            orbits = cyclotomic(rest.ring, K)
        except ValueError:
            raise FalsificationError(
                f"the class of 1 in the remainder over {rest.ring.spec()}"
                f" is not a unit subgroup ({state})"
            ) from None
        if orbits != rest:
            raise FalsificationError(
                f"the remainder over {rest.ring.spec()} is not the orbit"
                f" partition of the class of 1 ({state})"
            )
        factors.append((frozenset(rest.ring.primes), rest, ROLE_CYCLOTOMIC))

    out = Decomposition(KIND_PURE_TENSOR, tuple(factors), tuple(certs))
    if reassemble(ring, out.factors) != A:
        raise FalsificationError("the factors do not reassemble to the input")
    return out


# -- rational classification --------------------------------------------------


def classify_rational(A: SRing) -> Decomposition:
    """Classify a Schur ring whose unit-meeting classes are fixed by every unit.

    Returns the first nontrivial wreath layering when one exists,
    otherwise a tensor split with a rank-2 factor.  Valid inputs always
    admit one of the two, so reaching neither raises FalsificationError;
    inputs with a moved unit class are rejected.
    """
    ring = A.ring
    for ci in range(len(ring.components)):
        for u in ring.embed_component_units(ci):
            for k in A.unit_class_indices():
                X = A.classes[k]
                if frozenset(ring.mul(u, x) for x in X) != X:
                    raise ValueError(
                        f"the unit {u} moves the class {sorted(X)};"
                        " the input is not rational"
                    )

    cert = next((c for c in wreath_pairs(A) if c.nontrivial), None)
    if cert is not None:
        return Decomposition(KIND_RATIONAL_WREATH, (), (cert,))

    if A.rank == 2:
        factor = (frozenset(ring.primes), A, ROLE_RANK2)
        return Decomposition(KIND_RATIONAL_TENSOR, (factor,), ())

    for Q in _proper_prime_subsets(ring):
        split = is_tensor_over(A, Q)
        if split.ok and split.left.rank == 2:
            factors = (
                (Q, split.left, ROLE_RANK2),
                (frozenset(ring.primes) - Q, split.right, ROLE_REST),
            )
            out = Decomposition(KIND_RATIONAL_TENSOR, factors, (split,))
            if reassemble(ring, out.factors) != A:
                raise FalsificationError("the factors do not reassemble to the input")
            return out

    raise FalsificationError(
        f"no nontrivial wreath layering and no rank-2 tensor factor"
        f" over {ring.spec()}"
    )


# -- structure of non-dense Schur rings ---------------------------------------


@dataclass(frozen=True)
class StructureReport:
    """Wreath or rank-2 structure forced by a missing maximal A-ideal.

    `applicable` is set when some maximal ideal is not an A-ideal; the
    certificate found is then one of `wreath`, `self_rank2` (the input
    itself has rank 2 over a non-field) or `split`.  On pure inputs
    `four_way` records the equivalent conditions (indecomposable, dual
    pure and indecomposable, all maximal ideals A-ideals, all minimal
    ideals A-ideals), which must agree.
    """

    applicable: bool
    wreath: WreathCert | None
    self_rank2: bool
    split: TensorSplit | None
    four_way: tuple[bool, bool, bool, bool] | None
    ok: bool

    def to_doc(self) -> dict:
        doc: dict = {"applicable": self.applicable, "ok": self.ok}
        if self.applicable:
            found = None
            if self.wreath is not None:
                found = _cert_doc(self.wreath)
            elif self.self_rank2:
                found = {"type": "rank2"}
            elif self.split is not None:
                found = _cert_doc(self.split)
            doc["certificate"] = found
        if self.four_way is not None:
            doc["four_way"] = list(self.four_way)
        return doc


def check_nondense_structure(A: SRing) -> StructureReport:
    """Check the structure forced when a maximal ideal is not an A-ideal.

    Such a Schur ring carries a nontrivial wreath layering or a rank-2
    factor over a non-field (possibly the whole of A).  Pure inputs are
    additionally tested for the four-way equivalence of
    indecomposability with itself under duality and with the maximal and
    minimal ideals all being A-ideals.  Never raises; `ok` reports.
    """
    ring = A.ring
    a_divisors = set(A.a_ideal_divisors())
    applicable = any(p not in a_divisors for p in ring.maximal_divisors())

    wreath = None
    split = None
    self_rank2 = False
    structure_ok = True
    if applicable:
        wreath = next((c for c in wreath_pairs(A) if c.nontrivial), None)
        if wreath is None:
            self_rank2 = A.rank == 2 and not _is_field(ring)
            if not self_rank2:
                split = _rank2_nonfield_split(A)
        structure_ok = wreath is not None or self_rank2 or split is not None

    four_way = None
    equivalent = True
    if A.is_pure():
        dual = dual_sring(A)
        four_way = (
            not _rank2_nonfield_decomposable(A),
            dual.is_pure() and not _rank2_nonfield_decomposable(dual),
            all(p in a_divisors for p in ring.maximal_divisors()),
            all(ring.char // p in a_divisors for p in ring.primes),
        )
        equivalent = len(set(four_way)) == 1

    return StructureReport(
        applicable, wreath, self_rank2, split, four_way, structure_ok and equivalent
    )


# -- purity of quotients ------------------------------------------------------


@dataclass(frozen=True)
class QuotientPurityReport:
    """Whether purity survives the quotient by an admissible A-ideal."""

    applicable: bool
    reasons: tuple[str, ...]
    quotient_pure: bool | None

    @property
    def ok(self) -> bool:
        return bool(self.quotient_pure) if self.applicable else True

    def to_doc(self) -> dict:
        return {
            "applicable": self.applicable,
            "reasons": list(self.reasons),
            "quotient_pure": self.quotient_pure,
            "ok": self.ok,
        }


def check_quotient_purity(A: SRing, m: int) -> QuotientPurityReport:
    """Check that the image of A in R/mR is pure.

    Applicable when the characteristic is odd, A is pure, every maximal
    ideal and mR itself are A-ideals, and m has positive valuation at
    every prime (so no component collapses completely); m equal to the
    characteristic quotients by the zero ideal.  Hypothesis violations
    give a non-applicable report; an impure quotient on an applicable
    input raises FalsificationError.
    """
    ring = A.ring
    vals = ring.valuations(m)
    reasons = []
    if ring.char % 2 == 0:
        reasons.append("the characteristic is even")
    if not A.is_pure():
        reasons.append("the input is not pure")
    a_divisors = set(A.a_ideal_divisors())
    for p in ring.maximal_divisors():
        if p not in a_divisors:
            reasons.append(f"the maximal ideal {p}R is not an A-ideal")
    if m not in a_divisors:
        reasons.append(f"the ideal {m}R is not an A-ideal")
    for comp, v in zip(ring.components, vals):
        if v == 0:
            reasons.append(f"the ideal {m}R contains the whole {comp.p}-component")
    if reasons:
        return QuotientPurityReport(False, tuple(reasons), None)

    quo = quotient_sring(A, m)
    if not quo.is_pure():
        raise FalsificationError(
            f"the quotient of a pure Schur ring over {ring.spec()} by {m}R"
            " is not pure"
        )
    return QuotientPurityReport(True, (), True)
