"""Shared fixtures: small rings and a corpus of generated Schur rings."""

from __future__ import annotations

import random

import pytest

from cgschur.cgring import CGRing, make_cg_ring
from cgschur.sring import SRing, cyclotomic, schur_closure


def enumerate_subgroups(ring: CGRing) -> list[frozenset[int]]:
    """Brute-force closure enumeration of all unit subgroups."""
    units = ring.units()
    found = {frozenset({ring.one})}
    frontier = [frozenset({ring.one})]
    while frontier:
        K = frontier.pop()
        for u in units:
            if u in K:
                continue
            closure = set(K)
            queue = [u]
            while queue:
                x = queue.pop()
                if x in closure:
                    continue
                closure.add(x)
                queue.extend(ring.mul(x, y) for y in list(closure))
            grown = frozenset(closure)
            if grown not in found:
                found.add(grown)
                frontier.append(grown)
    return sorted(found, key=lambda K: (len(K), sorted(K)))


def rank2(ring: CGRing) -> SRing:
    return SRing(ring, [{0}, set(ring.elements()) - {0}])


def random_invariant_seed(ring: CGRing, K: frozenset[int], rng: random.Random) -> set[int]:
    """A union of one or two K-orbits, so the seed is K-invariant."""
    orbits = ring.orbit_partition(K)
    picks = rng.sample(orbits, rng.randrange(1, 3))
    out: set[int] = set()
    for orb in picks:
        out |= orb
    return out


def build_corpus() -> list[tuple[str, SRing]]:
    """Schur rings used by the property suites: cyclotomic, rank 2, closures."""
    out: list[tuple[str, SRing]] = []
    seen: set[SRing] = set()

    def push(label: str, A: SRing) -> None:
        if A not in seen:
            seen.add(A)
            out.append((label, A))

    rings = {
        "GR(9)": make_cg_ring([(3, 2, 1)]),
        "GR(4,2)": make_cg_ring([(2, 2, 2)]),
        "GR(8)": make_cg_ring([(2, 3, 1)]),
        "GR(4)xGR(9)": make_cg_ring([(2, 2, 1), (3, 2, 1)]),
    }
    for name, ring in rings.items():
        for K in enumerate_subgroups(ring):
            push(f"cyc[{len(K)}] over {name}", cyclotomic(ring, K))
        push(f"rank2 over {name}", rank2(ring))

    rng = random.Random(2026)
    for name, ring in rings.items():
        subgroups = enumerate_subgroups(ring)
        for i in range(8):
            K = rng.choice(subgroups)
            seed = random_invariant_seed(ring, K, rng)
            push(f"closure#{i} over {name}", schur_closure(ring, [seed]))
    return out


@pytest.fixture(scope="session")
def corpus() -> list[tuple[str, SRing]]:
    return build_corpus()


@pytest.fixture(scope="session")
def z9() -> CGRing:
    return make_cg_ring([(3, 2, 1)])


@pytest.fixture(scope="session")
def z36() -> CGRing:
    return make_cg_ring([(2, 2, 1), (3, 2, 1)])
