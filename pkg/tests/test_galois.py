"""Galois ring arithmetic against independent brute-force oracles."""

from __future__ import annotations

import itertools
import random

import pytest

from cgschur.galois import (
    GaloisRing,
    NotAUnit,
    canonical_modulus,
    is_prime,
    make_galois_ring,
)


def poly_mul_mod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def all_monic(deg, p):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def oracle_irreducible(f, p):
    """No factorization into two smaller monic polynomials."""
    d = len(f) - 1
    for da in range(1, d):
        for a in all_monic(da, p):
            for b in all_monic(d - da, p):
                if poly_mul_mod_p(a, b, p) == list(f):
                    return False
    return True


def test_canonical_modulus_is_least_irreducible():
    for p, d in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 2)]:
        m = canonical_modulus(p, d)
        assert len(m) == d + 1 and m[-1] == 1
        assert oracle_irreducible(m, p)
        k = sum(c * p**i for i, c in enumerate(m[:-1]))
        for smaller in range(k):
            coeffs, t = [], smaller
            for _ in range(d):
                t, r = divmod(t, p)
                coeffs.append(r)
            assert not oracle_irreducible(coeffs + [1], p)


def test_known_moduli():
    assert canonical_modulus(2, 2) == (1, 1, 1)  # x^2 + x + 1
    assert canonical_modulus(3, 2) == (1, 0, 1)  # x^2 + 1
    assert canonical_modulus(5, 1) == (0, 1)  # x


def test_make_galois_ring_validation():
    with pytest.raises(ValueError):
        make_galois_ring(4)
    with pytest.raises(ValueError):
        make_galois_ring(2, 0)
    with pytest.raises(ValueError):
        make_galois_ring(2, 21, 1)
    make_galois_ring(2, 20, 1)  # exactly at the default limit


def test_is_prime():
    assert [m for m in range(60) if is_prime(m)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59,
    ]


@pytest.mark.parametrize("p,n", [(3, 2), (2, 3), (5, 2)])
def test_d1_matches_integers_mod_char(p, n):
    """For d = 1 the ring is Z_{p^n} and indices are the residues themselves."""
    R = make_galois_ring(p, n)
    char = p**n
    assert R.size == char
    for a in range(char):
        assert R.neg(a) == (-a) % char
        for b in range(char):
            assert R.add(a, b) == (a + b) % char
            assert R.mul(a, b) == (a * b) % char
    for a in range(char):
        if a % p:
            inv = R.inv(a)
            assert (a * inv) % char == 1
        else:
            with pytest.raises(NotAUnit):
                R.inv(a)


def test_index_coeff_roundtrip():
    R = make_galois_ring(2, 2, 2)
    for a in R.elements():
        assert R.index(R.coeffs(a)) == a
    assert R.coeffs(R.index((3, 1))) == (3, 1)


def test_gr42_multiplication_and_inverse():
    R = make_galois_ring(2, 2, 2)
    x = R.index((0, 1))
    assert x == 4
    assert R.coeffs(R.mul(x, x)) == (3, 3)
    assert R.mul(x, R.index((3, 3))) == R.one
    assert R.inv(x) == R.index((3, 3))
    assert R.unit_count == 12
    assert len(R.unit_indices()) == 12


def test_ring_axioms_exhaustive_gr42():
    R = make_galois_ring(2, 2, 2)
    els = list(R.elements())
    for a in els:
        assert R.add(a, 0) == a
        assert R.mul(a, R.one) == a
        assert R.add(a, R.neg(a)) == 0
    for a, b in itertools.product(els, repeat=2):
        assert R.add(a, b) == R.add(b, a)
        assert R.mul(a, b) == R.mul(b, a)
    rng = random.Random(7)
    for _ in range(500):
        a, b, c = rng.choice(els), rng.choice(els), rng.choice(els)
        assert R.mul(a, R.mul(b, c)) == R.mul(R.mul(a, b), c)
        assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))


def brute_force_automorphisms(R):
    """All ring automorphisms fixing the prime subring, as permutation maps.

    An automorphism is determined by the image of x, which must be a root of
    the modulus; each candidate root is checked for multiplicativity.
    """
    def apply(a, image_of_x):
        out = 0
        for c in reversed(R.coeffs(a)):
            out = R.add(R.mul(out, image_of_x), c)
        return out

    def is_root(r):
        acc = 0
        for c in reversed(R.modulus):
            acc = R.add(R.mul(acc, r), c)
        return acc == 0

    maps = []
    for r in R.elements():
        if is_root(r):
            phi = [apply(a, r) for a in R.elements()]
            if all(
                phi[R.mul(a, b)] == R.mul(phi[a], phi[b])
                for a in R.elements()
                for b in R.elements()
            ):
                maps.append(phi)
    return maps


def test_frobenius_gr42_against_automorphism_oracle():
    R = make_galois_ring(2, 2, 2)
    autos = brute_force_automorphisms(R)
    assert len(autos) == 2
    teich = R.teichmuller_group()
    frob_oracle = next(
        phi
        for phi in autos
        if all(phi[t] == R.mul(t, t) for t in teich)
    )
    x = R.index((0, 1))
    assert R.coeffs(R.frobenius(x)) == (3, 3)
    for a in R.elements():
        assert R.frobenius(a) == frob_oracle[a]
        assert R.frobenius(R.frobenius(a)) == a


def test_frobenius_is_ring_homomorphism():
    for R in [make_galois_ring(3, 2, 2, max_size=8000), make_galois_ring(2, 3, 2)]:
        els = list(R.elements())
        rng = random.Random(11)
        sample = [rng.choice(els) for _ in range(40)]
        for a in sample:
            s, b = R.frobenius(a), a
            for _ in range(R.d - 1):
                b = R.frobenius(b)
            assert R.frobenius(b) == a  # order d
            for c in sample:
                assert R.frobenius(R.add(a, c)) == R.add(s, R.frobenius(c))
                assert R.frobenius(R.mul(a, c)) == R.mul(s, R.frobenius(c))
        for k in range(R.char):  # prime subring is fixed
            assert R.frobenius(R.index((k,) + (0,) * (R.d - 1))) == R.index(
                (k,) + (0,) * (R.d - 1)
            )


def test_trace_gr42():
    R = make_galois_ring(2, 2, 2)
    x = R.index((0, 1))
    assert R.trace(x) == 3
    assert R.trace(R.one) == 2
    assert {R.trace(a) for a in R.elements()} == {0, 1, 2, 3}
    for a in R.elements():
        for b in R.elements():
            assert R.trace(R.add(a, b)) == (R.trace(a) + R.trace(b)) % R.char
        assert R.trace(R.scale(a, 3)) == (3 * R.trace(a)) % R.char


def test_trace_surjective_gr92():
    R = make_galois_ring(3, 2, 2, max_size=8000)
    assert {R.trace(a) for a in R.elements()} == set(range(9))


def test_teichmuller_groups():
    assert make_galois_ring(3, 2).teichmuller_group() == [1, 8]
    assert make_galois_ring(5, 2).teichmuller_group() == [1, 7, 18, 24]
    R = make_galois_ring(2, 2, 2)
    T = R.teichmuller_group()
    assert T == [1, R.index((0, 1)), R.index((3, 3))]
    for t in T:  # cyclic of order p^d - 1
        assert R.pow(t, 3) == R.one
    assert R.teichmuller_lift(R.index((2, 1))) == R.index((0, 1))


def test_valuation_z9():
    R = make_galois_ring(3, 2)
    assert [R.valuation(a) for a in range(9)] == [2, 0, 0, 1, 0, 0, 1, 0, 0]


def test_scale_matches_repeated_addition():
    R = make_galois_ring(2, 2, 2)
    for a in R.elements():
        acc = 0
        for k in range(5):
            assert R.scale(a, k) == acc
            acc = R.add(acc, a)


def test_spec_strings():
    assert make_galois_ring(3, 2).spec() == "GR(9)"
    assert make_galois_ring(2, 2, 2).spec() == "GR(4,2)"
