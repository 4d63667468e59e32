"""Character table and dual Schur ring tests.

Oracles here are independent of the module: cyclotomic polynomials are
checked against the product formula for x^n - 1, power table rows
against a naive polynomial remainder, and small dual partitions against
hand computations over Z_9.
"""

from __future__ import annotations

import random

import pytest

from cgschur.cgring import make_cg_ring, parse_ring_spec
from cgschur.duality import (
    CharacterTable,
    CycInt,
    character_table,
    check_duality,
    cyclotomic_polynomial,
    dual_sring,
    perp_of_ideal,
    separation_check,
)
from cgschur.sring import SRing, cyclotomic, wreath_pairs
from conftest import enumerate_subgroups


def oracle_poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def oracle_power_mod(k: int, modulus: tuple[int, ...]) -> tuple[int, ...]:
    """x^k reduced by a monic modulus, by long division."""
    deg = len(modulus) - 1
    rem = [0] * k + [1]
    for i in range(len(rem) - 1, deg - 1, -1):
        lead = rem[i]
        if lead:
            for j, m in enumerate(modulus):
                rem[i - deg + j] -= lead * m
    return tuple((rem + [0] * deg)[:deg])


def test_cyclotomic_polynomial_frozen_values():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(9) == (1, 0, 0, 1, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(36) == (1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1)
    for p in (3, 5, 7):
        assert cyclotomic_polynomial(p) == (1,) * p
    with pytest.raises(ValueError):
        cyclotomic_polynomial(0)


def test_cyclotomic_polynomials_multiply_to_xn_minus_1():
    for n in range(1, 37):
        product = [1]
        for d in range(1, n + 1):
            if n % d == 0:
                product = oracle_poly_mul(product, list(cyclotomic_polynomial(d)))
        assert product == [-1] + [0] * (n - 1) + [1]


def test_power_rows_match_naive_remainder():
    for spec in ("GR(9)", "GR(4)xGR(9)", "GR(4,2)"):
        table = character_table(parse_ring_spec(spec))
        modulus = cyclotomic_polynomial(table.c)
        for k in range(table.c):
            assert table.power_rows[k] == oracle_power_mod(k, modulus)


def test_cycint_arithmetic():
    a = CycInt(9, (1, 2, 0, 0, -1, 3))
    b = CycInt(9, (0, 1, 1, 0, 0, -3))
    assert (a + b).coeffs == (1, 3, 1, 0, -1, 0)
    assert (a - a).is_zero()
    assert (-a).coeffs == (-1, -2, 0, 0, 1, -3)
    assert a.to_doc() == {"c": 9, "coeffs": [1, 2, 0, 0, -1, 3]}
    with pytest.raises(ValueError):
        a + CycInt(4, (0, 0))


def test_exponent_map_additive_and_surjective(z9, z36):
    f4z9 = parse_ring_spec("GR(4,2)xGR(9)")
    for ring in (z9, z36, f4z9):
        table = character_table(ring)
        assert set(table.exponent) == set(range(ring.char))
    table = character_table(z36)
    for x in z36.elements():
        for y in z36.elements():
            assert (table.exponent[z36.add(x, y)]
                    == (table.exponent[x] + table.exponent[y]) % 36)
    # identity element of GR(4,2) x GR(9): 9*Tr(1) + 4*Tr(1) = 9*2 + 4*1
    f4_table = character_table(f4z9)
    assert f4_table.exponent[f4z9.one] == 22


def test_char_sum_examples(z9, z36):
    table = character_table(z9)
    assert table.char_sum(0, {1, 4, 7}).coeffs == (3, 0, 0, 0, 0, 0)
    # zeta + zeta^4 + zeta^7 = zeta * Phi_9(zeta^?) pattern: sums to zero
    assert table.char_sum(1, {1, 4, 7}).is_zero()
    assert table.char_sum(1, {0, 3, 6}).is_zero()
    assert table.char_value(1, 1).coeffs == (0, 1, 0, 0, 0, 0)
    assert table.char_value(1, 0).coeffs == (1, 0, 0, 0, 0, 0)
    big = character_table(z36)
    assert big.char_sum(z36.one, z36.elements()).is_zero()
    # both factor sums are Ramanujan sums at squarefull moduli, hence zero
    assert big.char_sum(z36.one, z36.units()).is_zero()
    assert big.char_sum(z36.one, z36.ideal(6)).is_zero()
    assert not big.char_sum(z36.one, {z36.one, z36.neg(z36.one)}).is_zero()


def test_hermitian_symmetry(z36):
    table = character_table(z36)
    rng = random.Random(11)
    for _ in range(40):
        r = rng.randrange(z36.size)
        S = {rng.randrange(z36.size) for _ in range(rng.randrange(1, 8))}
        neg_S = {z36.neg(x) for x in S}
        assert table.char_sum(z36.neg(r), S) == table.char_sum(r, neg_S)


def test_dual_of_cyclotomic_is_itself(z9, z36):
    f4 = parse_ring_spec("GR(4,2)")
    for ring in (z9, z36, f4):
        for K in enumerate_subgroups(ring):
            A = cyclotomic(ring, K)
            assert dual_sring(A) == A


def test_dual_of_singleton_split_example(z9):
    # splitting the ideal orbit must split the unit orbit in the dual
    A = SRing(z9, [[0], [3], [6], [1, 2, 4, 5, 7, 8]])
    B = dual_sring(A)
    assert B.classes == ({0}, {1, 4, 7}, {2, 5, 8}, {3, 6})
    assert dual_sring(B) == A
    assert set(B.a_ideal_divisors()) == {9 // m for m in A.a_ideal_divisors()}
    certs = {(w.outer, w.inner) for w in wreath_pairs(B) if w.nontrivial}
    assert certs == {(3, 3)}


def test_check_duality_over_corpus(corpus):
    for label, A in corpus:
        report = check_duality(A)
        assert report.ok, (label, report.failures)
        assert report.to_doc()["ok"] is True


def test_perp_of_ideal_is_complementary_ideal(z9, z36):
    for ring in (z9, z36):
        for m in ring.divisors():
            assert perp_of_ideal(ring, m) == ring.ideal(ring.char // m)


def test_separation_on_pure_orbit(z9):
    report = separation_check(z9, {1, 8}, {1}, {8})
    assert report.pure and report.separated
    assert report.separator == 1 and report.nonzero == 1
    assert report.orbit == {1, 8}
    # every nonempty subset pair of the orbit is separated
    subsets = [{1}, {8}, {1, 8}]
    for S in subsets:
        for S2 in subsets + [set()]:
            if S == S2:
                continue
            rep = separation_check(z9, {1, 8}, S, S2)
            assert rep.separated and rep.nonzero is not None
    # pure ideal orbit of the full unit group
    rep = separation_check(z9, {1, 2, 4, 5, 7, 8}, {3}, {6})
    assert rep.pure and rep.separated


def test_separation_refuted_on_nonpure_orbit(z9):
    report = separation_check(z9, {1, 4, 7}, {1, 4, 7}, set())
    assert not report.pure
    assert report.separator is None and report.nonzero is None
    assert report.to_doc()["orbit"] == [1, 4, 7]


def test_separation_validation(z9):
    with pytest.raises(ValueError):
        separation_check(z9, {1, 8}, set(), {1})
    with pytest.raises(ValueError):
        separation_check(z9, {1, 8}, {1}, {2})
