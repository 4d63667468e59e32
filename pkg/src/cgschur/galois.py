"""Exact arithmetic in Galois rings GR(p^n, d).

A Galois ring of characteristic p^n and residue degree d is modeled as
Z_{p^n}[x] / (m(x)) where m is a monic polynomial of degree d whose
reduction mod p is irreducible over GF(p).  Elements are encoded as plain
integers: the coefficient vector (a_0, ..., a_{d-1}) with 0 <= a_i < p^n
has index sum(a_i * (p^n)**i).  All arithmetic is exact machine-integer
arithmetic, no floating point anywhere.
"""

from __future__ import annotations

from functools import lru_cache

DEFAULT_MAX_RING_SIZE = 1 << 20

# Full add/mul tables are only built for rings at most this large.
TABLE_LIMIT = 4096


class NotAUnit(ArithmeticError):
    """Raised when inverting an element outside the unit group."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True


def _poly_rem(a: list[int], b: tuple[int, ...], p: int) -> list[int]:
    """Remainder of a mod the monic polynomial b, coefficients mod p."""
    a = [c % p for c in a]
    db = len(b) - 1
    for i in range(len(a) - 1 - db, -1, -1):
        q = a[i + db]
        if q:
            for j in range(db + 1):
                a[i + j] = (a[i + j] - q * b[j]) % p
    return a[:db]


def _is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    d = len(f) - 1
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        for k in range(p**deg):
            g, t = [], k
            for _ in range(deg):
                t, r = divmod(t, p)
                g.append(r)
            g.append(1)
            if not any(_poly_rem(list(f), tuple(g), p)):
                return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree d over GF(p).

    Candidates x^d + a_{d-1} x^{d-1} + ... + a_0 are ordered by the value
    sum(a_i * p**i), so for d = 1 the modulus is x itself and the quotient
    ring is Z_{p^n}.
    """
    for k in range(p**d):
        coeffs, t = [], k
        for _ in range(d):
            t, r = divmod(t, p)
            coeffs.append(r)
        f = tuple(coeffs) + (1,)
        if _is_irreducible(f, p):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {d} over GF({p})")


class GaloisRing:
    """GR(p^n, d) with elements indexed by 0 .. p^(n*d) - 1.

    Use :func:`make_galois_ring` instead of calling the constructor directly;
    it validates the parameters and picks the canonical modulus.
    """

    def __init__(self, p: int, n: int, d: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.d = d
        self.modulus = tuple(c % p**n for c in modulus)
        self.char = p**n
        self.size = self.char**d
        self.residue_size = p**d
        self.unit_count = (self.residue_size - 1) * p ** ((n - 1) * d)
        self._mul_table: list[list[int]] | None = None

    def __repr__(self) -> str:
        return f"GaloisRing({self.spec()})"

    def spec(self) -> str:
        return f"GR({self.char},{self.d})" if self.d > 1 else f"GR({self.char})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaloisRing):
            return NotImplemented
        return (self.p, self.n, self.d, self.modulus) == (
            other.p,
            other.n,
            other.d,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.d, self.modulus))

    # -- encoding -------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            a, r = divmod(a, self.char)
            out.append(r)
        return tuple(out)

    def index(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.char + c % self.char
        return a

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.size)

    # -- ring operations ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        char = self.char
        out = 0
        shift = 1
        for _ in range(self.d):
            a, ra = divmod(a, char)
            b, rb = divmod(b, char)
            out += ((ra + rb) % char) * shift
            shift *= char
        return out

    def neg(self, a: int) -> int:
        return self.index(-c for c in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul(a, b)

    def _mul(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        char, d = self.char, self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % char
        m = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            q = prod[i]
            if q:
                prod[i] = 0
                for j in range(d):
                    prod[i - d + j] = (prod[i - d + j] - q * m[j]) % char
        return self.index(prod[:d])

    def mul_table(self) -> list[list[int]]:
        if self._mul_table is None:
            if self.size > TABLE_LIMIT:
                raise ValueError(f"ring of size {self.size} is too large to tabulate")
            self._mul_table = [
                [self._mul(a, b) for b in range(self.size)] for a in range(self.size)
            ]
        return self._mul_table

    def pow(self, a: int, k: int) -> int:
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def scale(self, a: int, k: int) -> int:
        """Additive multiple k*a, for plain integers k."""
        return self.index(k * c for c in self.coeffs(a))

    def is_unit(self, a: int) -> bool:
        return any(c % self.p for c in self.coeffs(a))

    def inv(self, a: int) -> int:
        if not self.is_unit(a):
            raise NotAUnit(f"{self.coeffs(a)} is not invertible in {self.spec()}")
        return self.pow(a, self.unit_count - 1)

    def valuation(self, a: int) -> int:
        """Largest i <= n with a in p^i * R."""
        if a == 0:
            return self.n
        v, p = 0, self.p
        cs = self.coeffs(a)
        while v < self.n and all(c % p**(v + 1) == 0 for c in cs):
            v += 1
        return v

    # -- Galois structure -------------------------------------------------

    def teichmuller_lift(self, a: int) -> int:
        """The fixed point of x -> x^(p^d) congruent to a mod p."""
        t = a
        while True:
            t2 = self.pow(t, self.residue_size)
            if t2 == t:
                return t
            t = t2

    def teichmuller_digits(self, a: int) -> list[int]:
        """Digits a_i of the expansion a = sum a_i * p^i with a_i Teichmuller."""
        digits = []
        x = a
        for _ in range(self.n):
            t = self.teichmuller_lift(x)
            digits.append(t)
            # (x - t) lies in pR, so every coefficient divides out exactly.
            x = self.index(c // self.p for c in self.coeffs(self.sub(x, t)))
        return digits

    def frobenius(self, a: int) -> int:
        out = 0
        for i, t in enumerate(self.teichmuller_digits(a)):
            out = self.add(out, self.scale(self.pow(t, self.p), self.p**i))
        return out

    def trace(self, a: int) -> int:
        """Trace down to Z_{p^n}, returned as an integer in [0, p^n)."""
        acc, s = a, a
        for _ in range(self.d - 1):
            s = self.frobenius(s)
            acc = self.add(acc, s)
        cs = self.coeffs(acc)
        assert all(c == 0 for c in cs[1:]), "trace landed outside the prime subring"
        return cs[0]

    def teichmuller_group(self) -> list[int]:
        """The p^d - 1 nonzero fixed points of x -> x^(p^d), in index order."""
        out = [a for a in self.elements() if a and self.pow(a, self.residue_size) == a]
        assert len(out) == self.residue_size - 1
        return out

    def unit_indices(self) -> list[int]:
        return [a for a in self.elements() if self.is_unit(a)]


def make_galois_ring(
    p: int, n: int = 1, d: int = 1, max_size: int = DEFAULT_MAX_RING_SIZE
) -> GaloisRing:
    """Construct GR(p^n, d) with the canonical modulus.

    Rejects composite p and rings larger than max_size elements.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if p ** (n * d) > max_size:
        raise ValueError(f"|GR({p}^{n},{d})| = {p**(n*d)} exceeds the size limit {max_size}")
    return GaloisRing(p, n, d, canonical_modulus(p, d))
