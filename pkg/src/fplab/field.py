"""Prime-field substrate: primality, primitive roots, discrete-log tables, characters.

Everything downstream counts exactly in integers.  A field carries a full
index table (discrete logs to the least primitive root), so multiplicative
characters are evaluated as integer exponents and converted to unit-circle
complex numbers only when a sum is actually accumulated.
"""

import cmath
import math
from functools import lru_cache

import numpy as np

from .errors import (
    IndexOutOfRangeError,
    NotPrimeError,
    TooLargeError,
    TooSmallError,
)

DEFAULT_CAP = 1 << 20

# Witness set makes Miller-Rabin deterministic for n < 3.3e24, far past the cap.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list:
    """Distinct prime factors of n, by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def least_primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod p."""
    phi = p - 1
    factors = prime_factors(phi)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise NotPrimeError(f"no primitive root mod {p}; {p} is not prime")


class PrimeField:
    """Prime p, its least primitive root g, and the full discrete-log table.

    ind[x] = k for the unique k in [0, p-2] with g^k = x (mod p); ind[0] = -1
    as a sentinel.  Instances are immutable after construction and safe to
    share across workers.
    """

    __slots__ = ("p", "g", "ind", "_unit_roots", "_additive_roots", "_inv")

    def __init__(self, p: int, g: int, ind: tuple):
        self.p = p
        self.g = g
        self.ind = ind
        self._unit_roots = None
        self._additive_roots = None
        self._inv = None

    def __repr__(self):
        return f"PrimeField(p={self.p}, g={self.g})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def inv(self, x: int) -> int:
        """Multiplicative inverse of x mod p (x must be nonzero mod p)."""
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self._inv is None:
            self._inv = _inverse_table(self.p)
        return self._inv[x]

    def unit_roots(self) -> np.ndarray:
        """exp(2*pi*i*k/(p-1)) for k in [0, p-2]; cached."""
        if self._unit_roots is None:
            k = np.arange(self.p - 1)
            self._unit_roots = np.exp(2j * np.pi * k / (self.p - 1))
        return self._unit_roots

    def additive_roots(self) -> np.ndarray:
        """exp(2*pi*i*v/p) for v in [0, p-1]; cached."""
        if self._additive_roots is None:
            v = np.arange(self.p)
            self._additive_roots = np.exp(2j * np.pi * v / self.p)
        return self._additive_roots


def _inverse_table(p: int) -> list:
    # inv[1] = 1 and inv[x] = -(p // x) * inv[p mod x], the usual O(p) recurrence
    inv = [0] * p
    inv[1] = 1
    for x in range(2, p):
        inv[x] = (p - p // x) * inv[p % x] % p
    return inv


@lru_cache(maxsize=None)
def _build_field_cached(p: int) -> PrimeField:
    g = least_primitive_root(p)
    ind = [-1] * p
    acc = 1
    for k in range(p - 1):
        ind[acc] = k
        acc = acc * g % p
    return PrimeField(p, g, tuple(ind))


def build_field(p: int, cap: int = DEFAULT_CAP) -> PrimeField:
    """Validated field constructor: p prime, 3 <= p <= cap.

    Deterministic: always the least primitive root.  p = 2 is rejected
    everywhere in this package (trivial multiplicative group).
    """
    if not isinstance(p, int):
        raise NotPrimeError(f"modulus must be an integer, got {p!r}")
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p < 3:
        raise TooSmallError("p must be at least 3 (p = 2 is not supported)")
    if p > cap:
        raise TooLargeError(f"p = {p} exceeds the cap {cap}")
    return _build_field_cached(p)


class Character:
    """Multiplicative character chi_m on a prime field.

    chi(x) = exp(2*pi*i * m * ind[x] / (p-1)) for x != 0 and chi(0) = 0.
    Internally a value is the exponent m*ind[x] mod (p-1); complex numbers
    appear only when sums are evaluated.
    """

    __slots__ = ("field", "m", "_table")

    def __init__(self, field: PrimeField, m: int):
        self.field = field
        self.m = m
        self._table = None

    def __repr__(self):
        return f"Character(p={self.field.p}, m={self.m})"

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and other.field.p == self.field.p
            and other.m == self.m
        )

    def __hash__(self):
        return hash(("Character", self.field.p, self.m))

    @property
    def is_principal(self) -> bool:
        return self.m == 0

    @property
    def order(self) -> int:
        """Order of chi in the character group."""
        n = self.field.p - 1
        return n // math.gcd(self.m, n) if self.m else 1

    def exponent(self, x: int) -> int:
        """m * ind[x] mod (p-1), or -1 when x = 0 mod p."""
        x %= self.field.p
        if x == 0:
            return -1
        return self.m * self.field.ind[x] % (self.field.p - 1)

    def __call__(self, x: int) -> complex:
        e = self.exponent(x)
        if e < 0:
            return 0j
        return cmath.exp(2j * cmath.pi * e / (self.field.p - 1))

    def conjugate(self) -> "Character":
        return Character(self.field, (self.field.p - 1 - self.m) % (self.field.p - 1))

    def values(self) -> np.ndarray:
        """chi(x) for x in [0, p-1] as a complex array; cached."""
        if self._table is None:
            p = self.field.p
            roots = self.field.unit_roots()
            idx = np.asarray(self.field.ind, dtype=np.int64)
            tab = np.zeros(p, dtype=np.complex128)
            tab[1:] = roots[(self.m * idx[1:]) % (p - 1)]
            self._table = tab
        return self._table

    def exponents(self) -> np.ndarray:
        """m * ind[x] mod (p-1) for all x, with -1 at x = 0."""
        p = self.field.p
        idx = np.asarray(self.field.ind, dtype=np.int64)
        out = (self.m * idx) % (p - 1)
        out[0] = -1
        return out


def character(field: PrimeField, m: int) -> Character:
    """Character with index m in [0, p-2]; m = 0 is the principal character."""
    if not 0 <= m <= field.p - 2:
        raise IndexOutOfRangeError(f"character index {m} not in [0, {field.p - 2}]")
    return Character(field, m)
