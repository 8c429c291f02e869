"""Constructors for every set species the harness uses, plus sumset algebra.

Sets are immutable sorted residue tuples with a provenance tag.  Random sets
use Mersenne Twister rejection sampling so a (p, n, seed) triple reproduces
bit-exactly.
"""

import random
from dataclasses import dataclass, field as dc_field

from .errors import (
    FieldMismatchError,
    LengthOutOfRangeError,
    NotADivisorError,
    SizeOutOfRangeError,
)
from .field import PrimeField

TAGS = ("interval", "subgroup", "poly_image", "primes", "random", "derived")


@dataclass(frozen=True, eq=False)
class FpSet:
    """A finite subset of F_p: sorted residues plus a provenance tag.

    meta carries constructor extras (polynomial fiber sizes, prime-reduction
    collision counts); it is informational and excluded from equality.
    """

    field: PrimeField
    elems: tuple
    tag: str = "derived"
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x):
        return x in set(self.elems)

    def __eq__(self, other):
        return (
            isinstance(other, FpSet)
            and other.field.p == self.field.p
            and other.elems == self.elems
        )

    def __hash__(self):
        return hash((self.field.p, self.elems))

    def __repr__(self):
        body = ",".join(map(str, self.elems[:8]))
        if len(self.elems) > 8:
            body += ",..."
        return f"FpSet(p={self.field.p}, {{{body}}}, tag={self.tag})"

    @property
    def p(self) -> int:
        return self.field.p

    def as_set(self) -> frozenset:
        return frozenset(self.elems)

    def translate(self, a: int) -> "FpSet":
        """The shifted set {x + a mod p}."""
        p = self.field.p
        return from_elements(self.field, [(x + a) % p for x in self.elems])

    def to_line(self) -> str:
        """Serialize as `p n e1 e2 ... en` (one line, space separated)."""
        return " ".join(map(str, [self.field.p, len(self.elems), *self.elems]))


def from_line(line: str, cap: int = None) -> FpSet:
    """Parse the `p n e1 ... en` line format; inverse of FpSet.to_line."""
    from .field import DEFAULT_CAP, build_field

    parts = line.split()
    if len(parts) < 2:
        raise ValueError(f"malformed set line: {line!r}")
    p, n = int(parts[0]), int(parts[1])
    elems = [int(t) for t in parts[2:]]
    if len(elems) != n:
        raise ValueError(f"declared {n} elements, found {len(elems)}")
    fld = build_field(p, cap if cap is not None else DEFAULT_CAP)
    return from_elements(fld, elems)


def from_elements(field: PrimeField, elems, tag: str = "derived", meta=None) -> FpSet:
    """Normalize arbitrary residues into a sorted duplicate-free FpSet."""
    p = field.p
    reduced = sorted({x % p for x in elems})
    return FpSet(field, tuple(reduced), tag, meta or {})


def interval(field: PrimeField, a: int, length: int) -> FpSet:
    """The interval {a+1, ..., a+length} reduced mod p."""
    if not 1 <= length < field.p:
        raise LengthOutOfRangeError(
            f"interval length {length} not in [1, {field.p - 1}]"
        )
    p = field.p
    return FpSet(field, tuple(sorted((a + i) % p for i in range(1, length + 1))), "interval")


def symmetric_interval(field: PrimeField, radius: int) -> FpSet:
    """The symmetric interval {-radius, ..., radius} reduced mod p."""
    if radius < 0 or 2 * radius + 1 > field.p:
        raise LengthOutOfRangeError(
            f"radius {radius}: need 0 <= 2*radius+1 <= {field.p}"
        )
    p = field.p
    return FpSet(
        field, tuple(sorted(x % p for x in range(-radius, radius + 1))), "interval"
    )


def subgroup(field: PrimeField, order: int) -> FpSet:
    """The unique multiplicative subgroup of the given order.

    order must divide p-1; the subgroup is {g^(k*(p-1)/order)}.
    """
    p = field.p
    if order < 1 or (p - 1) % order != 0:
        raise NotADivisorError(f"{order} does not divide p-1 = {p - 1}")
    h = (p - 1) // order
    gen = pow(field.g, h, p)
    elems = []
    acc = 1
    for _ in range(order):
        elems.append(acc)
        acc = acc * gen % p
    return FpSet(field, tuple(sorted(elems)), "subgroup")


def cofactor(group: FpSet) -> int:
    """Index h = (p-1)/order of a subgroup-tagged set."""
    return (group.field.p - 1) // len(group)


def poly_eval(coeffs, x: int, p: int) -> int:
    """Evaluate sum(coeffs[i] * x^i) mod p by Horner's rule."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def poly_image(coeffs, domain: FpSet) -> FpSet:
    """Image set {f(a) : a in domain} with fiber sizes in meta["fibers"].

    coeffs lists the polynomial's coefficients from constant term upward;
    degree must be at least 1 after reduction mod p.
    """
    p = domain.field.p
    reduced = [c % p for c in coeffs]
    while reduced and reduced[-1] == 0:
        reduced.pop()
    if len(reduced) < 2:
        raise ValueError("polynomial must have degree >= 1 mod p")
    fibers = {}
    for a in domain.elems:
        v = poly_eval(reduced, a, p)
        fibers[v] = fibers.get(v, 0) + 1
    return FpSet(
        domain.field, tuple(sorted(fibers)), "poly_image", {"fibers": fibers}
    )


def primes_upto(n: int) -> list:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    mark = bytearray([1]) * (n + 1)
    mark[0] = mark[1] = 0
    d = 2
    while d * d <= n:
        if mark[d]:
            mark[d * d :: d] = bytearray(len(mark[d * d :: d]))
        d += 1
    return [i for i in range(2, n + 1) if mark[i]]


def primes_set(field: PrimeField, bound: int) -> FpSet:
    """Primes <= bound reduced mod p; collisions collapse and are counted."""
    p = field.p
    qs = primes_upto(bound)
    residues = {q % p for q in qs}
    meta = {"collisions": len(qs) - len(residues)}
    return FpSet(field, tuple(sorted(residues)), "primes", meta)


def random_set(field: PrimeField, n: int, seed: int) -> FpSet:
    """Uniform n-subset of F_p, reproducible from (p, n, seed).

    Scheme: Mersenne Twister seeded with `seed`; draw residues with
    rng.randrange(p) and reject repeats until n distinct values are held.
    """
    p = field.p
    if not 0 <= n <= p:
        raise SizeOutOfRangeError(f"requested {n} elements from a field of {p}")
    rng = random.Random(seed)
    chosen = set()
    while len(chosen) < n:
        chosen.add(rng.randrange(p))
    return FpSet(field, tuple(sorted(chosen)), "random")


def sumset(a: FpSet, b: FpSet, sign: str = "+") -> FpSet:
    """{x + y} or {x - y} mod p over all pairs."""
    if a.field.p != b.field.p:
        raise FieldMismatchError(f"p = {a.field.p} vs p = {b.field.p}")
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    p = a.field.p
    out = set()
    if sign == "+":
        for x in a.elems:
            for y in b.elems:
                out.add((x + y) % p)
    else:
        for x in a.elems:
            for y in b.elems:
                out.add((x - y) % p)
    return FpSet(a.field, tuple(sorted(out)), "derived")
