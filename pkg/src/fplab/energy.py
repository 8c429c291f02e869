"""Exact additive energies and representation-function machinery.

All counts are integers produced by exact convolution over Z/p; floating
point appears only in the Fourier cross-check, which exists to bound the
error of the orthogonality identity, not to produce counts.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import FieldMismatchError, LengthOutOfRangeError, NotASubgroupError
from .field import PrimeField
from .sets import FpSet, symmetric_interval

_NUMPY_PAIR_LIMIT = 2048  # pairwise-matrix path capped at this set size


def _same_field(*sets):
    p = sets[0].field.p
    for s in sets[1:]:
        if s.field.p != p:
            raise FieldMismatchError(f"p = {p} vs p = {s.field.p}")


@dataclass(frozen=True)
class MultiplicityFn:
    """Sparse table value -> count for a representation function."""

    field: PrimeField
    kind: str  # "difference" | "ratio" | "sum"
    table: dict
    meta: dict = dc_field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.table.values())

    def __call__(self, x: int) -> int:
        return self.table.get(x % self.field.p, 0)


def diff_multiplicity(a: FpSet) -> MultiplicityFn:
    """Counts of x as a difference u - v with u, v in the set."""
    p = a.field.p
    n = len(a)
    if 64 <= n <= _NUMPY_PAIR_LIMIT:
        arr = np.asarray(a.elems, dtype=np.int64)
        diffs = (arr[:, None] - arr[None, :]) % p
        counts = np.bincount(diffs.ravel(), minlength=p)
        table = {int(x): int(c) for x, c in enumerate(counts) if c}
    else:
        table = {}
        for u in a.elems:
            for v in a.elems:
                d = (u - v) % p
                table[d] = table.get(d, 0) + 1
    return MultiplicityFn(a.field, "difference", table)


def ratio_multiplicity(a: FpSet) -> MultiplicityFn:
    """Counts of x as a ratio u / v; zero denominators are skipped and tallied."""
    p = a.field.p
    table = {}
    skipped = 0
    for v in a.elems:
        if v == 0:
            skipped += len(a)
            continue
        vinv = a.field.inv(v)
        for u in a.elems:
            r = u * vinv % p
            table[r] = table.get(r, 0) + 1
    return MultiplicityFn(a.field, "ratio", table, {"skipped_pairs": skipped})


def additive_energy(a: FpSet) -> int:
    """Number of quadruples with u1 + u2 = v1 + v2, as the second moment of r_-."""
    return sum(c * c for c in diff_multiplicity(a).table.values())


def e3(u: FpSet, v: FpSet, w: FpSet) -> int:
    """Number of sextuples with u1 - u2 = v1 - v2 = w1 - w2."""
    _same_field(u, v, w)
    tu = diff_multiplicity(u).table
    tv = diff_multiplicity(v).table
    tw = diff_multiplicity(w).table
    # iterate the smallest support
    base = min((tu, tv, tw), key=len)
    others = [t for t in (tu, tv, tw) if t is not base]
    total = 0
    for x, c in base.items():
        total += c * others[0].get(x, 0) * others[1].get(x, 0)
    return total


def e3_bruteforce(u: FpSet, v: FpSet, w: FpSet) -> int:
    """Literal six-loop enumeration of the e3 equation; oracle only."""
    _same_field(u, v, w)
    p = u.field.p
    count = 0
    for u1 in u.elems:
        for u2 in u.elems:
            d = (u1 - u2) % p
            for v1 in v.elems:
                for v2 in v.elems:
                    if (v1 - v2) % p != d:
                        continue
                    for w1 in w.elems:
                        for w2 in w.elems:
                            if (w1 - w2) % p == d:
                                count += 1
    return count


def sum_counts(sets) -> list:
    """Dense table r[x] = number of tuples (u_1..u_k), u_i in sets[i], summing to x.

    Iterated cyclic convolution; exact integers throughout (int64 fast path
    guarded by a bound on the maximal possible count).
    """
    _same_field(*sets)
    p = sets[0].field.p
    bound = 1
    for s in sets:
        bound *= max(1, len(s))
    counts = np.zeros(p, dtype=np.int64)
    for x in sets[0].elems:
        counts[x] = 1
    use_numpy = bound < (1 << 62)
    if use_numpy:
        for s in sets[1:]:
            nxt = np.zeros(p, dtype=np.int64)
            for a in s.elems:
                nxt += np.roll(counts, a)
            counts = nxt
        return [int(c) for c in counts]
    acc = [0] * p
    for x in sets[0].elems:
        acc[x] = 1
    for s in sets[1:]:
        nxt = [0] * p
        for a in s.elems:
            for x in range(p):
                nxt[(x + a) % p] += acc[x]
        acc = nxt
    return acc


def kfold_multiplicity(sets) -> MultiplicityFn:
    """MultiplicityFn wrapper over sum_counts."""
    counts = sum_counts(sets)
    table = {x: c for x, c in enumerate(counts) if c}
    return MultiplicityFn(sets[0].field, "sum", table)


def t_k(sets, k: int = None) -> int:
    """Number of 2k-tuples with u_1 + ... + u_k = v_1 + ... + v_k.

    sets lists the k source sets (repeat a set for the symmetric energy);
    t_k([s, s]) is the additive energy.
    """
    sets = list(sets)
    if k is None:
        k = len(sets)
    if len(sets) != k or k < 1:
        raise ValueError(f"need k = len(sets) >= 1, got k={k}, len={len(sets)}")
    counts = sum_counts(sets)
    return sum(c * c for c in counts)


def t_k_fourier(sets) -> float:
    """(1/p) * sum_lambda prod_j |sum_{v in S_j} e_p(lambda v)|^2."""
    _same_field(*sets)
    fld = sets[0].field
    p = fld.p
    roots = fld.additive_roots()
    lam = np.arange(p, dtype=np.int64)
    prod = np.ones(p, dtype=np.float64)
    for s in sets:
        acc = np.zeros(p, dtype=np.complex128)
        for v in s.elems:
            acc += roots[(lam * v) % p]
        prod *= np.abs(acc) ** 2
    return float(prod.sum() / p)


def t_k_fourier_check(sets, k: int = None) -> float:
    """|t_k - its Fourier evaluation|; contract: below 1e-6 relative."""
    exact = t_k(sets, k)
    return abs(exact - t_k_fourier(sets))


@dataclass(frozen=True)
class CosetStats:
    """Interval statistics of the cosets of a multiplicative subgroup.

    Cosets C_j are ordered so the difference counts t_j are nonincreasing;
    c lists the sizes of the coset intersections with the symmetric interval
    under the same ordering.  r2_sum is the second moment of r_- over the
    punctured interval, n_ratio_pairs the number of interval pairs whose
    ratio falls in the subgroup.
    """

    field: PrimeField
    order: int
    h: int
    radius: int
    c: tuple
    t: tuple
    r2_sum: int
    n_ratio_pairs: int


def coset_interval_stats(group: FpSet, radius: int) -> CosetStats:
    """Per-coset counts c_j, t_j plus the derived sums for a subgroup."""
    if group.tag != "subgroup":
        raise NotASubgroupError(f"set tagged {group.tag!r}, need a subgroup")
    fld = group.field
    p = fld.p
    if radius < 0 or 2 * radius + 1 > p:
        raise LengthOutOfRangeError(f"radius {radius} too large for p = {p}")
    order = len(group)
    h = (p - 1) // order

    diffs = diff_multiplicity(group).table
    # coset of x is ind[x] mod h; representative of coset j is g^j
    t_raw = []
    rep = 1
    for _ in range(h):
        t_raw.append(diffs.get(rep, 0))
        rep = rep * fld.g % p

    window = [x for x in symmetric_interval(fld, radius).elems if x != 0]
    c_raw = [0] * h
    for x in window:
        c_raw[fld.ind[x] % h] += 1

    by_t = sorted(range(h), key=lambda j: (-t_raw[j], j))
    c = tuple(c_raw[j] for j in by_t)
    t = tuple(t_raw[j] for j in by_t)

    r2 = sum(diffs.get(x, 0) ** 2 for x in window)

    members = group.as_set()
    n_pairs = 0
    for y in window:
        yinv = fld.inv(y)
        for x in window:
            if x * yinv % p in members:
                n_pairs += 1

    return CosetStats(fld, order, h, radius, c, t, r2, n_pairs)
