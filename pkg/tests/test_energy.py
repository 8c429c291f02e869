import math
import random

import pytest

from fplab.errors import (
    FieldMismatchError,
    LengthOutOfRangeError,
    NotASubgroupError,
)
from fplab.energy import (
    additive_energy,
    coset_interval_stats,
    diff_multiplicity,
    e3,
    e3_bruteforce,
    kfold_multiplicity,
    ratio_multiplicity,
    t_k,
    t_k_fourier,
    t_k_fourier_check,
)
from fplab.field import build_field
from fplab.sets import (
    from_elements,
    interval,
    random_set,
    subgroup,
    symmetric_interval,
)


def test_diff_multiplicity_examples():
    f7 = build_field(7)
    assert diff_multiplicity(from_elements(f7, [0])).table == {0: 1}
    assert diff_multiplicity(from_elements(f7, [0, 1])).table == {0: 2, 1: 1, 6: 1}
    perfect = diff_multiplicity(from_elements(f7, [1, 2, 4])).table
    assert perfect == {0: 3, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1}


def test_diff_multiplicity_total_and_numpy_path():
    fld = build_field(257)
    a = random_set(fld, 80, seed=3)  # size 80 takes the pairwise-matrix path
    mf = diff_multiplicity(a)
    assert mf.total == len(a) ** 2
    slow = {}
    for u in a.elems:
        for v in a.elems:
            d = (u - v) % 257
            slow[d] = slow.get(d, 0) + 1
    assert mf.table == slow


def test_additive_energy_examples():
    f11 = build_field(11)
    assert additive_energy(from_elements(f11, [0])) == 1
    assert additive_energy(from_elements(f11, [0, 1])) == 6
    assert additive_energy(from_elements(f11, [0, 1, 2])) == 19


def test_additive_energy_equals_sum_form():
    # second moment of the difference counts = quadruples with u1+u2 = v1+v2
    fld = build_field(13)
    rng = random.Random(5)
    for _ in range(10):
        a = random_set(fld, rng.randint(1, 8), rng.randrange(2**31))
        direct = sum(
            1
            for u1 in a for u2 in a for v1 in a for v2 in a
            if (u1 + u2) % 13 == (v1 + v2) % 13
        )
        assert additive_energy(a) == direct


def test_e3_examples():
    f7 = build_field(7)
    z = from_elements(f7, [0])
    assert e3(z, z, z) == 1
    s = from_elements(f7, [0, 1])
    assert e3(s, s, s) == 10


def test_e3_against_bruteforce():
    rng = random.Random(11)
    for p in (7, 13, 31):
        fld = build_field(p)
        for _ in range(4):
            mk = lambda: random_set(fld, rng.randint(1, 6), rng.randrange(2**31))
            u, v, w = mk(), mk(), mk()
            assert e3(u, v, w) == e3_bruteforce(u, v, w)
    with pytest.raises(FieldMismatchError):
        e3(z3 := from_elements(build_field(3), [1]), z3, from_elements(build_field(5), [1]))


def test_t_k_examples():
    f7 = build_field(7)
    s = from_elements(f7, [0, 1])
    assert t_k([s, s]) == additive_energy(s)
    assert t_k([s, s, s]) == 20  # r = (1,3,3,1), sum of squares
    singles = [from_elements(f7, [2]), from_elements(f7, [3])]
    assert t_k(singles) == 1
    with pytest.raises(ValueError):
        t_k([s, s], k=3)


def test_t_k_matches_brute_quadruples():
    fld = build_field(11)
    rng = random.Random(2)
    for _ in range(5):
        a = random_set(fld, rng.randint(1, 6), rng.randrange(2**31))
        b = random_set(fld, rng.randint(1, 6), rng.randrange(2**31))
        direct = sum(
            1
            for u1 in a for u2 in b for v1 in a for v2 in b
            if (u1 + u2) % 11 == (v1 + v2) % 11
        )
        assert t_k([a, b]) == direct


def test_kfold_multiplicity_total():
    fld = build_field(13)
    sets = [random_set(fld, n, seed=n) for n in (3, 4, 5)]
    mf = kfold_multiplicity(sets)
    assert mf.total == 3 * 4 * 5


def test_fourier_examples():
    f7 = build_field(7)
    single = from_elements(f7, [4])
    assert t_k_fourier_check([single, single]) < 1e-9
    s = from_elements(f7, [0, 1])
    assert abs(t_k_fourier([s, s, s]) - 20) < 1e-6
    rng = random.Random(8)
    for p in (5, 31, 101):
        fld = build_field(p)
        sets = [
            random_set(fld, rng.randint(1, min(p - 1, 10)), rng.randrange(2**31))
            for _ in range(rng.randint(2, 4))
        ]
        exact = t_k(sets)
        assert t_k_fourier_check(sets) < 1e-6 * exact


def test_ratio_multiplicity_examples():
    f7 = build_field(7)
    assert ratio_multiplicity(from_elements(f7, [1])).table == {1: 1}
    assert ratio_multiplicity(from_elements(f7, [1, 2, 4]))(2) == 3
    mf = ratio_multiplicity(from_elements(f7, [0, 1]))
    assert mf.table == {0: 1, 1: 1}
    assert mf.meta["skipped_pairs"] == 2


def test_multiplicity_totals():
    fld = build_field(31)
    rng = random.Random(9)
    for _ in range(10):
        a = random_set(fld, rng.randint(1, 12), rng.randrange(2**31))
        assert diff_multiplicity(a).total == len(a) ** 2
        nz = len(a) - (1 if 0 in a.as_set() else 0)
        assert ratio_multiplicity(a).total == len(a) * nz


# ---------------------------------------------------------------------------
# inequality suite (exact integer assertions)
# ---------------------------------------------------------------------------

def _instances(seed=4):
    rng = random.Random(seed)
    out = []
    for p in (13, 31, 61):
        fld = build_field(p)
        out.append(random_set(fld, rng.randint(2, 10), rng.randrange(2**31)))
        out.append(interval(fld, rng.randrange(p), rng.randint(2, 8)))
    out.append(subgroup(build_field(61), 12))
    out.append(subgroup(build_field(31), 5))
    return out


def test_e3_trivial_bound_exact():
    rng = random.Random(6)
    for p in (13, 31):
        fld = build_field(p)
        for _ in range(6):
            mk = lambda: random_set(fld, rng.randint(1, 8), rng.randrange(2**31))
            u, v, w = mk(), mk(), mk()
            cards = sorted((len(u), len(v), len(w)), reverse=True)
            assert e3(u, v, w) <= cards[0] * cards[1] * cards[2] * cards[2]


def test_e3_interval_energy_bound_exact():
    # e3(S, S, I) <= #I * E+(S): every interval difference count is <= #I
    for s in _instances():
        fld = s.field
        x_len = min(6, (fld.p - 1) // 2)
        iv = interval(fld, 0, x_len)
        assert e3(s, s, iv) <= len(iv) * additive_energy(s)


def test_energy_tk_moment_chain_exact():
    # (E+)^(k-1) <= T_k * (#S)^(k-2) for k = 3, 4
    for s in _instances(seed=10):
        e2 = additive_energy(s)
        for k in (3, 4):
            assert e2 ** (k - 1) <= t_k([s] * k) * len(s) ** (k - 2)


def test_holder_chain_log_form():
    # T_k(S1..Sk) <= prod_{j>=2} T_k(S1, Sj, ..., Sj)^{1/(k-1)}
    rng = random.Random(12)
    fld = build_field(31)
    for k in (3, 4):
        for _ in range(4):
            sets = [
                random_set(fld, rng.randint(2, 7), rng.randrange(2**31))
                for _ in range(k)
            ]
            lhs = math.log(t_k(sets))
            rhs = sum(
                math.log(t_k([sets[0]] + [sets[j]] * (k - 1))) for j in range(1, k)
            ) / (k - 1)
            assert lhs <= rhs + 1e-9 * max(1.0, abs(rhs))


# ---------------------------------------------------------------------------
# coset statistics
# ---------------------------------------------------------------------------

def test_coset_stats_trivial_subgroup():
    f7 = build_field(7)
    stats = coset_interval_stats(subgroup(f7, 1), 1)
    assert stats.n_ratio_pairs == 2  # (1,1) and (6,6)
    assert stats.r2_sum == 0
    assert stats.order == 1 and stats.h == 6


def test_coset_stats_bruteforce_cross_check():
    f7 = build_field(7)
    g = subgroup(f7, 3)
    stats = coset_interval_stats(g, 3)
    # brute force every field from the definitions
    p = 7
    window = [x % p for x in range(-3, 4) if x != 0]
    members = set(g.elems)
    diffs = {}
    for a in g:
        for b in g:
            d = (a - b) % p
            diffs[d] = diffs.get(d, 0) + 1
    r2 = sum(diffs.get(x, 0) ** 2 for x in window)
    assert stats.r2_sum == r2
    n_pairs = sum(
        1
        for x in window
        for y in window
        if x * pow(y, p - 2, p) % p in members
    )
    assert stats.n_ratio_pairs == n_pairs
    cosets = {}
    for x in range(1, p):
        key = frozenset(x * u % p for u in g)
        cosets.setdefault(key, []).append(x)
    want_pairs = sorted(
        (diffs.get(xs[0], 0), sum(1 for x in xs if x in set(window)))
        for key, xs in cosets.items()
    )
    got_pairs = sorted(zip(stats.t, stats.c))
    assert want_pairs == got_pairs


def test_coset_stats_invariants():
    for p, order, radius in ((7, 3, 3), (31, 5, 6), (61, 12, 10), (61, 60, 14)):
        fld = build_field(p)
        g = subgroup(fld, order)
        stats = coset_interval_stats(g, radius)
        assert list(stats.t) == sorted(stats.t, reverse=True)
        assert sum(stats.c) == 2 * radius
        assert stats.order * sum(stats.t) == stats.order**2 - stats.order
        # r2_sum decomposes over cosets
        assert stats.r2_sum == sum(cj * tj * tj for cj, tj in zip(stats.c, stats.t))
        # Cauchy step and the coset-pair identity, both exact
        assert stats.r2_sum**2 <= sum(t**4 for t in stats.t) * sum(
            c * c for c in stats.c
        )
        assert sum(c * c for c in stats.c) <= stats.n_ratio_pairs


def test_coset_stats_rejects():
    f7 = build_field(7)
    with pytest.raises(NotASubgroupError):
        coset_interval_stats(from_elements(f7, [1, 2, 4]), 2)
    with pytest.raises(LengthOutOfRangeError):
        coset_interval_stats(subgroup(f7, 3), 4)


def test_translation_invariance_of_e3():
    fld = build_field(61)
    s = random_set(fld, 9, seed=21)
    ibar = symmetric_interval(fld, 5)
    base = e3(s, s, ibar)
    for a in (1, 17, 60):
        shifted = s.translate(a)
        assert e3(shifted, shifted, ibar) == base
