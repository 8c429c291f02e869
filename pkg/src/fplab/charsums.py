"""Bilinear character sums, the amplification transform, and complete
product character sums.

The bilinear sum is sum_{s in S} sum_{x in I} alpha_s beta_x chi(s + x)
with weights in the closed unit disk.  The amplification transform
substitutes x -> x + y*z over a prime window y in [Y, 2Y] and a shift range
z in (Z, 2Z], which turns the inner sums into complete sums over F_p whose
size the Weil bound controls.
"""

import itertools
from dataclasses import dataclass
from math import isqrt, sqrt

import numpy as np

from .errors import (
    EmptyPrimeWindowError,
    FieldMismatchError,
    InadmissibleYZError,
    SupportMismatchError,
    TooLargeError,
    ZeroDenominatorError,
)
from .field import Character, PrimeField
from .sets import FpSet, poly_eval, primes_upto, symmetric_interval

_UNIT_SLACK = 1e-12
_SIGMA_CAP = 2048


@dataclass(frozen=True)
class WeightVector:
    """Complex weights indexed by residues (or shift values), |w| <= 1."""

    values: dict

    def __post_init__(self):
        for k, v in self.values.items():
            if abs(v) > 1 + _UNIT_SLACK:
                raise ValueError(f"weight at {k} leaves the unit disk: {v}")

    @classmethod
    def unit(cls, keys) -> "WeightVector":
        return cls({k: 1.0 + 0j for k in keys})

    def __getitem__(self, k) -> complex:
        return self.values[k]

    def covers(self, keys) -> bool:
        return all(k in self.values for k in keys)

    def array(self, keys) -> np.ndarray:
        return np.array([self.values[k] for k in keys], dtype=np.complex128)


def _check_supports(s_set: FpSet, x_set: FpSet, alpha, beta):
    if s_set.field.p != x_set.field.p:
        raise FieldMismatchError("weight sum across two different fields")
    if alpha is not None and not alpha.covers(s_set.elems):
        raise SupportMismatchError("alpha does not cover the outer set")
    if beta is not None and not beta.covers(x_set.elems):
        raise SupportMismatchError("beta does not cover the inner set")


def _inner_sums(chi: Character, s_set: FpSet, x_set: FpSet, beta) -> np.ndarray:
    """sum_x beta_x chi(s + x) for every s, as a complex vector."""
    p = chi.field.p
    tab = chi.values()
    xs = np.asarray(x_set.elems, dtype=np.int64)
    bv = beta.array(x_set.elems) if beta is not None else np.ones(len(xs))
    out = np.empty(len(s_set.elems), dtype=np.complex128)
    for i, s in enumerate(s_set.elems):
        out[i] = np.dot(bv, tab[(s + xs) % p])
    return out


def bilinear_sum(
    chi: Character, s_set: FpSet, x_set: FpSet, alpha=None, beta=None
) -> complex:
    """sum_s sum_x alpha_s beta_x chi(s + x); unit weights by default."""
    _check_supports(s_set, x_set, alpha, beta)
    if not len(s_set) or not len(x_set):
        return 0j
    inner = _inner_sums(chi, s_set, x_set, beta)
    if alpha is None:
        return complex(inner.sum())
    av = alpha.array(s_set.elems)
    return complex(np.dot(av, inner))


def modulus_sum(chi: Character, s_set: FpSet, x_set: FpSet, beta=None) -> float:
    """sum_s |sum_x beta_x chi(s + x)|, the one-sided absolute sum."""
    _check_supports(s_set, x_set, None, beta)
    if not len(s_set) or not len(x_set):
        return 0.0
    return float(np.abs(_inner_sums(chi, s_set, x_set, beta)).sum())


def optimal_alpha(chi: Character, s_set: FpSet, x_set: FpSet, beta=None) -> WeightVector:
    """Unimodular outer weights aligning every inner sum's phase, so that
    |bilinear_sum| meets modulus_sum."""
    inner = _inner_sums(chi, s_set, x_set, beta)
    vals = {}
    for s, w in zip(s_set.elems, inner):
        vals[s] = complex(w.conjugate() / abs(w)) if abs(w) > 0 else 1.0 + 0j
    return WeightVector(vals)


def prime_poly_modulus_sum(chi: Character, coeffs, q_bound: int, r_bound: int) -> float:
    """sum over primes q <= Q of |sum over primes r <= R of chi(f(q) + r)|.

    Evaluated through the polynomial-image fibration: group the outer primes
    by f(q) mod p, then take one inner sum per fiber value.
    """
    p = chi.field.p
    fibers = {}
    for q in primes_upto(q_bound):
        v = poly_eval([c % p for c in coeffs], q % p, p)
        fibers[v] = fibers.get(v, 0) + 1
    if not fibers:
        return 0.0
    tab = chi.values()
    rs = np.asarray([r % p for r in primes_upto(r_bound)], dtype=np.int64)
    if rs.size == 0:
        return 0.0
    total = 0.0
    for v, mult in sorted(fibers.items()):
        total += mult * abs(complex(tab[(v + rs) % p].sum()))
    return total


# ---------------------------------------------------------------------------
# amplification transform
# ---------------------------------------------------------------------------

def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0, k >= 1")
    if n == 0:
        return 0
    x = int(round(n ** (1.0 / k)))
    while x > 0 and x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


@dataclass(frozen=True)
class AmplificationParams:
    """Amplification step parameters: Hoelder exponent r, prime window
    [y, 2y], shift range (z, 2z], unimodular shift weights eta."""

    r: int
    y: int
    z: int
    eta: WeightVector = None
    flags: tuple = ()

    def __post_init__(self):
        if self.r < 1 or self.y < 1 or self.z < 1:
            raise ValueError("r, y, z must be positive")
        if self.eta is not None and not self.eta.covers(self.shift_range()):
            raise SupportMismatchError("eta does not cover (z, 2z]")

    def shift_range(self):
        return range(self.z + 1, 2 * self.z + 1)

    def eta_or_unit(self) -> WeightVector:
        return self.eta if self.eta is not None else WeightVector.unit(self.shift_range())

    @classmethod
    def defaults(cls, field: PrimeField, x_radius: int, r: int) -> "AmplificationParams":
        """Y ~ 2X p^(-1/r), Z = floor(p^(1/r)), clamped so that 4YZ <= X and
        the prime window stays below sqrt(p); clamps are flagged."""
        p = field.p
        flags = []
        z0 = max(1, _iroot(p, r))
        z = min(z0, max(1, x_radius // 4))
        if z != z0:
            flags.append("z_clamped")
        y0 = max(1, int(2 * x_radius * p ** (-1.0 / r)))
        y_adm = x_radius // (4 * z)
        y_sqrt = max(1, isqrt(p) // 2)
        y = min(y0, y_adm, y_sqrt)
        if y < 1:
            raise InadmissibleYZError(
                f"no admissible Y: x_radius={x_radius}, z={z} force 4YZ > X"
            )
        if y != y0:
            flags.append("y_clamped")
        return cls(r, y, z, None, tuple(flags))


def prime_window(params: AmplificationParams, p: int) -> list:
    """Primes of [y, 2y] reduced mod p (all nonzero residues required)."""
    qs = [q for q in primes_upto(2 * params.y) if q >= params.y]
    if not qs:
        raise EmptyPrimeWindowError(f"no primes in [{params.y}, {2 * params.y}]")
    for q in qs:
        if q % p == 0:
            raise ZeroDenominatorError(f"window prime {q} vanishes mod {p}")
    return [q % p for q in qs]


@dataclass(frozen=True)
class MultiplicityMap:
    """Sparse map (lambda, mu) -> number of (s, t, x, y) with s != t,
    (s+x)/y = lambda and (t+x)/y = mu."""

    field: PrimeField
    nu: dict
    n_source: int
    x_radius: int
    window: tuple

    @property
    def total(self) -> int:
        return sum(self.nu.values())

    @property
    def second_moment(self) -> int:
        return sum(c * c for c in self.nu.values())

    def expected_total(self) -> int:
        return self.n_source * (self.n_source - 1) * (2 * self.x_radius + 1) * len(self.window)


def amplification_map(s_set: FpSet, x_radius: int, params: AmplificationParams) -> MultiplicityMap:
    """The full sparse multiplicity map of the amplification substitution."""
    fld = s_set.field
    p = fld.p
    if 4 * params.y * params.z > x_radius:
        raise InadmissibleYZError(
            f"4YZ = {4 * params.y * params.z} exceeds X = {x_radius}"
        )
    window = prime_window(params, p)
    interval = symmetric_interval(fld, x_radius).elems
    nu = {}
    elems = s_set.elems
    for y in window:
        yinv = fld.inv(y)
        for x in interval:
            vals = [(s + x) * yinv % p for s in elems]
            for i, lam in enumerate(vals):
                for j, mu in enumerate(vals):
                    if i == j:
                        continue
                    key = (lam, mu)
                    nu[key] = nu.get(key, 0) + 1
    return MultiplicityMap(fld, nu, len(elems), x_radius, tuple(window))


def count_n(s_set: FpSet, x_set: FpSet, y_set: FpSet) -> int:
    """Solutions of (x1+s1)/y1 = (x2+s2)/y2 and (x1+t1)/y1 = (x2+t2)/y2
    with s1 != t1, s2 != t2, counted through the (lambda, mu) fibration."""
    fld = s_set.field
    p = fld.p
    if s_set.field.p != x_set.field.p or s_set.field.p != y_set.field.p:
        raise FieldMismatchError("sets live in different fields")
    if 0 in y_set.as_set():
        raise ZeroDenominatorError("denominator set contains 0")
    fibre = {}
    elems = s_set.elems
    for y in y_set.elems:
        yinv = fld.inv(y)
        for x in x_set.elems:
            vals = [(x + s) * yinv % p for s in elems]
            for i, lam in enumerate(vals):
                for j, mu in enumerate(vals):
                    if i == j:
                        continue
                    key = (lam, mu)
                    fibre[key] = fibre.get(key, 0) + 1
    return sum(c * c for c in fibre.values())


def count_n_bruteforce(s_set: FpSet, x_set: FpSet, y_set: FpSet) -> int:
    """Pairwise enumeration of the defining system; oracle for count_n."""
    p = s_set.field.p
    if 0 in y_set.as_set():
        raise ZeroDenominatorError("denominator set contains 0")
    tuples = [
        (s, t, x, y)
        for s in s_set.elems
        for t in s_set.elems
        if s != t
        for x in x_set.elems
        for y in y_set.elems
    ]
    count = 0
    for s1, t1, x1, y1 in tuples:
        a1 = (x1 + s1) % p
        b1 = (x1 + t1) % p
        for s2, t2, x2, y2 in tuples:
            if a1 * y2 % p == (x2 + s2) * y1 % p and b1 * y2 % p == (x2 + t2) * y1 % p:
                count += 1
    return count


# ---------------------------------------------------------------------------
# complete product sums and sigma
# ---------------------------------------------------------------------------

def complete_product_sum(chi: Character, shifts) -> complex:
    """sum over lambda in F_p of prod_i chi(lambda + z_i) * conj(chi)(lambda + z_{r+i}).

    shifts lists the 2r shift values, first the r plain ones then the r
    conjugated ones.  Terms where any argument vanishes contribute 0.
    """
    shifts = tuple(shifts)
    if len(shifts) % 2 or not shifts:
        raise ValueError("need an even, positive number of shifts")
    r = len(shifts) // 2
    p = chi.field.p
    n = p - 1
    exps = chi.exponents()
    lam = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    valid = np.ones(p, dtype=bool)
    for i, z in enumerate(shifts):
        e = exps[(lam + z) % p]
        valid &= e >= 0
        acc += e if i < r else -e
    roots = chi.field.unit_roots()
    return complex(roots[acc[valid] % n].sum())


def weil_applicable(chi: Character, shifts) -> bool:
    """True when the shifted product is not a perfect power of order ord(chi),
    i.e. some shift's multiplicity difference is nonzero mod the order.
    Permutation-equal halves are always degenerate."""
    if chi.is_principal:
        return False
    shifts = tuple(shifts)
    r = len(shifts) // 2
    d = chi.order
    p = chi.field.p
    mult = {}
    for z in shifts[:r]:
        mult[z % p] = mult.get(z % p, 0) + 1
    for z in shifts[r:]:
        mult[z % p] = mult.get(z % p, 0) - 1
    return any(v % d for v in mult.values())


def weil_bound(p: int, r: int) -> float:
    """(2r - 1) sqrt(p), the complete-sum bound for nondegenerate products."""
    return (2 * r - 1) * sqrt(p)


def sigma_total(chi: Character, params: AmplificationParams) -> float:
    """sigma = sum over (lambda, mu) in F_p^2 of
    |sum_z eta_z chi(lambda + z) conj(chi)(mu + z)|^(2r), full enumeration."""
    p = chi.field.p
    if p > _SIGMA_CAP:
        raise TooLargeError(f"sigma enumeration needs p <= {_SIGMA_CAP}, got {p}")
    zs = list(params.shift_range())
    eta = params.eta_or_unit().array(zs)
    tab = chi.values()
    lam = np.arange(p, dtype=np.int64)
    cols = np.stack([tab[(lam + z) % p] for z in zs], axis=1)  # (p, Z)
    inner = (cols * eta[None, :]) @ cols.conj().T  # (p, p): rows lambda, cols mu
    return float((np.abs(inner) ** (2 * params.r)).sum())


def sigma_via_expansion(chi: Character, params: AmplificationParams) -> float:
    """sigma evaluated in the opposite order: expand the 2r-th power into
    shift tuples and reuse complete product sums.  Expensive (Z^(2r) tuples);
    exists as an independent route for cross-checking sigma_total."""
    r = params.r
    zs = list(params.shift_range())
    if len(zs) ** (2 * r) > 4_000_000:
        raise TooLargeError("expansion too large; shrink Z or r")
    eta = params.eta_or_unit()
    total = 0j
    for tup in itertools.product(zs, repeat=2 * r):
        phase = 1.0 + 0j
        for z in tup[:r]:
            phase *= eta[z]
        for z in tup[r:]:
            phase *= eta[z].conjugate()
        w = complete_product_sum(chi, tup)
        total += phase * (w * w.conjugate())
    return float(total.real)


def sigma_skeleton(p: int, z: int, r: int) -> float:
    """Z^(2r) p + Z^r p^2 with the implied constant stripped."""
    return float(z ** (2 * r) * p + z**r * p * p)
