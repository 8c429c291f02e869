"""Bound-skeleton evaluators and exponent-region predicates.

Skeletons are the explicit bound expressions with implied constants and
p^{o(1)} factors stripped; comparisons against them are report-only ratios,
never assertions.  Region predicates are exact strict inequalities in the
exponents (zeta, xi) with X = p^zeta and S (or T) = p^xi.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateKError,
    DomainViolationError,
    InsufficientDataError,
    PreconditionViolatedError,
)

# piecewise breakpoints of the subgroup region, as exact rationals
_BP1 = Fraction(6, 25)
_BP2 = Fraction(10, 31)
_BP3 = Fraction(134, 361)


@dataclass(frozen=True)
class ExponentPoint:
    """A pair of exponents: interval length X = p^zeta, set size p^xi."""

    zeta: float
    xi: float
    d: int = None

    def __post_init__(self):
        if not (0 < self.zeta <= 1 and 0 < self.xi <= 1):
            raise DomainViolationError(
                f"exponents must lie in (0, 1], got zeta={self.zeta}, xi={self.xi}"
            )


def chang_region(pt: ExponentPoint) -> bool:
    """xi > (3k - 2 - 4k zeta) / (6k - 8) with k = floor(1/zeta)."""
    k = math.floor(1 / pt.zeta)
    if 6 * k - 8 <= 0:
        raise DegenerateKError(f"k = {k} degenerates the threshold denominator")
    return pt.xi > (3 * k - 2 - 4 * k * pt.zeta) / (6 * k - 8)


def karatsuba_region(pt: ExponentPoint) -> bool:
    """xi > (1 - zeta) / 2."""
    return pt.xi > (1 - pt.zeta) / 2


def subgroup_threshold(zeta: float):
    """Piecewise xi-threshold for nontrivial subgroup sums; None below 6/25."""
    if zeta <= _BP1 or zeta >= Fraction(1, 2):
        return None
    if zeta < _BP2:
        return 1 - 2.5 * zeta
    if zeta < _BP3:
        return (6 - 9 * zeta) / 16
    return (20 - 40 * zeta) / 31


def subgroup_region(pt: ExponentPoint) -> str:
    """Classify against the piecewise subgroup threshold.

    Returns "inside", "outside" or "out_of_domain" (zeta at or below 6/25,
    where the threshold meets the xi < 2/5 ceiling and the region is empty).
    """
    if not (pt.zeta < 0.5 and pt.xi < 0.4):
        raise DomainViolationError("need zeta < 1/2 and xi < 2/5")
    thr = subgroup_threshold(pt.zeta)
    if thr is None:
        return "out_of_domain"
    return "inside" if pt.xi > thr else "outside"


def subgroup_region_raw(pt: ExponentPoint) -> str:
    """The same region from the raw inequalities it was distilled from:
    (5z + 2x > 2 and z + x > 1/2) and (40z + 31x > 20  or
    (9z + 16x > 6 and 36z + 55x > 21))."""
    if not (pt.zeta < 0.5 and pt.xi < 0.4):
        raise DomainViolationError("need zeta < 1/2 and xi < 2/5")
    z, x = pt.zeta, pt.xi
    cond1 = 5 * z + 2 * x > 2 and z + x > 0.5
    cond2 = 40 * z + 31 * x > 20
    cond3 = 9 * z + 16 * x > 6 and 36 * z + 55 * x > 21
    return "inside" if cond1 and (cond2 or cond3) else "outside"


def subgroup_region_agreement(pt: ExponentPoint) -> bool:
    """True when the piecewise classification matches the raw conditions
    (out_of_domain counts as outside)."""
    piecewise = subgroup_region(pt)
    raw = subgroup_region_raw(pt)
    return (piecewise == "inside") == (raw == "inside")


def primes_region(pt: ExponentPoint) -> bool:
    """Nontriviality region for character sums over shifted prime values of
    a degree-d polynomial."""
    if pt.d is None or pt.d < 2:
        raise DomainViolationError("need a polynomial degree d >= 2")
    if pt.xi > min(0.5, 2 - 2 * pt.zeta):
        raise DomainViolationError("need xi <= min(1/2, 2 - 2 zeta)")
    z, x, d = pt.zeta, pt.xi, pt.d
    second = z + 2.5 * x > 1
    if d == 2:
        return 1.25 * z + 2 * x > 1 and second
    return (1 + 2.0 ** (-d + 1)) * z + 2 * x > 1 and second


# ---------------------------------------------------------------------------
# skeleton evaluators
# ---------------------------------------------------------------------------

def e3_trivial_bound(nu: int, nv: int, nw: int) -> int:
    """#U #V #W min(#U, #V, #W), the trivial ceiling for the triple energy."""
    return nu * nv * nw * min(nu, nv, nw)


def _check_thm11(p: int, s: int, x: int, r: int):
    if s < 1 or x < 1 or r < 1:
        raise PreconditionViolatedError("need S, X, r >= 1")
    if s * s * x > p * p:
        raise PreconditionViolatedError(f"violated: S^2 X <= p^2 (S={s}, X={x}, p={p})")
    if x * x >= p:
        raise PreconditionViolatedError(f"violated: X < p^{{1/2}} (X={x}, p={p})")
    if x**r < p:
        raise PreconditionViolatedError(f"violated: X >= p^{{1/r}} (X={x}, r={r}, p={p})")


def thm11_rhs(p: int, s: int, x: int, r: int, e3_value, epsilon: float = 0.0) -> float:
    """Bound skeleton S X (E3 p^{(r+1)/r} / (S^4 X^3) + p^{(r+2)/r} / (S X^{5/2})
    + p^{(r+2)/r} / (S^2 X^2))^{1/4r} p^eps + S^{1/2} X."""
    _check_thm11(p, s, x, r)
    t1 = e3_value * p ** ((r + 1) / r) / (s**4 * x**3)
    t2 = p ** ((r + 2) / r) / (s * x**2.5)
    t3 = p ** ((r + 2) / r) / (s * s * x * x)
    return s * x * (t1 + t2 + t3) ** (1 / (4 * r)) * p**epsilon + math.sqrt(s) * x


def cor12_rhs(p: int, s: int, x: int, r: int, epsilon: float = 0.0) -> float:
    """thm11_rhs with the triple energy replaced by its trivial plug-in
    min(S, X) S^2 X, which collapses the first term to M p^{(r+1)/r}/(S^2 X^2)."""
    return thm11_rhs(p, s, x, r, min(s, x) * s * s * x, epsilon)


def cor13_rhs(p: int, s: int, x: int, r: int, e2_value, epsilon: float = 0.0) -> float:
    """thm11_rhs with the triple energy replaced by X * E+(S)."""
    return thm11_rhs(p, s, x, r, x * e2_value, epsilon)


def tabc_skeletons(p: int, a: int, b: int, c: int):
    """The three collinear-triple deviation skeletons and their minimum:
    p*abc, (abc)^{3/2} + abc*Z, sqrt(p)(abc)^{7/6} + Z^4 with Z = max(a,b,c)."""
    if min(a, b, c) < 1:
        raise ValueError("cardinalities must be >= 1")
    abc = a * b * c
    z = max(a, b, c)
    s1 = float(p * abc)
    s2 = float(abc**1.5 + abc * z)
    s3 = float(math.sqrt(p) * abc ** (7 / 6) + z**4)
    return s1, s2, s3, min(s1, s2, s3)


def subgroup_e3_skeletons(p: int, t: int, x: int):
    """The two subgroup triple-energy skeletons, plus a flag raised when the
    standing assumption T <= p^{2/5} fails (row is then report-only noise)."""
    s1 = t ** (49 / 20) * x
    s2 = (
        t * t * x
        + t ** (4 / 3) * x**1.5
        + t ** (11 / 6) * x * x / math.sqrt(p)
        + t ** (41 / 24) * x**1.5 * p ** (-1 / 8)
    )
    flagged = t**5 > p * p
    return float(s1), float(s2), flagged


def poly_t_index(d: int) -> int:
    """Summand count of the generalized energy used for degree d: 3 for
    quadratics and cubics, 2^{d-2} + 1 beyond."""
    if d < 2:
        raise DomainViolationError("need d >= 2")
    return 3 if d == 2 else 2 ** (d - 2) + 1


def poly_energy_skeletons(p: int, x: int, d: int):
    """Skeletons for energies of polynomial images of [1, X], X <= p^{2/3}:
    (T-energy skeleton, additive-energy skeleton)."""
    if d < 2:
        raise DomainViolationError("need d >= 2")
    if x**3 > p * p:
        raise DomainViolationError(f"violated: X <= p^{{2/3}} (X={x}, p={p})")
    if d == 2:
        return float(x**4.5), float(x**2.75)
    return float(x ** (2 ** (d - 1) + 0.5)), float(x ** (3 - 0.5 ** (d - 1)))


# ---------------------------------------------------------------------------
# empirical exponent fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float  # rms of log-log residuals
    n: int


def exponent_fit(rows, quantity: str, driver: str) -> FitResult:
    """Least-squares slope of log(quantity) against log(driver).

    rows is any iterable of mappings; rows missing either key or with
    nonpositive values are dropped.  Requires at least 4 usable rows whose
    driver spans at least one decade.
    """
    xs, ys = [], []
    for row in rows:
        if quantity not in row or driver not in row:
            continue
        q, dr = row[quantity], row[driver]
        if q is None or dr is None or q <= 0 or dr <= 0:
            continue
        xs.append(math.log(dr))
        ys.append(math.log(q))
    if len(xs) < 4:
        raise InsufficientDataError(f"need >= 4 usable rows, have {len(xs)}")
    if max(xs) - min(xs) < math.log(10):
        raise InsufficientDataError("driver must span at least one decade")
    slope, intercept = np.polyfit(xs, ys, 1)
    fitted = slope * np.asarray(xs) + intercept
    residual = float(np.sqrt(np.mean((np.asarray(ys) - fitted) ** 2)))
    return FitResult(float(slope), float(intercept), residual, len(xs))
