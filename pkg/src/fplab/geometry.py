"""Lines, line-multiplicity spectra and collinear triples in F_p^2;
points, planes and incidence counts in F_p^3.

Line keys are canonical tuples: ("s", a, b) for y = a*x + b and ("v", c)
for x = c, which enumerates all p^2 + p lines exactly once.  A plane is a
tuple (n1, n2, n3, c) for n.z = c with the first nonzero n_i scaled to 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import (
    FieldMismatchError,
    PreconditionViolatedError,
    TooLargeError,
)
from .field import is_prime
from .sets import FpSet

GRAM_CAP = 7  # dense point-plane matrices above this are pointless at desk scale


# ---------------------------------------------------------------------------
# lines in F_p^2
# ---------------------------------------------------------------------------

def all_lines(p: int) -> list:
    """Every line of F_p^2 in canonical form (p^2 + p of them)."""
    lines = [("v", c) for c in range(p)]
    lines += [("s", a, b) for a in range(p) for b in range(p)]
    return lines


def lines_through(x: int, y: int, p: int) -> list:
    """The p + 1 lines through the point (x, y)."""
    out = [("v", x)]
    for a in range(p):
        out.append(("s", a, (y - a * x) % p))
    return out


def line_through(q, r, p: int):
    """Canonical line through two distinct points."""
    (x1, y1), (x2, y2) = q, r
    if q == r:
        raise ValueError("need two distinct points")
    if x1 == x2:
        return ("v", x1)
    a = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
    return ("s", a, (y1 - a * x1) % p)


class LineSpectrum:
    """Map line -> multiplicity against A x A, restricted to hit lines.

    Multiplicities of unstored lines are zero; the centered values
    f(line) = iota(line) - (#A)^2 / p are exact rationals.
    """

    __slots__ = ("field", "set_size", "counts")

    def __init__(self, field, set_size, counts):
        self.field = field
        self.set_size = set_size
        self.counts = counts

    @property
    def p(self) -> int:
        return self.field.p

    def iota(self, line) -> int:
        return self.counts.get(line, 0)

    def mean(self) -> Fraction:
        return Fraction(self.set_size * self.set_size, self.p)

    def f(self, line) -> Fraction:
        return Fraction(self.iota(line)) - self.mean()

    def total_lines(self) -> int:
        return self.p * self.p + self.p

    def zero_lines(self) -> int:
        return self.total_lines() - len(self.counts)

    def sum_iota(self) -> int:
        return sum(self.counts.values())

    def f_l2(self) -> Fraction:
        """Exact sum of |f(line)|^2 over all lines, zero-hit lines included."""
        m = self.mean()
        acc = sum((Fraction(c) - m) ** 2 for c in self.counts.values())
        return acc + self.zero_lines() * m * m


def line_spectrum(a: FpSet) -> LineSpectrum:
    """Multiplicity of every line against A x A.

    Built by walking the p + 1 line keys through each point of A x A, so the
    work is #A^2 * (p + 1) dictionary increments and never touches the full
    p^3 point-line incidence relation.
    """
    p = a.field.p
    counts = {}
    for x in a.elems:
        vkey = ("v", x)
        for y in a.elems:
            counts[vkey] = counts.get(vkey, 0) + 1
            for slope in range(p):
                key = ("s", slope, (y - slope * x) % p)
                counts[key] = counts.get(key, 0) + 1
    return LineSpectrum(a.field, len(a), counts)


def pair_spectrum_identity(a: FpSet, b: FpSet):
    """Both sides of  sum_l iota_A(l) iota_B(l) = (#A #B)^2 + p #(A^2 cap B^2)."""
    if a.field.p != b.field.p:
        raise FieldMismatchError(f"p = {a.field.p} vs p = {b.field.p}")
    p = a.field.p
    sa = line_spectrum(a)
    sb = line_spectrum(b)
    small, big = (sa, sb) if len(sa.counts) <= len(sb.counts) else (sb, sa)
    lhs = sum(c * big.counts.get(line, 0) for line, c in small.counts.items())
    common = len(a.as_set() & b.as_set())
    rhs = (len(a) * len(b)) ** 2 + p * common * common
    return lhs, rhs


def level_set_counts(a: FpSet, m):
    """Cardinalities of {l : M < iota <= 2M} and {l : |f| > M}, plus the
    report-only skeleton min(p #A^2 / M^2, #A^5 / M^4)."""
    if m <= 0:
        raise ValueError("M must be positive")
    mf = Fraction(m)
    spectrum = line_spectrum(a)
    l_count = sum(1 for c in spectrum.counts.values() if mf < c <= 2 * mf)
    mean = spectrum.mean()
    k_count = sum(1 for c in spectrum.counts.values() if abs(Fraction(c) - mean) > mf)
    if mean > mf:
        k_count += spectrum.zero_lines()
    n = len(a)
    mfl = float(mf)
    skeleton = min(a.field.p * n**2 / mfl**2, n**5 / mfl**4) if n else 0.0
    return l_count, k_count, skeleton


# ---------------------------------------------------------------------------
# collinear triples
# ---------------------------------------------------------------------------

def _triple_cross_from_spectra(a: FpSet, b: FpSet, c: FpSet) -> int:
    p = a.field.p
    specs = sorted(
        (line_spectrum(s) for s in (a, b, c)), key=lambda s: len(s.counts)
    )
    # joint sum over all lines; only lines hit by the smallest spectrum matter
    g3 = 0
    s0, s1, s2 = specs
    for line, c0 in s0.counts.items():
        c1 = s1.counts.get(line, 0)
        if not c1:
            continue
        c2 = s2.counts.get(line, 0)
        if c2:
            g3 += c0 * c1 * c2
    return _cross_from_joint(g3, a, b, c)


def _cross_from_joint(g3: int, a: FpSet, b: FpSet, c: FpSet) -> int:
    # Corrections to the joint line sum: drop horizontal and vertical lines
    # (their B/C points never differ in both coordinates) and, on slanted
    # lines, the coincident q_b = q_c pairs.  The latter reduces, through the
    # exact pair-spectrum identity for A against E = B cap C, to cardinality
    # arithmetic only.
    p = a.field.p
    na, nb, nc = len(a), len(b), len(c)
    i_abc = len(a.as_set() & b.as_set() & c.as_set())
    n_e = len(b.as_set() & c.as_set())
    axis = 2 * na * nb * nc * i_abc
    coincident = (na * n_e) ** 2 + p * i_abc * i_abc - 2 * na * n_e * i_abc
    return g3 - axis - coincident


def _triple_cross_from_ratios(a: FpSet, b: FpSet, c: FpSet) -> int:
    # T = sum_l R(l)^2 where R(l) counts (x, y, z) in A x B x C with
    # x - z = l * (y - z) and y != z; exact and O(#A #B #C).
    fld = a.field
    p = fld.p
    counts = [0] * p
    for y in b.elems:
        for z in c.elems:
            if y == z:
                continue
            inv_yz = fld.inv(y - z)
            for x in a.elems:
                counts[(x - z) * inv_yz % p] += 1
    return sum(r * r for r in counts)


def collinear_triples(
    a: FpSet, b: FpSet, c: FpSet, convention: str = "cross", method: str = "auto"
) -> int:
    """Number of solutions of (a1-c1)(b2-c2) = (a2-c2)(b1-c1) with
    b1 != c1, b2 != c2 (convention "cross"), or the number of point
    triples in A^2 x B^2 x C^2 lying on a common line, coincidences
    included (convention "geometric").

    Both conventions agree with their brute-force oracles; the two fast
    routes (line spectra for small p, ratio fibration otherwise) count the
    same quantity exactly.
    """
    if not (a.field.p == b.field.p == c.field.p):
        raise FieldMismatchError("sets live in different fields")
    p = a.field.p
    if method == "auto":
        build = (len(a) ** 2 + len(b) ** 2 + len(c) ** 2) * (p + 1)
        method = "spectrum" if build <= 300_000 else "ratio"
    if method == "spectrum":
        cross = _triple_cross_from_spectra(a, b, c)
    elif method == "ratio":
        cross = _triple_cross_from_ratios(a, b, c)
    else:
        raise ValueError(f"unknown method {method!r}")
    if convention == "cross":
        return cross
    if convention == "geometric":
        na, n_e = len(a), len(b.as_set() & c.as_set())
        i_abc = len(a.as_set() & b.as_set() & c.as_set())
        return cross + (na * n_e) ** 2 - 2 * na * n_e * i_abc + 2 * na * len(b) * len(c) * i_abc
    raise ValueError(f"unknown convention {convention!r}")


def collinear_triples_bruteforce(a: FpSet, b: FpSet, c: FpSet) -> int:
    """Literal enumeration of all sextuples for the cross convention."""
    p = a.field.p
    count = 0
    ae, be, ce = a.elems, b.elems, c.elems
    for b1 in be:
        for c1 in ce:
            if b1 == c1:
                continue
            k1 = (b1 - c1) % p
            for b2 in be:
                for c2 in ce:
                    if b2 == c2:
                        continue
                    k2 = (b2 - c2) % p
                    for a1 in ae:
                        lhs = (a1 - c1) * k2 % p
                        for a2 in ae:
                            if lhs == (a2 - c2) * k1 % p:
                                count += 1
    return count


def collinear_triples_geometric_bruteforce(a: FpSet, b: FpSet, c: FpSet) -> int:
    """Point-triple enumeration with a determinant collinearity test."""
    p = a.field.p
    pts_a = [(x, y) for x in a.elems for y in a.elems]
    pts_b = [(x, y) for x in b.elems for y in b.elems]
    pts_c = [(x, y) for x in c.elems for y in c.elems]
    count = 0
    for qa in pts_a:
        for qb in pts_b:
            for qc in pts_c:
                d = (qb[0] - qa[0]) * (qc[1] - qa[1]) - (qb[1] - qa[1]) * (
                    qc[0] - qa[0]
                )
                if d % p == 0:
                    count += 1
    return count


# ---------------------------------------------------------------------------
# planes and incidences in F_p^3
# ---------------------------------------------------------------------------

def normalize_plane(n1: int, n2: int, n3: int, c: int, p: int):
    """Canonical (n1, n2, n3, c) with the first nonzero n_i scaled to 1."""
    n1, n2, n3, c = n1 % p, n2 % p, n3 % p, c % p
    for lead in (n1, n2, n3):
        if lead:
            scale = pow(lead, p - 2, p)
            return (n1 * scale % p, n2 * scale % p, n3 * scale % p, c * scale % p)
    raise ValueError("normal vector must be nonzero")


def all_planes(p: int) -> list:
    """Every plane of F_p^3 in canonical form (p * (p^2 + p + 1) of them)."""
    planes = []
    for b in range(p):
        for c in range(p):
            planes.extend((1, b, c, d) for d in range(p))
    for c in range(p):
        planes.extend((0, 1, c, d) for d in range(p))
    planes.extend((0, 0, 1, d) for d in range(p))
    return planes


def plane_contains(plane, point, p: int) -> bool:
    n1, n2, n3, c = plane
    x, y, z = point
    return (n1 * x + n2 * y + n3 * z - c) % p == 0


def _incidence_matrix(p: int, points, planes) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64)
    pl = np.asarray(planes, dtype=np.int64)
    lhs = pts @ pl[:, :3].T  # (Q, P)
    return ((lhs - pl[:, 3][None, :]) % p == 0)


def incidence_count(p: int, points, planes):
    """Total point-plane incidences, plus the exact residual against the
    mean count #Q #Pi / p."""
    if len(set(points)) != len(points):
        raise ValueError("points must be deduplicated")
    if len(set(planes)) != len(planes):
        raise ValueError("planes must be deduplicated")
    if not points or not planes:
        return 0, Fraction(0)
    count = int(_incidence_matrix(p, points, planes).sum())
    residual = Fraction(count) - Fraction(len(points) * len(planes), p)
    return count, residual


def gram_structure_check(p: int, cap: int = GRAM_CAP) -> int:
    """Max deviation of G G^t from p^2 Id + (p+1) 1 over the full
    point/plane incidence matrix; the contract is zero."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > cap:
        raise TooLargeError(f"p = {p} exceeds the dense-matrix cap {cap}")
    points = [(x, y, z) for x in range(p) for y in range(p) for z in range(p)]
    planes = all_planes(p)
    m = _incidence_matrix(p, points, planes).astype(np.int64)
    gram = m @ m.T
    expected = np.full(gram.shape, p + 1, dtype=np.int64)
    np.fill_diagonal(expected, p * p + p + 1)
    return int(np.abs(gram - expected).max())


def max_collinear_points_3d(points, p: int) -> int:
    """Largest number of the given 3D points on a single line."""
    n = len(points)
    if n <= 1:
        return n
    pair_counts = {}
    for i in range(n):
        qi = points[i]
        for j in range(i + 1, n):
            qj = points[j]
            d = tuple((qj[k] - qi[k]) % p for k in range(3))
            pivot = next(k for k in range(3) if d[k])
            scale = pow(d[pivot], p - 2, p)
            d = tuple(v * scale % p for v in d)
            t = qi[pivot]
            base = tuple((qi[k] - t * d[k]) % p for k in range(3))
            key = (d, base)
            pair_counts[key] = pair_counts.get(key, 0) + 1
    best = max(pair_counts.values())
    m = (1 + isqrt(1 + 8 * best)) // 2
    assert m * (m - 1) // 2 == best
    return m


@dataclass(frozen=True)
class IncidenceReport:
    n_points: int
    n_planes: int
    k_collinear: int
    incidences: int
    residual: Fraction
    skeleton: float
    ratio: float


def misha_residual_report(p: int, points, planes) -> IncidenceReport:
    """Residual of the incidence count against its mean, compared (report
    only) with the skeleton sqrt(#Q) #Pi + k #Q."""
    if len(points) > len(planes):
        raise PreconditionViolatedError("need #points <= #planes")
    count, residual = incidence_count(p, points, planes)
    k = max_collinear_points_3d(points, p)
    q, pi = len(points), len(planes)
    skeleton = q**0.5 * pi + k * q
    ratio = float(abs(residual)) / skeleton if skeleton else 0.0
    return IncidenceReport(q, pi, k, count, residual, skeleton, ratio)
