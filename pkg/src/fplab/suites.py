"""Suite runners: exact-identity checks, oracle equalities, bound sweeps,
and exponent-region tables.

A suite is a pure function from a resolved configuration to a list of
ReportRow.  Randomness is derived per row from (seed, suite, p, index) so
suites reproduce regardless of execution order; sweep cells may run in a
process pool and are re-sorted before emission.
"""

import hashlib
import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import bounds, charsums, energy, geometry
from .field import build_field, character
from .report import ReportRow
from .sets import (
    FpSet,
    from_elements,
    interval,
    poly_image,
    primes_upto,
    random_set,
    subgroup,
    symmetric_interval,
)

ORACLE_SIZE_CAP = 8
ORACLE_PRIME_CAP = 31
AMP_SIZE_CAP = 6
AMP_RADIUS_CAP = 8


def subseed(master: int, *parts) -> int:
    """Stable 64-bit stream id for a row, independent of execution order."""
    text = "|".join(str(x) for x in (master, *parts))
    return int(hashlib.sha256(text.encode()).hexdigest()[:16], 16)


def _random_fpset(fld, size, seed) -> FpSet:
    return random_set(fld, size, seed)


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------

def run_identity_suite(cfg) -> list:
    rows = []
    seed = cfg["seed"]
    for p in cfg["primes"]:
        fld = build_field(p)
        for i in range(cfg["identity_trials"]):
            rng = random.Random(subseed(seed, "line", p, i))
            a = _random_fpset(fld, rng.randint(1, min(p, 10)), rng.randrange(2**31))
            spectrum = geometry.line_spectrum(a)
            lhs = spectrum.sum_iota()
            rhs = (p + 1) * len(a) ** 2
            rows.append(
                ReportRow(
                    "line_identity", p, f"n={len(a)};trial={i}", lhs, rhs,
                    None, "pass" if lhs == rhs else "fail",
                )
            )
        if p <= 31:
            for i in range(cfg["identity_trials"]):
                rng = random.Random(subseed(seed, "pair", p, i))
                a = _random_fpset(fld, rng.randint(1, min(p, 8)), rng.randrange(2**31))
                b = _random_fpset(fld, rng.randint(1, min(p, 8)), rng.randrange(2**31))
                lhs, rhs = geometry.pair_spectrum_identity(a, b)
                rows.append(
                    ReportRow(
                        "pair_identity", p, f"nA={len(a)};nB={len(b)};trial={i}",
                        lhs, rhs, None, "pass" if lhs == rhs else "fail",
                    )
                )
        for i in range(2):
            rng = random.Random(subseed(seed, "tkf", p, i))
            nsets = rng.randint(2, 3)
            sets_ = [
                _random_fpset(fld, rng.randint(1, min(p, 6)), rng.randrange(2**31))
                for _ in range(nsets)
            ]
            exact = energy.t_k(sets_)
            resid = energy.t_k_fourier_check(sets_)
            ok = resid < 1e-6 * max(exact, 1)
            rows.append(
                ReportRow(
                    "tk_fourier", p, f"k={nsets};trial={i}", resid, exact,
                    None, "pass" if ok else "fail",
                )
            )
    for p in (2, 3, 5):
        dev = geometry.gram_structure_check(p)
        rows.append(
            ReportRow("gram_structure", p, "full", dev, 0, None,
                      "pass" if dev == 0 else "fail")
        )
    amp_primes = [p for p in cfg["primes"] if 13 <= p <= 61] or [61]
    for i in range(cfg["amp_trials"]):
        rng = random.Random(subseed(seed, "amp", i))
        p = rng.choice(amp_primes)
        fld = build_field(p)
        n = rng.randint(2, min(AMP_SIZE_CAP, p - 1))
        radius = rng.randint(4, min(AMP_RADIUS_CAP, (p - 1) // 2))
        s = _random_fpset(fld, n, rng.randrange(2**31))
        params = charsums.AmplificationParams(r=1, y=rng.randint(1, radius // 4), z=1)
        m = charsums.amplification_map(s, radius, params)
        rows.append(
            ReportRow(
                "amp_total", p, f"n={n};X={radius};Y={params.y};trial={i}",
                m.total, m.expected_total(), None,
                "pass" if m.total == m.expected_total() else "fail",
            )
        )
        yset = from_elements(fld, m.window)
        n_fast = charsums.count_n(s, symmetric_interval(fld, radius), yset)
        rows.append(
            ReportRow(
                "amp_second_moment", p, f"n={n};X={radius};Y={params.y};trial={i}",
                m.second_moment, n_fast, None,
                "pass" if m.second_moment == n_fast else "fail",
            )
        )
    return rows


# ---------------------------------------------------------------------------
# oracle suite
# ---------------------------------------------------------------------------

def run_oracle_suite(cfg) -> list:
    rows = []
    seed = cfg["seed"]
    size_cap = cfg["oracle_max_size"]
    primes = [p for p in cfg["primes"] if p >= 5]
    for p in primes:
        if p > ORACLE_PRIME_CAP:
            rows.append(
                ReportRow("collinear_oracle", p, f"requested_p={p};reason=TooLarge",
                          None, None, None, "skip")
            )
            continue
        fld = build_field(p)
        for i in range(cfg["oracle_trials"]):
            rng = random.Random(subseed(seed, "tri", p, i))
            if size_cap > ORACLE_SIZE_CAP:
                rows.append(
                    ReportRow("collinear_oracle", p,
                              f"requested_size={size_cap};reason=TooLarge",
                              None, None, None, "skip")
                )
                break
            mk = lambda: _random_fpset(
                fld, rng.randint(1, min(p, size_cap)), rng.randrange(2**31)
            )
            a, b, c = mk(), mk(), mk()
            fast = geometry.collinear_triples(a, b, c)
            brute = geometry.collinear_triples_bruteforce(a, b, c)
            rows.append(
                ReportRow(
                    "collinear_oracle", p,
                    f"nA={len(a)};nB={len(b)};nC={len(c)};trial={i}",
                    fast, brute, None, "pass" if fast == brute else "fail",
                )
            )
        for i in range(cfg["oracle_trials"] // 2):
            rng = random.Random(subseed(seed, "e3o", p, i))
            mk = lambda: _random_fpset(
                fld, rng.randint(1, min(p, ORACLE_SIZE_CAP)), rng.randrange(2**31)
            )
            u, v, w = mk(), mk(), mk()
            fast = energy.e3(u, v, w)
            brute = energy.e3_bruteforce(u, v, w)
            rows.append(
                ReportRow(
                    "e3_oracle", p, f"nU={len(u)};nV={len(v)};nW={len(w)};trial={i}",
                    fast, brute, None, "pass" if fast == brute else "fail",
                )
            )
    for i in range(cfg["oracle_trials"] // 2):
        rng = random.Random(subseed(seed, "cno", i))
        p = rng.choice([q for q in primes if q <= 61] or [31])
        fld = build_field(p)
        s = _random_fpset(fld, rng.randint(2, min(p - 1, AMP_SIZE_CAP)), rng.randrange(2**31))
        radius = rng.randint(2, min(AMP_RADIUS_CAP, (p - 1) // 2))
        xset = symmetric_interval(fld, radius)
        ys = [q for q in (2, 3, 5, 7) if q < p][: rng.randint(1, 2)]
        yset = from_elements(fld, ys)
        fast = charsums.count_n(s, xset, yset)
        brute = charsums.count_n_bruteforce(s, xset, yset)
        rows.append(
            ReportRow(
                "count_n_oracle", p, f"nS={len(s)};X={radius};nY={len(ys)};trial={i}",
                fast, brute, None, "pass" if fast == brute else "fail",
            )
        )
    return rows


# ---------------------------------------------------------------------------
# sweep suite
# ---------------------------------------------------------------------------

def _sweep_cells(cfg) -> list:
    cells = []
    for p in cfg["sweep_primes"]:
        cells.append(("tabc", p))
        cells.append(("nsxy", p))
        cells.append(("subgroup", p))
        cells.append(("thm11", p))
        cells.append(("misha", p))
    if cfg["sweep_primes"]:
        cells.append(("poly", max(cfg["sweep_primes"])))
    return cells


def _cell_tabc(p, seed, epsilon):
    fld = build_field(p)
    rows, fits = [], []
    target = max(2, round(p**0.3))
    for i in range(3):
        rng = random.Random(subseed(seed, "sw_tabc", p, i))
        mk = lambda: _random_fpset(
            fld, rng.randint(max(1, target // 2), target), rng.randrange(2**31)
        )
        a, b, c = mk(), mk(), mk()
        t = geometry.collinear_triples(a, b, c)
        abc = len(a) * len(b) * len(c)
        dev = float(abs(Fraction(t) - Fraction(abc * abc, p)))
        skels = bounds.tabc_skeletons(p, len(a), len(b), len(c))[:3]
        base = f"nA={len(a)};nB={len(b)};nC={len(c)};trial={i}"
        for name, skel in zip(("flat_p", "three_halves", "seven_sixths"), skels):
            rows.append(
                ReportRow(
                    "sweep_tabc", p, f"{base};skel={name}",
                    dev, skel, dev / skel if skel else None, "report",
                )
            )
    return rows, fits


def _cell_misha(p, seed, epsilon):
    rows, fits = [], []
    rng = random.Random(subseed(seed, "sw_misha", p))
    n_points = min(40, p * p)
    points = set()
    while len(points) < n_points:
        points.add((rng.randrange(p), rng.randrange(p), rng.randrange(p)))
    planes = set()
    while len(planes) < 3 * n_points:
        normal = (rng.randrange(p), rng.randrange(p), rng.randrange(p))
        if normal == (0, 0, 0):
            continue
        planes.add(geometry.normalize_plane(*normal, rng.randrange(p), p))
    rep = geometry.misha_residual_report(p, sorted(points), sorted(planes))
    rows.append(
        ReportRow(
            "sweep_misha", p, f"Q={rep.n_points};Pi={rep.n_planes};k={rep.k_collinear}",
            float(abs(rep.residual)), rep.skeleton, rep.ratio, "report",
        )
    )
    return rows, fits


def _cell_nsxy(p, seed, epsilon):
    fld = build_field(p)
    rows, fits = [], []
    rng = random.Random(subseed(seed, "sw_nsxy", p))
    nS = min(max(4, round(p**0.35)), 24)
    x_len = min(max(4, round(p**0.4)), 48)
    y_bound = min(16, max(3, round(p**0.25)))
    if x_len * x_len > p or nS * nS * x_len > p * p:
        rows.append(ReportRow("sweep_nsxy", p, f"nS={nS};X={x_len};reason=precondition",
                               None, None, None, "skip"))
        return rows, fits
    s = _random_fpset(fld, nS, rng.randrange(2**31))
    xset = interval(fld, 0, x_len)
    ys = [q for q in primes_upto(y_bound) if q < p]
    if not ys:
        rows.append(ReportRow("sweep_nsxy", p, f"Y={y_bound};reason=empty_window",
                               None, None, None, "skip"))
        return rows, fits
    yset = from_elements(fld, ys)
    measured = charsums.count_n(s, xset, yset)
    e3v = energy.e3(s, s, xset)
    skeleton = y_bound * e3v + nS**3 * x_len**1.5 + nS**2 * x_len**2
    rows.append(
        ReportRow(
            "sweep_nsxy", p, f"nS={nS};X={x_len};Ybound={y_bound}",
            measured, skeleton, measured / skeleton, "report",
        )
    )
    return rows, fits


def _cell_subgroup(p, seed, epsilon):
    fld = build_field(p)
    rows, fits = [], []
    cap = round(p**0.4)
    divisors = [t for t in range(2, cap + 1) if (p - 1) % t == 0]
    if len(divisors) > 8:  # thin to ~log-spaced picks, keeping the extremes
        step = (len(divisors) - 1) / 7
        divisors = sorted({divisors[round(i * step)] for i in range(8)})
    x_len = max(3, round(p**0.3))
    for t in divisors:
        g = subgroup(fld, t)
        iv = interval(fld, 0, x_len)
        measured = energy.e3(g, g, iv)
        s1, s2, flagged = bounds.subgroup_e3_skeletons(p, t, x_len)
        base = f"T={t};X={x_len}" + (";flag=T_above_p25" if flagged else "")
        for name, skel in (("energy_49_20", s1), ("coset_sum", s2)):
            rows.append(
                ReportRow(
                    "sweep_subgroup", p, f"{base};skel={name}",
                    measured, skel, measured / skel, "report",
                )
            )
        fits.append({"family": "subgroup_e3", "p": p, "T": t, "measured": measured})
    return rows, fits


def _cell_poly(p, seed, epsilon):
    fld = build_field(p)
    rows, fits = [], []
    rng = random.Random(subseed(seed, "sw_poly", p))
    for d, coeffs in ((2, [1, 1, 1]), (3, [2, 0, 1, 1])):
        k = bounds.poly_t_index(d)
        for x_len in (8, 16, 32, 64, 128):
            if x_len**3 > p * p or x_len >= p:
                continue
            img = poly_image(coeffs, interval(fld, 0, x_len))
            e2 = energy.additive_energy(img)
            tk = energy.t_k([img] * k)
            t_skel, e_skel = bounds.poly_energy_skeletons(p, x_len, d)
            rows.append(
                ReportRow(
                    "sweep_poly", p, f"d={d};X={x_len};stat=E2",
                    e2, e_skel, e2 / e_skel, "report",
                )
            )
            rows.append(
                ReportRow(
                    "sweep_poly", p, f"d={d};X={x_len};stat=T{k}",
                    tk, t_skel, tk / t_skel, "report",
                )
            )
            fits.append(
                {"family": f"poly_e2_d{d}", "p": p, "X": x_len, "measured": e2}
            )
            fits.append(
                {"family": f"poly_t{k}_d{d}", "p": p, "X": x_len, "measured": tk}
            )
    return rows, fits


def _cell_thm11(p, seed, epsilon):
    fld = build_field(p)
    rows, fits = [], []
    rng = random.Random(subseed(seed, "sw_thm11", p))
    r = 3
    x_len = max(3, round(p**0.45))
    n_s = max(2, round(p**0.5))
    if x_len**r < p or x_len * x_len >= p or n_s * n_s * x_len > p * p:
        rows.append(ReportRow("sweep_thm11", p, f"S={n_s};X={x_len};reason=precondition",
                               None, None, None, "skip"))
        return rows, fits
    s = _random_fpset(fld, n_s, rng.randrange(2**31))
    chi = character(fld, (p - 1) // 2)
    iv = interval(fld, 0, x_len)
    w = abs(charsums.bilinear_sum(chi, s, iv))
    e3v = energy.e3(s, s, symmetric_interval(fld, x_len))
    rhs = bounds.thm11_rhs(p, n_s, x_len, r, e3v, epsilon)
    rows.append(
        ReportRow(
            "sweep_thm11", p, f"S={n_s};X={x_len};r={r};chi=quadratic",
            w, rhs, w / rhs, "report",
        )
    )
    fits.append({"family": "thm11_ratio", "p": p, "ratio": w / rhs})
    return rows, fits


_CELL_RUNNERS = {
    "tabc": _cell_tabc,
    "nsxy": _cell_nsxy,
    "subgroup": _cell_subgroup,
    "poly": _cell_poly,
    "thm11": _cell_thm11,
    "misha": _cell_misha,
}


def _run_cell(args):
    family, p, seed, epsilon = args
    return _CELL_RUNNERS[family](p, seed, epsilon)


def run_sweep(cfg):
    """Run all sweep families; returns (rows, fits) with fits a name ->
    FitResult mapping for the JSON summary."""
    cells = _sweep_cells(cfg)
    tasks = [(family, p, cfg["seed"], cfg["epsilon"]) for family, p in cells]
    if cfg["workers"] > 1:
        with ProcessPoolExecutor(max_workers=cfg["workers"]) as pool:
            results = list(pool.map(_run_cell, tasks))
    else:
        results = [_run_cell(t) for t in tasks]
    rows, fitrecords = [], []
    for r, f in results:
        rows.extend(r)
        fitrecords.extend(f)
    rows.sort(key=lambda row: (row.suite, row.p, row.params))
    fits = {}
    for family, quantity, driver in (
        ("poly_e2_d2", "measured", "X"),
        ("poly_e2_d3", "measured", "X"),
        ("poly_t3_d2", "measured", "X"),
        ("poly_t3_d3", "measured", "X"),
        ("subgroup_e3", "measured", "T"),
        ("thm11_ratio", "ratio", "p"),
    ):
        recs = [r for r in fitrecords if r["family"] == family]
        if family == "subgroup_e3" and recs:
            # T-dependence only reads cleanly at a single p
            top = max(r["p"] for r in recs)
            recs = [r for r in recs if r["p"] == top]
        try:
            fits[family] = bounds.exponent_fit(recs, quantity, driver)
        except Exception:
            continue
    return rows, fits


# ---------------------------------------------------------------------------
# regions suite
# ---------------------------------------------------------------------------

def run_region_suite(cfg) -> list:
    rows = []
    eps = 1e-9
    for name, fn, thr in (
        ("chang_diag", bounds.chang_region, 7 / 22),
        ("karatsuba_diag", bounds.karatsuba_region, 1 / 3),
    ):
        above = fn(bounds.ExponentPoint(thr + eps, thr + eps))
        below = fn(bounds.ExponentPoint(thr - eps, thr - eps))
        rows.append(
            ReportRow(
                "region_boundary", 0, f"which={name};thr={thr:.9f}",
                int(above), int(not below), None,
                "pass" if above and not below else "fail",
            )
        )
    thr = 2 / 7
    inside = bounds.subgroup_region(bounds.ExponentPoint(thr + 1e-6, thr + 1e-6))
    outside = bounds.subgroup_region(bounds.ExponentPoint(thr - 1e-6, thr - 1e-6))
    rows.append(
        ReportRow(
            "region_boundary", 0, "which=subgroup_diag;thr=2/7",
            inside, outside, None,
            "pass" if inside == "inside" and outside == "outside" else "fail",
        )
    )
    # Karatsuba strictly dominates Chang on the open window (1/4, 2/7)
    wins = 0
    samples = 64
    for i in range(samples):
        z = 0.25 + (2 / 7 - 0.25) * (i + 1) / (samples + 1)
        k = int(1 / z)
        chang_thr = (3 * k - 2 - 4 * k * z) / (6 * k - 8)
        kar_thr = (1 - z) / 2
        if kar_thr < chang_thr:
            wins += 1
    rows.append(
        ReportRow(
            "region_window", 0, f"window=(1/4,2/7);samples={samples}",
            wins, samples, None, "pass" if wins == samples else "fail",
        )
    )
    n = cfg["region_check_grid"]
    disagreements = []
    for i in range(n):
        for j in range(n):
            zeta = 0.01 + (0.49 - 0.02) * i / (n - 1)
            xi = 0.01 + (0.39 - 0.02) * j / (n - 1)
            pt = bounds.ExponentPoint(zeta, xi)
            if not bounds.subgroup_region_agreement(pt):
                disagreements.append((zeta, xi))
    rows.append(
        ReportRow(
            "region_agreement", 0, f"grid={n}x{n}",
            len(disagreements), n * n, None, "report",
        )
    )
    for zeta, xi in disagreements[:100]:
        rows.append(
            ReportRow(
                "region_agreement", 0,
                f"flag=disagree;zeta={zeta:.6f};xi={xi:.6f}",
                None, None, None, "report",
            )
        )
    m = cfg["region_table_grid"]
    for i in range(m):
        for j in range(m):
            zeta = 0.02 + 0.96 * i / (m - 1)
            xi = 0.02 + 0.96 * j / (m - 1)
            pt = bounds.ExponentPoint(zeta, xi)
            try:
                chang = "T" if bounds.chang_region(pt) else "F"
            except Exception:
                chang = "-"
            kar = "T" if bounds.karatsuba_region(pt) else "F"
            try:
                sub = {"inside": "T", "outside": "F", "out_of_domain": "-"}[
                    bounds.subgroup_region(pt)
                ]
            except Exception:
                sub = "-"
            rows.append(
                ReportRow(
                    "region_table", 0,
                    f"zeta={zeta:.4f};xi={xi:.4f};chang={chang};karatsuba={kar};subgroup={sub}",
                    None, None, None, "report",
                )
            )
    return rows


# ---------------------------------------------------------------------------
# single charsum evaluation
# ---------------------------------------------------------------------------

def run_charsum(cfg) -> list:
    p = cfg["charsum_p"]
    fld = build_field(p, cfg["max_p"])
    m = cfg["charsum_m"]
    chi = character(fld, m)
    x_len = cfg["charsum_x"]
    iv = interval(fld, 0, x_len)
    if cfg["charsum_subgroup"]:
        s = subgroup(fld, cfg["charsum_subgroup"])
    else:
        s = random_set(fld, cfg["charsum_n"], subseed(cfg["seed"], "charsum", p))
    w = abs(charsums.bilinear_sum(chi, s, iv))
    mod = charsums.modulus_sum(chi, s, iv)
    rows = [
        ReportRow(
            "charsum", p, f"m={m};nS={len(s)};X={x_len};stat=W",
            w, len(s) * x_len, w / (len(s) * x_len), "report",
        ),
        ReportRow(
            "charsum", p, f"m={m};nS={len(s)};X={x_len};stat=modulus",
            mod, len(s) * x_len, mod / (len(s) * x_len), "report",
        ),
    ]
    r = cfg["charsum_r"]
    try:
        e3v = energy.e3(s, s, symmetric_interval(fld, x_len))
        rhs = bounds.thm11_rhs(p, len(s), x_len, r, e3v, cfg["epsilon"])
        rows.append(
            ReportRow(
                "charsum", p, f"m={m};nS={len(s)};X={x_len};r={r};stat=rhs",
                w, rhs, w / rhs, "report",
            )
        )
    except Exception as exc:
        rows.append(
            ReportRow(
                "charsum", p, f"m={m};nS={len(s)};X={x_len};r={r};skip={exc}",
                None, None, None, "skip",
            )
        )
    return rows
