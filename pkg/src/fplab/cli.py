"""Command-line front end.

Commands: identities, oracles, sweep, regions, charsum.  Each run writes
<out>/<command>.csv, <out>/summary.json and <out>/resolved.cfg; the process
exits nonzero exactly when some pass/fail row failed.  Report-only rows
(bound-skeleton ratios) never affect the exit code.

Configuration is a flat `key = value` text file; command-line flags override
file values.  With the default settings output files are byte-identical for
identical (config, seed); --timings stamps coarse per-suite wall times into
the rows and summary at the cost of that byte-stability.
"""

import argparse
import os
import sys
import time

from .errors import ConfigError, FplabError
from .field import DEFAULT_CAP, is_prime
from .report import count_failures, summarize, write_csv, write_json
from .suites import (
    run_charsum,
    run_identity_suite,
    run_oracle_suite,
    run_region_suite,
    run_sweep,
)

DEFAULTS = {
    "primes": [5, 7, 11, 13],
    "sweep_primes": [61, 127, 251, 509, 1021, 2039, 4093, 8191],
    "seed": 1,
    "workers": 1,
    "epsilon": 0.0,
    "max_p": DEFAULT_CAP,
    "out": "fplab-out",
    "identity_trials": 8,
    "amp_trials": 6,
    "oracle_trials": 10,
    "oracle_max_size": 8,
    "region_check_grid": 200,
    "region_table_grid": 24,
    "timings": False,
    "charsum_p": 101,
    "charsum_m": 50,
    "charsum_n": 10,
    "charsum_x": 9,
    "charsum_r": 3,
    "charsum_subgroup": 0,
}

_INT_LISTS = ("primes", "sweep_primes")
_FLOATS = ("epsilon",)
_BOOLS = ("timings",)


def parse_config_file(path) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {raw!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _coerce(key, value):
    if key not in DEFAULTS:
        raise ConfigError(f"unknown config key {key!r}")
    if key in _INT_LISTS:
        if isinstance(value, list):
            return value
        items = [t for t in str(value).replace(",", " ").split() if t]
        try:
            return [int(t) for t in items]
        except ValueError:
            raise ConfigError(f"{key}: expected integers, got {value!r}")
    if key in _FLOATS:
        return float(value)
    if key in _BOOLS:
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("1", "true", "yes", "on")
    if key == "out":
        return str(value)
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")


def resolve_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        for key, value in parse_config_file(args.config).items():
            cfg[key] = _coerce(key, value)
    for key in (
        "seed",
        "workers",
        "epsilon",
        "max_p",
        "out",
        "timings",
    ):
        value = getattr(args, key, None)
        if value is not None and value is not False:
            cfg[key] = _coerce(key, value)
    for key in ("charsum_p", "charsum_m", "charsum_n", "charsum_x", "charsum_r",
                "charsum_subgroup"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = _coerce(key, value)
    for key in _INT_LISTS:
        for p in cfg[key]:
            if not is_prime(p):
                raise ConfigError(f"{key}: {p} is not prime")
        kept = [p for p in cfg[key] if p <= cfg["max_p"]]
        cfg[key] = kept
    if cfg["workers"] < 1:
        raise ConfigError(f"workers: need >= 1, got {cfg['workers']}")
    return cfg


def write_resolved_config(cfg, path):
    with open(path, "w") as fh:
        for key in sorted(cfg):
            value = cfg[key]
            if isinstance(value, list):
                value = ",".join(map(str, value))
            fh.write(f"{key} = {value}\n")


def _dispatch(command, cfg):
    if command == "identities":
        return run_identity_suite(cfg), {}
    if command == "oracles":
        return run_oracle_suite(cfg), {}
    if command == "sweep":
        return run_sweep(cfg)
    if command == "regions":
        return run_region_suite(cfg), {}
    if command == "charsum":
        return run_charsum(cfg), {}
    raise ConfigError(f"unknown command {command!r}")


def _add_common(sp):
    sp.add_argument("--config", help="path to a key = value config file")
    sp.add_argument("--seed", type=int, help="master seed for all randomness")
    sp.add_argument("--workers", type=int, help="parallel workers for sweep cells")
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--epsilon", type=float, help="exponent standing in for p^o(1)")
    sp.add_argument("--max-p", dest="max_p", type=int, help="drop primes above this")
    sp.add_argument(
        "--timings", action="store_true", default=False,
        help="stamp wall times into rows (breaks byte-identical outputs)",
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fplab",
        description="exact-counting suites, oracles and bound sweeps over prime fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("identities", "exact identity suite (lines, Gram, amplification, Fourier)"),
        ("oracles", "fast-path vs brute-force equality suite"),
        ("sweep", "bound-skeleton sweep with fitted slopes"),
        ("regions", "exponent-region table and threshold checks"),
        ("charsum", "single bilinear character-sum evaluation"),
    ):
        sp = sub.add_parser(name, help=doc)
        _add_common(sp)
        if name == "charsum":
            sp.add_argument("--p", dest="charsum_p", type=int)
            sp.add_argument("--m", dest="charsum_m", type=int)
            sp.add_argument("--set-size", dest="charsum_n", type=int)
            sp.add_argument("--x-len", dest="charsum_x", type=int)
            sp.add_argument("--r", dest="charsum_r", type=int)
            sp.add_argument("--subgroup-order", dest="charsum_subgroup", type=int)
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        rows, fits = _dispatch(args.command, cfg)
    except FplabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed_ms = int((time.perf_counter() - t0) * 1000)
    if cfg["timings"]:
        for row in rows:
            row.ms = elapsed_ms

    os.makedirs(cfg["out"], exist_ok=True)
    csv_path = os.path.join(cfg["out"], f"{args.command}.csv")
    write_csv(rows, csv_path)
    summary = summarize(rows, fits)
    if cfg["timings"]:
        summary["elapsed_ms"] = elapsed_ms
    write_json(summary, os.path.join(cfg["out"], "summary.json"))
    write_resolved_config(cfg, os.path.join(cfg["out"], "resolved.cfg"))

    for suite in sorted(summary["suites"]):
        counts = summary["suites"][suite]
        print(
            f"{suite}: pass={counts['pass']} fail={counts['fail']} "
            f"skip={counts['skip']} report={counts['report']}"
        )
    for name in sorted(summary["slopes"]):
        fit = summary["slopes"][name]
        print(f"slope {name}: {fit['slope']:.4f} (rms {fit['residual']:.4f}, n={fit['n']})")
    failures = count_failures(rows)
    print(f"wrote {csv_path} ({len(rows)} rows); failures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
