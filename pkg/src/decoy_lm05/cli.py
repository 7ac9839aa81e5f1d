"""Command-line front end.

Subcommands:

    curve     key rate vs distance, CSV (one rate and one mu column per formula)
    optimize  optimal mu and rate at one distance
    cutoff    cutoff distance per formula, plus crossing/ratio for two formulas
    sample    Monte-Carlo observables and the bounds estimated from them, CSV

Exit codes: 0 success, 2 configuration error, 3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor

from decoy_lm05.channel import IntensitySet, error_i, gain_i, observe, yield_i
from decoy_lm05.combined_bounds import estimate_combined
from decoy_lm05.config import ENV_VAR, RunConfig, load_config
from decoy_lm05.errors import ConfigError, DecoyError
from decoy_lm05.finite_bounds import Y1UpperMode, estimate_finite
from decoy_lm05.optimizer import crossing_distance, cutoff_distance, optimize_mu, rate_point
from decoy_lm05.sampler import sample_counts

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3


def fmt(x: float | None) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return format(x, ".10g")


def _ordered_map(fn: Callable[[float], list[str]], items: Sequence[float], threads: int) -> list[list[str]]:
    if threads == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))  # map preserves input order


def _write_csv(header: list[str], rows: Iterable[list[str]], out: io.TextIOBase) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def cmd_curve(cfg: RunConfig, out: io.TextIOBase) -> None:
    header = ["distance_km"]
    for f in cfg.formulas:
        header += [f"rate_{f.value}", f"mu_{f.value}"]

    def row(distance: float) -> list[str]:
        cells = [fmt(distance)]
        for f in cfg.formulas:
            point = rate_point(cfg.channel, cfg.spec_for(f), distance, None if cfg.optimize else cfg.mu_for(f))
            cells += [fmt(point.rate), fmt(point.mu_used)]
        return cells

    _write_csv(header, _ordered_map(row, cfg.distances(), cfg.threads), out)


def cmd_optimize(cfg: RunConfig, out: io.TextIOBase) -> None:
    distance = cfg.single_distance
    params = cfg.channel.at(distance)
    for f in cfg.formulas:
        mu, rate = optimize_mu(params, cfg.spec_for(f))
        out.write(f"formula={f.value} distance_km={fmt(distance)} mu={fmt(mu)} rate={fmt(rate)}\n")


def cmd_cutoff(cfg: RunConfig, out: io.TextIOBase) -> None:
    l_max = cfg.cutoff_range
    parts = []
    cutoffs = []
    for f in cfg.formulas:
        c = cutoff_distance(cfg.channel, cfg.spec_for(f), l_max)
        cutoffs.append(c)
        parts.append(f"cutoff_{f.value}_km={fmt(c)}")
    if len(cfg.formulas) == 2:
        a, b = cfg.formulas
        ratio = cutoffs[0] / cutoffs[1] if cutoffs[1] > 0 else math.inf
        crossing = crossing_distance(cfg.channel, cfg.spec_for(a), cfg.spec_for(b), l_max)
        parts.append(f"ratio={fmt(ratio)}")
        parts.append(f"crossing_km={'none' if crossing is None else fmt(crossing)}")
    out.write(" ".join(parts) + "\n")


SAMPLE_HEADER = [
    "distance_km",
    "q_mu", "q_mu_exact", "e_mu", "e_mu_exact",
    "q_nu1", "q_nu1_exact", "e_nu1", "e_nu1_exact",
    "q_nu2", "q_nu2_exact", "e_nu2", "e_nu2_exact",
    "y0_l", "y1_l", "y1_u", "y2_l", "e1_u", "e2_u",
    "y12_l", "q12_l", "eff_err_u",
    "empty_intensities", "bound_violations",
]  # fmt: skip


def sample_row(cfg: RunConfig, distance: float) -> list[str]:
    """Sampled vs exact observables and both estimators run on the samples.

    ``bound_violations`` counts bounds that land on the wrong side of the
    generating model's true value, which fluctuations can cause.
    """
    params = cfg.channel.at(distance)
    intensities = IntensitySet(cfg.mu, cfg.nu1, cfg.nu2)
    counts = sample_counts(params, intensities, cfg.sample_spec())
    obs = counts.observables()
    exact = observe(params, intensities)
    fb = estimate_finite(obs, intensities, Y1UpperMode.GENUINE, params)
    cb = estimate_combined(obs, intensities, params.e0)

    y = [yield_i(params, i) for i in range(3)]
    e = {i: error_i(params, i) for i in (1, 2)}
    q1, q2 = gain_i(params, cfg.mu, 1), gain_i(params, cfg.mu, 2)
    checks = [
        fb.y0_l <= y[0],
        fb.y1_l <= y[1],
        fb.y2_l <= y[2],
        fb.e1_u is None or fb.e1_u >= e[1],
        fb.e2_u is None or fb.e2_u >= e[2],
        cb.y12_l <= y[1] + y[2],
        cb.q12_l <= q1 + q2,
        cb.eff_err_u is None or cb.eff_err_u >= min((e[1] * q1 + e[2] * q2) / (q1 + q2), 0.5),
    ]
    cells = [fmt(distance)]
    for name in ("q_mu", "e_mu", "q_nu1", "e_nu1", "q_nu2", "e_nu2"):
        cells += [fmt(getattr(obs, name)), fmt(getattr(exact, name))]
    cells += [fmt(v) for v in (fb.y0_l, fb.y1_l, fb.y1_u, fb.y2_l, fb.e1_u, fb.e2_u)]
    cells += [fmt(v) for v in (cb.y12_l, cb.q12_l, cb.eff_err_u)]
    cells.append(str(sum(counts.empty)))
    cells.append(str(checks.count(False)))
    return cells


def cmd_sample(cfg: RunConfig, out: io.TextIOBase) -> None:
    IntensitySet(cfg.mu, cfg.nu1, cfg.nu2)
    rows = _ordered_map(lambda d: sample_row(cfg, d), cfg.distances(), cfg.threads)
    _write_csv(SAMPLE_HEADER, rows, out)


COMMANDS = {
    "curve": cmd_curve,
    "optimize": cmd_optimize,
    "cutoff": cmd_cutoff,
    "sample": cmd_sample,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoy-lm05",
        description="Decoy-state key rates for the two-way LM05 protocol.",
        epilog=f"Without --config, the file named by ${ENV_VAR} is used if set.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("-c", "--config", help="key = value config file")
    parser.add_argument(
        "-s", "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override one config key (repeatable; wins over the file)",
    )  # fmt: skip
    parser.add_argument("-o", "--output", help="write to this file instead of stdout")
    parser.add_argument("--optimize", action="store_true", help="same as --set optimize=true")
    parser.add_argument("--threads", type=int, help="same as --set threads=N")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.optimize:
        overrides.append("optimize=true")
    if args.threads is not None:
        overrides.append(f"threads={args.threads}")
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    buffer = io.StringIO()
    try:
        COMMANDS[args.command](cfg, buffer)
    except (DecoyError, ArithmeticError, ValueError) as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE

    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
