"""Command line front end.

Subcommands: ``bounds`` (table at given SNRs), ``sweep`` (CSV over an SNR
grid), ``gen-channel`` (random channel file), ``verify`` (Monte Carlo
achievability check against the compound upper bound).

Exit codes: 0 success, 1 usage or file format error, 2 numeric failure
(rank deficiency), 3 verification violation.
"""

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import bounds as _bounds
from . import channel as _channel
from . import oracle as _oracle

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_VIOLATION = 3

SWEEP_COLUMNS = (
    "snr_db",
    "epi_lb",
    "ub_t1",
    "ub_t2",
    "ub_pa1",
    "compound_ub",
    "correction",
    "gap_bits",
)

# Bound columns selectable through --bounds; snr_db/correction/gap always ride along.
SELECTABLE = ("epi_lb", "ub_t1", "ub_t2", "ub_pa1", "compound_ub")


@dataclass(frozen=True)
class SweepConfig:
    """SNR grid and output selection for a sweep."""

    snr_start_db: float
    snr_stop_db: float
    snr_step_db: float
    bounds: tuple
    out_path: str

    def __post_init__(self):
        if not self.snr_step_db > 0:
            raise ValueError("SNR step must be positive")
        if self.snr_start_db > self.snr_stop_db:
            raise ValueError("SNR range start exceeds stop")
        unknown = [b for b in self.bounds if b not in SELECTABLE]
        if unknown:
            raise ValueError(f"unknown bound selection {unknown}")

    def grid(self) -> list:
        count = int(math.floor((self.snr_stop_db - self.snr_start_db) / self.snr_step_db + 1e-9)) + 1
        return [self.snr_start_db + k * self.snr_step_db for k in range(count)]


def _fmt(x: float) -> str:
    # 17 significant digits: parses back to the identical double
    return format(float(x), ".17g")


def _parse_snr_spec(text: str) -> list:
    """Parse either a comma list '0,5,10' or a range 'start:step:stop'."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("SNR range must look like start:step:stop")
        start, step, stop = (float(p) for p in parts)
        return SweepConfig(start, stop, step, SELECTABLE, "").grid()
    return [float(p) for p in text.split(",") if p.strip() != ""]


def _parse_snr_range(text: str) -> tuple:
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ValueError("sweep expects an SNR range start:step:stop")
    start, step, stop = (float(p) for p in parts)
    return start, step, stop


def _summary_at(model, snr_db: float) -> dict:
    summary = _bounds.bound_summary(_channel.model_at_snr(model, snr_db))
    summary["snr_db"] = snr_db  # report the requested grid point exactly
    return summary


def _row_fields(summary: dict, selected) -> list:
    fields = [_fmt(summary["snr_db"])]
    for col in SELECTABLE:
        value = summary[col]
        if col not in selected or value is None:
            fields.append("")
        else:
            fields.append(_fmt(value))
    fields.append(_fmt(summary["correction"]))
    if "epi_lb" in selected and "compound_ub" in selected:
        fields.append(_fmt(summary["gap_bits"]))
    else:
        fields.append("")
    return fields


def cmd_bounds(args) -> int:
    model = _channel.load_model(args.model)
    snrs = _parse_snr_spec(args.snr)
    if not snrs:
        raise ValueError("no SNR points given")
    header = ["snr_db", "epi_lb", "ub_t1", "ub_t2", "ub_pa1", "compound_ub", "correction", "gap_bits"]
    width = 24
    print("".join(h.ljust(width) for h in header).rstrip())
    for snr_db in snrs:
        s = _summary_at(model, snr_db)
        cells = [
            _fmt(s["snr_db"]),
            _fmt(s["epi_lb"]),
            _fmt(s["ub_t1"]),
            _fmt(s["ub_t2"]),
            "-" if s["ub_pa1"] is None else _fmt(s["ub_pa1"]),
            _fmt(s["compound_ub"]),
            _fmt(s["correction"]),
            _fmt(s["gap_bits"]),
        ]
        print("".join(c.ljust(width) for c in cells).rstrip())
    return EXIT_OK


def cmd_sweep(args) -> int:
    model = _channel.load_model(args.model)
    start, step, stop = _parse_snr_range(args.snr)
    selected = tuple(args.bounds.split(",")) if args.bounds else SELECTABLE
    config = SweepConfig(start, stop, step, selected, args.out)
    lines = [",".join(SWEEP_COLUMNS)]
    for snr_db in config.grid():
        summary = _summary_at(model, snr_db)
        lines.append(",".join(_row_fields(summary, config.bounds)))
    with open(config.out_path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_gen_channel(args) -> int:
    if args.n_complex < 1:
        raise ValueError("n_complex must be at least 1")
    Hc = _channel.random_channel(args.n_complex, args.seed)
    region = _channel.per_antenna_region(args.n_complex, radius=1.0)
    _channel.save_complex_channel(args.out, Hc, region, sigma_z2=1.0)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1000:
        raise ValueError("need at least 1000 samples")
    model = _channel.load_model(args.model)
    snrs = _parse_snr_spec(args.snr)
    if not snrs:
        raise ValueError("no SNR points given")
    width = 24
    header = ["snr_db", "mi_estimate", "std_error", "compound_ub", "status"]
    print("".join(h.ljust(width) for h in header).rstrip())
    violated = False
    for snr_db in snrs:
        m = _channel.model_at_snr(model, snr_db)
        constellation = _oracle.default_constellation(m)
        est = _oracle.mc_mutual_information(m, constellation, args.samples, args.seed)
        ub = _bounds.compound_upper_bound(m)
        bad = est.value_bits - 3.0 * est.std_error_bits > ub.value_bits
        violated = violated or bad
        cells = [
            _fmt(snr_db),
            _fmt(est.value_bits),
            _fmt(est.std_error_bits),
            _fmt(ub.value_bits),
            "VIOLATION" if bad else "OK",
        ]
        print("".join(c.ljust(width) for c in cells).rstrip())
    return EXIT_VIOLATION if violated else EXIT_OK


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; remap to the documented code
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ampcap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="print bound values at given SNR points")
    p_bounds.add_argument("--model", required=True, help="channel JSON file")
    p_bounds.add_argument(
        "--snr",
        required=True,
        help="SNR list 'a,b,c' or range 'start:step:stop' in dB; use --snr=-10,0,10 for negative values",
    )
    p_bounds.set_defaults(func=cmd_bounds)

    p_sweep = sub.add_parser("sweep", help="write a CSV of bounds over an SNR grid")
    p_sweep.add_argument("--model", required=True, help="channel JSON file")
    p_sweep.add_argument(
        "--snr", required=True, help="SNR range start:step:stop in dB; use --snr=-10:1:40 for negative starts"
    )
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--bounds", default=None, help="comma list of bound columns to fill")
    p_sweep.set_defaults(func=cmd_sweep)

    p_gen = sub.add_parser("gen-channel", help="generate a random channel file")
    p_gen.add_argument("n_complex", type=int, help="number of complex antennas")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="output channel JSON path")
    p_gen.set_defaults(func=cmd_gen_channel)

    p_verify = sub.add_parser("verify", help="Monte Carlo check against the compound upper bound")
    p_verify.add_argument("--model", required=True, help="channel JSON file")
    p_verify.add_argument("--snr", required=True, help="SNR list or range in dB")
    p_verify.add_argument("--samples", type=int, default=100000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except np.linalg.LinAlgError as exc:
        # checked before ValueError: numpy's LinAlgError may derive from it
        print(f"ampcap: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (_channel.ModelFormatError, OSError, ValueError) as exc:
        print(f"ampcap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
