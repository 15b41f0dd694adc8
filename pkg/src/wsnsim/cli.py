"""Command-line experiment runner: protocol x seed sweeps with CSV output."""

from __future__ import annotations

import argparse
import io
import logging
import os
import sys

from .config import PROTOCOLS, ConfigError, load_config
from .engine import run_simulation
from .report import atomic_write, write_round_csv, write_summary_csv

log = logging.getLogger("wsnsim")


class UsageError(Exception):
    pass


def parse_seed_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise UsageError(f"--seeds expects N..M, got {text!r}")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"--seeds expects integers, got {text!r}") from None
    if lo_i < 0 or hi_i < lo_i:
        raise UsageError(f"--seeds range {text!r} is empty or negative")
    return list(range(lo_i, hi_i + 1))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wsnsim", description=__doc__)
    p.add_argument("--config", required=True, metavar="PATH", help="key = value config file")
    p.add_argument("--protocol", metavar="NAME[,NAME...]",
                   help=f"override protocol; comma list from {', '.join(PROTOCOLS)}")
    seeds = p.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int, metavar="N", help="override seed")
    seeds.add_argument("--seeds", metavar="N..M", help="sweep an inclusive seed range")
    p.add_argument("--out", default=".", metavar="DIR", help="output directory (default: .)")
    p.add_argument("--summary", action="store_true", help="print a comparison table")
    return p


def format_table(rows) -> str:
    header = ("protocol", "seed", "first_death", "50pct_dead", "ctrl_per_node_round")
    body = [(r["protocol"], str(r["seed"]), str(r["first_death_round"]),
             str(r["rounds_to_50pct_dead"]), f"{r['ctrl_per_node_round']:.4f}") for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(b, widths)))
              for b in body]
    return "\n".join(lines)


def run_cli(args=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if not os.path.isfile(ns.config):
            raise UsageError(f"config file not found: {ns.config}")
        try:
            base = load_config(ns.config)
        except ConfigError as exc:
            raise UsageError(f"{ns.config}: {exc}") from None
        protocols = [base.protocol]
        if ns.protocol:
            protocols = [p.strip() for p in ns.protocol.split(",") if p.strip()]
            for p in protocols:
                if p not in PROTOCOLS:
                    raise UsageError(f"--protocol: unknown protocol {p!r}; "
                                     f"accepted: {', '.join(PROTOCOLS)}")
        if ns.seeds:
            seeds = parse_seed_range(ns.seeds)
        elif ns.seed is not None:
            if ns.seed < 0:
                raise UsageError("--seed must be >= 0")
            seeds = [ns.seed]
        else:
            seeds = [base.seed]
        os.makedirs(ns.out, exist_ok=True)
        if not os.access(ns.out, os.W_OK):
            raise UsageError(f"output directory not writable: {ns.out}")

        rows = []
        for proto in sorted(set(protocols)):
            for seed in seeds:
                cfg = base.with_(protocol=proto, seed=seed)
                log.info("running %s seed %d", proto, seed)
                result = run_simulation(cfg)
                stem = os.path.join(ns.out, f"{proto}_seed{seed}")
                rounds = io.StringIO()
                write_round_csv(result.reports, rounds)
                summary = io.StringIO()
                rows.append(write_summary_csv(result, summary))
                atomic_write(stem + "_rounds.csv", rounds.getvalue())
                atomic_write(stem + "_summary.csv", summary.getvalue())
        if ns.summary:
            print(format_table(rows))
    except (UsageError, OSError) as exc:
        print(f"wsnsim: error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    sys.exit(run_cli())
