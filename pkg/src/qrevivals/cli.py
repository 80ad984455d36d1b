"""Command-line interface: ``simulate``, ``sweep`` and ``selftest``.

Exit codes: 0 success, 1 configuration error, 2 numerical-convergence failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .acceptance import run_all
from .noise import ConvergenceError
from .scenarios import ConfigError, parse_config, run_scenario, sweep


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrevivals",
        description="Two-qubit entanglement dynamics under classical noise",
    )
    parser.add_argument("--version", action="version", version=f"qrevivals {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario from a config file")
    sim.add_argument("--config", required=True, help="path to the scenario config")
    sim.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    sim.add_argument("--threads", type=int, default=1, help="worker threads (output-invariant)")

    sw = sub.add_parser("sweep", help="run a scenario once per parameter value")
    sw.add_argument("--config", required=True, help="path to the scenario config")
    sw.add_argument("--param", required=True, help="model parameter to sweep")
    sw.add_argument("--values", required=True, help="comma-separated numeric values (may be empty)")
    sw.add_argument("--out", default=None, help="output path; one file per value (default: stdout)")
    sw.add_argument("--seed", type=int, default=None, help="override the config seed")
    sw.add_argument("--threads", type=int, default=1, help="worker threads (output-invariant)")

    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.add_argument("--threads", type=int, default=1, help="worker threads")
    return parser


def _load_config(args):
    import dataclasses

    cfg = parse_config(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError(f"--seed must fit in 64 bits, got {args.seed}")
        cfg = dataclasses.replace(cfg, seed=args.seed)
    return cfg


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_simulate(args) -> int:
    result = run_scenario(_load_config(args), threads=args.threads)
    _write(result.to_csv(), args.out)
    return 0


def _parse_values(raw: str) -> list[float]:
    items = [s.strip() for s in raw.split(",") if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise ConfigError(f"--values: cannot parse {raw!r} as a comma-separated float list") from exc


def _sweep_path(base: str, param: str, value: float) -> str:
    p = Path(base)
    return str(p.with_name(f"{p.stem}__{param}={value:g}{p.suffix or '.csv'}"))


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    values = _parse_values(args.values)
    results = sweep(cfg, args.param, values, threads=args.threads)
    if args.out is None:
        sys.stdout.write("\n".join(res.to_csv() for _, res in results))
    else:
        for value, res in results:
            _write(res.to_csv(), _sweep_path(args.out, args.param, value))
    return 0


def _cmd_selftest(args) -> int:
    results = run_all(threads=args.threads, stream=sys.stdout)
    failed = [r for r in results if not r.passed]
    sys.stdout.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return 0 if not failed else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_selftest(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"numerical convergence error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
