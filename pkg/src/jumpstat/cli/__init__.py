"""Command-line interface: ``jumpstat {rates,sweep,simulate,verify}``.

Exit status 0 on success, 1 when verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from ..errors import ConfigurationError, UnsupportedConfigurationError
from .commands import cmd_rates, cmd_simulate, cmd_sweep, cmd_verify, gnuplot_stub
from .config import PRESETS, SweepConfig, load_config

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _methods(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _config_args(p: argparse.ArgumentParser):
    g = p.add_argument_group("configuration")
    g.add_argument("--config", help="INI configuration file")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--kind", choices=("four", "d"))
    for name in ("a1", "a2", "a3", "a4", "w", "lambda1", "lambda2", "lambda4"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--rabi", type=float, help="Rabi frequency (units of A3)")
    g.add_argument("--detuning", type=float)
    g.add_argument("--n-atoms", type=int)
    g.add_argument("--coupled", type=_int_list, help="transitions with collective terms, e.g. 1,3")
    g.add_argument("--r-min", type=float)
    g.add_argument("--r-max", type=float)
    g.add_argument("--n-points", type=int)
    g.add_argument("--window", type=float, help="T_W (default: 0.01 / largest rate)")
    g.add_argument("--methods", type=_methods)
    g.add_argument("--output", "-o", help="write data here instead of stdout")
    g.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jumpstat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("rates", help="rate matrices per method over a distance grid")
    _config_args(p)
    p.add_argument("--r", type=_float_list, help="explicit distances, e.g. 0.5,1,10")
    p.add_argument("--independent", action="store_true", help="r -> infinity (independent atoms)")
    p = sub.add_parser("sweep", help="double/triple-jump rates over a distance grid (CSV)")
    _config_args(p)
    p = sub.add_parser("simulate", help="Monte Carlo check of the multi-jump rates")
    _config_args(p)
    p.add_argument("--r", type=float, help="distance (default r_min)")
    p.add_argument("--transitions", type=int)
    p.add_argument("--t-end", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--streams", type=int)
    p.add_argument("--rule", choices=("net", "any"))
    p.add_argument("--triple-span", action="store_true", default=None)
    p.add_argument("--fixture", choices=("none", "unit"))
    p.add_argument("--trajectory", help="export the first stream's trajectory here")
    p = sub.add_parser("verify", help="run the cross-method oracle suite")
    p.add_argument("--only", type=lambda s: [x.strip() for x in s.split(",")], help="check ids, e.g. 1,3")
    return parser


def _config(args) -> SweepConfig:
    text = None
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot read {args.config}: {exc}") from exc
    keys = ("kind", "a1", "a2", "a3", "a4", "w", "lambda1", "lambda2", "lambda4", "rabi", "detuning",
            "n_atoms", "coupled", "r_min", "r_max", "n_points", "window", "methods")
    overrides = {k: getattr(args, k) for k in keys}
    for k in ("transitions", "t_end", "seed", "streams", "rule", "triple_span", "fixture"):
        overrides["mc_" + k] = getattr(args, k, None)
    return load_config(text, args.preset, overrides)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            if args.only:
                from ..verification import CHECKS
                bad = [k for k in args.only if k not in CHECKS]
                if bad:
                    raise ConfigurationError(f"unknown checks {bad}")
            text, status = cmd_verify(args.only)
            sys.stdout.write(text)
            return status
        cfg = _config(args)
        if args.command == "rates":
            text, status = cmd_rates(cfg, args.r, args.independent, args.jobs)
        elif args.command == "sweep":
            text, status = cmd_sweep(cfg)
            if args.output:
                stub = os.path.splitext(args.output)[0] + ".gp"
                with open(stub, "w") as fh:
                    fh.write(gnuplot_stub(os.path.basename(args.output)))
        else:
            text, status = cmd_simulate(cfg, args.r, args.trajectory, args.jobs)
        _emit(text, args.output)
        return status
    except (ConfigurationError, UnsupportedConfigurationError) as exc:
        print(f"jumpstat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
