"""``ppnash`` command-line interface.

Exit codes: 0 when every requested task succeeds, 1 on task failure
(non-convergence, rejected step size, inconsistent taxonomy), 2 on
configuration or input errors.  Failures also leave ``failure.json`` in
the output directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import ppnash
from ppnash.config import ConfigError, TOPOLOGIES, load_experiment, parse_network_spec
from ppnash.experiments import metadata, reproduce_examples, run_experiment, write_json
from ppnash.ppp_solver import DEFAULT_ALPHA_GRID

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _add_common(p, config_required=True):
    p.add_argument("--config", required=config_required, metavar="PATH", help="experiment JSON file")
    p.add_argument("--out", metavar="DIR", help="output directory (default: config 'output' or '.')")
    p.add_argument("--seed", type=int, metavar="N", help="override solver.seed")


def _add_alpha(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, metavar="X", help="fixed step size (checked by the pre-check)")
    g.add_argument("--alpha-grid", type=float, nargs="*", metavar="X",
                   help=f"select alpha from a grid (default {list(DEFAULT_ALPHA_GRID)})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ppnash", description="Distributed Nash equilibrium seeking and monotonicity diagnostics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {ppnash.__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run every task listed in the experiment config")
    _add_common(p)
    _add_alpha(p)

    p = sub.add_parser("taxonomy", help="run only the C1-C10 condition checks")
    _add_common(p)
    p.add_argument("--alpha-grid", type=float, nargs="*", metavar="X")

    p = sub.add_parser("reproduce-examples", help="consolidated run over Examples 1-4")
    p.add_argument("--out", metavar="DIR", default="reproduce-report")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--alpha", type=float, metavar="X", help="force alpha instead of grid selection")
    p.add_argument("--seeds", type=int, default=5, metavar="K", help="random starts per run")

    p = sub.add_parser("spectral", help="weight matrix and spectrum of a network")
    _add_common(p, config_required=False)
    p.add_argument("--topology", choices=sorted(TOPOLOGIES) + ["random"])
    p.add_argument("--N", type=int)
    p.add_argument("--edges", metavar="FILE", help="1-indexed 'i j' edge list")
    return parser


def _fail(out, record, code):
    print(json.dumps(record), file=sys.stderr)
    if out:
        os.makedirs(out, exist_ok=True)
        write_json(os.path.join(out, "failure.json"), record)
    return code


def _grid(args):
    grid = getattr(args, "alpha_grid", None)
    if grid is None:
        return None
    return list(grid) or list(DEFAULT_ALPHA_GRID)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "reproduce-examples":
            code, report = reproduce_examples(args.out, args.seed, args.alpha, args.seeds)
            bad = [r for r in report["rows"] if not r["passed"]]
            for r in bad:
                print(f"FAIL criterion {r['criterion']} example {r['example']} {r['network']}: "
                      f"{r['observed']} {r['detail']}", file=sys.stderr)
            print(f"{len(report['rows']) - len(bad)}/{len(report['rows'])} checks passed; "
                  f"report in {args.out}")
            return code
        if args.command == "spectral":
            return _spectral(args)
        cfg = load_experiment(args.config)
        if args.command == "taxonomy":
            cfg.tasks = ["taxonomy"]
            code, summary = run_experiment(cfg, args.out, args.seed, alpha_grid=_grid(args))
        else:
            code, summary = run_experiment(cfg, args.out, args.seed, args.alpha, _grid(args))
        print(json.dumps({"status": summary["status"], "results": summary["results"]},
                         default=str, sort_keys=True))
        return code
    except ConfigError as exc:
        rec = exc.record()
        rec["meta"] = metadata("", getattr(args, "seed", None) or 0)
        return _fail(getattr(args, "out", None), rec, EXIT_CONFIG)


def _spectral(args):
    from ppnash.network import spectral_report

    if args.config:
        from ppnash.config import load_json

        raw, text = load_json(args.config)
        if "network" not in raw:
            raise ConfigError("missing required section 'network'", "network", source=args.config)
        net = parse_network_spec(raw["network"], os.path.dirname(os.path.abspath(args.config)), text,
                                 args.config)
    elif args.edges:
        net = parse_network_spec({"edge_file": args.edges, **({"N": args.N} if args.N else {})})
    elif args.topology:
        net = parse_network_spec({"topology": args.topology, "N": args.N or 0, "seed": args.seed})
    else:
        raise ConfigError("give --config, --edges or --topology", "network")
    rep = spectral_report(net)
    rep["meta"] = metadata("", args.seed or 0)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_json(os.path.join(args.out, "spectral.json"), rep)
        net.to_csv(os.path.join(args.out, "weights.csv"))
    print(json.dumps(rep, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
