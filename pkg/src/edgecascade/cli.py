"""Command line entry point: ``edgecascade generate|cascade|sweep|threshold``.

Exit status is 0 on success, 1 for invalid configuration or input, 2 for
I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

import numpy as np

from . import experiment
from .attack import AttackStrategy, select_attack_set
from .cascade import run_cascade
from .experiment import ConfigError, ExperimentConfig, OutputError
from .graph import EdgeListFormatError, GraphInputError, dump_edge_list, load_edge_list
from .loadmodel import EdgeLoadState, ModelError, ModelParams, TransferMode
from .metrics import AttackMode, gamma
from .netgen import BaParams, WsParams, generate_ba, generate_ws

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_model_args(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--model", choices=("ws", "ba"), required=required)
    p.add_argument("--n", type=int, default=1000, help="node count (default 1000)")
    p.add_argument("--k", type=int, default=4, help="WS ring degree (default 4)")
    p.add_argument("--p", type=float, default=0.1, help="WS rewiring probability (default 0.1)")
    p.add_argument("--m0", type=int, default=2, help="BA seed clique size (default 2)")
    p.add_argument("--m", type=int, default=2, help="BA edges per new node (default 2)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edgecascade", description="Edge-based cascading failure simulator.")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress progress output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write a WS or BA network as an edge list")
    _add_model_args(gen, required=True)
    gen.add_argument("--out", help="edge-list path (default: stdout)")

    cas = sub.add_parser("cascade", help="attack one network and report each cascade")
    cas.add_argument("--input", help="edge-list file (instead of --model)")
    _add_model_args(cas, required=False)
    cas.add_argument("--delta", type=float, required=True)
    cas.add_argument("--epsilon", type=float, required=True)
    cas.add_argument("--theta", type=float, default=1.0)
    target = cas.add_mutually_exclusive_group(required=True)
    target.add_argument("--attack-edge", type=int)
    target.add_argument("--strategy", choices=[s.value for s in AttackStrategy])
    cas.add_argument("--ma", type=int, default=10, help="attack set size (default 10)")
    cas.add_argument("--attack-mode", choices=[m.value for m in AttackMode], default="independent")
    cas.add_argument("--transfer", choices=[t.value for t in TransferMode], default="current")
    cas.add_argument("--trace", action="store_true", help="print per-round failures to stderr")
    cas.add_argument("--out", help="CSV path (default: stdout)")

    for name, helptext in (
        ("sweep", "gamma for every (topology, strategy, delta, epsilon)"),
        ("threshold", "capacity threshold table"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="JSON config; omitted keys take the default setup")
        p.add_argument("--out", required=True, help="CSV output path")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _network_from_args(args):
    if args.input is not None:
        return load_edge_list(args.input), np.random.default_rng(args.seed)
    rng = np.random.default_rng(args.seed)
    if args.model == "ws":
        return generate_ws(WsParams(args.n, args.k, args.p), rng), rng
    return generate_ba(BaParams(args.m0, args.m, args.n), rng), rng


def cmd_generate(args) -> int:
    net, _ = _network_from_args(argparse.Namespace(**{**vars(args), "input": None}))
    _emit(dump_edge_list(net), args.out)
    return EXIT_OK


def cmd_cascade(args) -> int:
    if (args.input is None) == (args.model is None):
        raise ConfigError("exactly one of --input or --model is required")
    net, rng = _network_from_args(args)
    params = ModelParams(args.delta, args.epsilon, args.theta)
    base = EdgeLoadState.initialize(net, params)
    if args.attack_edge is not None:
        attack = (args.attack_edge,)
        net._check_edge(args.attack_edge)
    else:
        attack = select_attack_set(net, base.initial_load, args.strategy, args.ma, rng)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["edge", "u", "v", "initial_load", "failed_edges", "rounds",
                     "dropped_load", "removed_isolated_nodes"])
    if net.m >= 2:
        res = gamma(net, params, attack, mode=args.attack_mode, transfer=args.transfer,
                    trace=args.trace, base=base)
        cascades = {c.attacked: c for c in res.cascades}
        for e, count in res.per_attack:
            c = cascades.get(e)
            u, v = net.edges[e]
            writer.writerow([
                e, u, v, f"{base.initial_load[e]:.6g}", count,
                c.rounds if c else 0, f"{c.dropped_load:.6g}" if c else "0",
                c.removed_isolated_nodes if c else 0,
            ])
            if args.trace and c is not None:
                for rt in c.trace:
                    print(f"edge={e} {rt.format()}", file=sys.stderr)
        buf.write(f"# gamma={res.gamma:.6g} M={net.m} M_A={len(attack)}\n")
    else:
        c = run_cascade(net, params, attack[0], transfer=args.transfer, trace=args.trace)
        u, v = net.edges[attack[0]]
        writer.writerow([attack[0], u, v, f"{base.initial_load[attack[0]]:.6g}",
                         c.failed_edges, c.rounds, f"{c.dropped_load:.6g}",
                         c.removed_isolated_nodes])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    return ExperimentConfig.load(path)


def cmd_sweep(args) -> int:
    experiment.run_sweep(_load_config(args.config), args.out)
    return EXIT_OK


def cmd_threshold(args) -> int:
    experiment.run_threshold_table(_load_config(args.config), args.out)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "cascade": cmd_cascade,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except OutputError as exc:
        print(f"edgecascade: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, GraphInputError, ModelError, EdgeListFormatError) as exc:
        print(f"edgecascade: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"edgecascade: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
