"""Command-line surface: file I/O and JSON reports for all oracles.

Every subcommand prints a single machine-parseable JSON report to stdout;
verdicts always ship with their verifying object. Exit codes: 0 answered,
2 resource cap exceeded, 1 usage or input error. Reports are
deterministic given inputs and seeds, except for the timing field.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from .brm import game_from_json, optimal_average_payoff, region_generators, region_subset
from .channel_core import channel_from_json, channel_to_json, random_channel, tv_distance
from .errors import ResourceLimitError
from .metric import brm_distance_lower_bound, metric_estimate_to_json
from .ordering import (
    contains,
    degraded_from,
    embed,
    input_degraded_from,
    shannon_equivalent,
    srank_upper_bound,
    verdict_to_json,
)
from .params import optimal_error_probability
from .params import capacity as channel_capacity
from .rational import rat_str


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are 1
        raise _UsageError(message)


def _digest(path: str) -> str:
    with open(path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _load_channel(path: str):
    return channel_from_json(_load_json(path))


def _load_game(path: str):
    return game_from_json(_load_json(path))


def _build_parser() -> _Parser:
    parser = _Parser(prog="chanord", description=__doc__)
    caps = _Parser(add_help=False)
    caps.add_argument(
        "--max-pairs",
        type=int,
        default=65536,
        help="cap on deterministic-pair enumerations (default 65536)",
    )
    caps.add_argument(
        "--max-outputs-pow",
        type=int,
        default=6,
        help="cap output-block/codebook enumerations at 10^THIS (default 6)",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("contain", parents=[caps], help="does channel A contain channel B")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("equiv", parents=[caps], help="are A and B Shannon-equivalent")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("degrade", parents=[caps], help="is A = T∘B for some channel T")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("indegrade", parents=[caps], help="is A = B∘R for some channel R")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("brm-opt", parents=[caps], help="optimal average payoff of a game")
    p.add_argument("game")

    p = sub.add_parser("region", parents=[caps], help="achievable-region generators")
    p.add_argument("game")

    p = sub.add_parser(
        "region-subset", parents=[caps], help="is region(game1) inside region(game2)"
    )
    p.add_argument("game1")
    p.add_argument("game2")

    p = sub.add_parser("dist-brm", parents=[caps], help="game-metric lower bound")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--mmax", type=int, default=3)
    p.add_argument("--budget", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("dist-tv", parents=[caps], help="exact channel distance")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("capacity", parents=[caps], help="channel capacity in nats")
    p.add_argument("a")
    p.add_argument("--eps", type=float, default=1e-9)

    p = sub.add_parser("perr", parents=[caps], help="optimal (n,M) error probability")
    p.add_argument("a")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)

    p = sub.add_parser("embed", parents=[caps], help="canonical embedding of a channel")
    p.add_argument("a")
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)

    p = sub.add_parser("rand", parents=[caps], help="seeded random channel")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--den", type=int, default=16)

    p = sub.add_parser("srank", parents=[caps], help="equivalence-rank upper bound")
    p.add_argument("a")
    return parser


def _dispatch(args) -> dict:
    report = {}
    if args.command == "contain":
        wp, w = _load_channel(args.a), _load_channel(args.b)
        verdict = contains(wp, w, max_pairs=args.max_pairs)
        report.update(verdict_to_json(verdict))
    elif args.command == "equiv":
        a, b = _load_channel(args.a), _load_channel(args.b)
        b_contains_a, a_contains_b = shannon_equivalent(a, b, max_pairs=args.max_pairs)
        report["equivalent"] = b_contains_a.holds and a_contains_b.holds
        report["b_contains_a"] = verdict_to_json(b_contains_a)
        report["a_contains_b"] = verdict_to_json(a_contains_b)
    elif args.command == "degrade":
        a, b = _load_channel(args.a), _load_channel(args.b)
        witness = degraded_from(a, b)
        report["degraded"] = witness is not None
        if witness is not None:
            report["witness"] = channel_to_json(witness)
    elif args.command == "indegrade":
        a, b = _load_channel(args.a), _load_channel(args.b)
        witness = input_degraded_from(a, b)
        report["input_degraded"] = witness is not None
        if witness is not None:
            report["witness"] = channel_to_json(witness)
    elif args.command == "brm-opt":
        game = _load_game(args.game)
        value, (f, g) = optimal_average_payoff(game, max_encoders=args.max_pairs)
        report["value"] = rat_str(value)
        report["encoder"] = list(f.image)
        report["decoder"] = list(g.image)
    elif args.command == "region":
        game = _load_game(args.game)
        gens = region_generators(game, max_pairs=args.max_pairs)
        report["u_size"] = gens.u_size
        report["points"] = [[rat_str(v) for v in point] for point in gens.points]
    elif args.command == "region-subset":
        g1, g2 = _load_game(args.game1), _load_game(args.game2)
        result = region_subset(
            region_generators(g1, max_pairs=args.max_pairs),
            region_generators(g2, max_pairs=args.max_pairs),
        )
        report["inside_all"] = result.inside_all
        if result.violator is not None:
            report["violator"] = [rat_str(v) for v in result.violator]
    elif args.command == "dist-brm":
        a, b = _load_channel(args.a), _load_channel(args.b)
        estimate = brm_distance_lower_bound(
            a, b, n_max=args.nmax, m_max=args.mmax, budget=args.budget, seed=args.seed
        )
        report["estimate"] = metric_estimate_to_json(estimate)
    elif args.command == "dist-tv":
        a, b = _load_channel(args.a), _load_channel(args.b)
        report["distance"] = rat_str(tv_distance(a, b))
    elif args.command == "capacity":
        a = _load_channel(args.a)
        report["capacity_nats"] = channel_capacity(a, args.eps)
        report["eps"] = args.eps
    elif args.command == "perr":
        a = _load_channel(args.a)
        cap = 10**args.max_outputs_pow
        value = optimal_error_probability(
            args.n, args.M, a, max_codebooks=cap, max_output_blocks=cap
        )
        report["n"] = args.n
        report["M"] = args.M
        report["error_probability"] = rat_str(value)
    elif args.command == "embed":
        a = _load_channel(args.a)
        report["channel"] = channel_to_json(embed(a, args.n2, args.m2))
    elif args.command == "rand":
        w = random_channel(args.n, args.m, args.seed, args.den)
        report["channel"] = channel_to_json(w)
    elif args.command == "srank":
        a = _load_channel(args.a)
        report["srank_upper_bound"] = srank_upper_bound(a, max_pairs=args.max_pairs)
    else:  # pragma: no cover - argparse enforces the command set
        raise _UsageError(f"unknown command {args.command!r}")
    return report


def _input_digests(args) -> dict:
    digests = {}
    for attr in ("a", "b", "game", "game1", "game2"):
        path = getattr(args, attr, None)
        if path is not None:
            digests[path] = _digest(path)
    return digests


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        report = {
            "command": argv,
            "inputs": _input_digests(args),
        }
        report.update(_dispatch(args))
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    report["elapsed_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
