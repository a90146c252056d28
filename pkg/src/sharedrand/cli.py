"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 internal invariant failure, 3 I/O error,
4 verification failure.
"""
import argparse
import sys
import warnings

from . import channel, csvio, game, verify
from .errors import OptimizerBudgetExhausted, SharedRandError
from .maximin import OptimizerConfig

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3, 4

CHANNELS = {"phaseflip": channel.PHASE_FLIP, "depolarizing": channel.DEPOLARIZING}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_out(p):
    p.add_argument("--out", help="output path (default: standard output)")


def _add_cfg(p):
    d = OptimizerConfig()
    p.add_argument("--starts", type=int, default=d.max_starts)
    p.add_argument("--iters", type=int, default=d.max_iters_per_start)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--tol", type=float, default=d.convergence_tol)
    p.add_argument("--beta", type=float, default=d.smoothing_beta)


def _cfg(args) -> OptimizerConfig:
    return OptimizerConfig(max_starts=args.starts, max_iters_per_start=args.iters,
                           seed=args.seed, convergence_tol=args.tol, smoothing_beta=args.beta)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sharedrand", description="Shared-randomness resource theory toolkit")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    ap.commands = sub.choices

    p = sub.add_parser("table1", help="exact and optimized maximum classical payoffs")
    _add_cfg(p)
    _add_out(p)

    p = sub.add_parser("game", help="payoff of one resource in G(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--resource", required=True,
                   choices=["classical2", "classical3", "singlet", "werner"])
    p.add_argument("--p", type=float)
    _add_cfg(p)
    _add_out(p)

    p = sub.add_parser("threshold", help="noise level at which a channel beats two coins")
    p.add_argument("--channel", required=True, choices=sorted(CHANNELS))
    p.add_argument("--n", type=int, required=True, choices=[3, 4])
    _add_out(p)

    p = sub.add_parser("curve", help="payoff against channel parameter")
    p.add_argument("--channel", required=True, choices=sorted(CHANNELS))
    p.add_argument("--n", type=int, required=True, choices=[3, 4])
    p.add_argument("--points", type=int, default=101)
    _add_out(p)

    p = sub.add_parser("verify", help="run seeded property suites")
    p.add_argument("--suite", required=True, choices=list(verify.SUITES) + ["all"])
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    return ap


def cmd_table1(args):
    cfg = _cfg(args)
    rows = []
    bad = []
    for s in game.table1_strategies():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizerBudgetExhausted)
            opt = game.classical_max_payoff(s.m, s.n, cfg).value
        gap = abs(opt - s.payoff)
        rows.append((s.m, s.n, s.payoff, opt, gap))
        if gap > 1e-4:
            bad.append((s.m, s.n, gap))
    text = csvio.write_rows(("m", "n", "payoff_exact", "payoff_optimized", "gap"), rows)
    return text, (EXIT_INTERNAL if bad else EXIT_OK), (f"gap above 1e-4: {bad}" if bad else None)


def cmd_game(args):
    res = args.resource
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    if res == "werner" and args.p is None:
        raise UsageError("--resource werner requires --p")
    if res != "werner" and args.p is not None:
        raise UsageError("--p only applies to --resource werner")
    if res in ("singlet", "werner") and args.n < 3:
        raise UsageError("quantum strategies are defined for --n >= 3")
    if args.p is not None and not 0.0 <= args.p <= 1.0:
        raise UsageError("--p must lie in [0, 1]")
    if res.startswith("classical"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizerBudgetExhausted)
            report = game.classical_max_payoff(int(res[-1]), args.n, _cfg(args))
    else:
        report = game.quantum_payoff(args.n, 1.0 if res == "singlet" else args.p)
    return game.reports_to_csv([report]), EXIT_OK, None


def cmd_threshold(args):
    r = channel.advantage_threshold(CHANNELS[args.channel], args.n)
    text = csvio.write_rows(("family", "n", "p_star", "benchmark", "bracket_width"),
                            [(args.channel, r.n, r.p_star, r.classical_benchmark, r.bracket_width)])
    return text, EXIT_OK, None


def cmd_curve(args):
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    rows = channel.payoff_curve(CHANNELS[args.channel], args.n, args.points)
    text = csvio.write_rows(("p", "payoff", "classical_benchmark", "capacity"), rows)
    return text, EXIT_OK, None


def cmd_verify(args):
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be >= 1")
    results = verify.run(args.suite, args.trials, args.seed)
    text = csvio.write_rows(verify.HEADER, (verify.as_row(r) for r in results))
    failed = [r for r in results if not r.passed]
    detail = "; ".join(f"{r.suite}: {r.prop} failed {r.failures}/{r.trials} (worst {r.worst!r})"
                       for r in failed)
    return text, (EXIT_VERIFY if failed else EXIT_OK), (detail or None)


COMMANDS = {"table1": cmd_table1, "game": cmd_game, "threshold": cmd_threshold,
            "curve": cmd_curve, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code, detail = COMMANDS[args.command](args)
    except (UsageError, SharedRandError) as exc:
        parser.commands[args.command].print_usage(sys.stderr)
        print(f"sharedrand {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"sharedrand: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    if detail:
        print(detail, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
