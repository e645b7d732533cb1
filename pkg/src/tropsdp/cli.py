"""Command-line interface.

Subcommands cover the full pipeline: feasibility checking by value
iteration (`check`), exact margins by policy enumeration (`exact`),
pencil/game translation (`game`, `solve-game`), preprocessing
(`metzlerize`, `normalize`, `affine`), certificates (`certify`), and the
experimental harness (`gen`, `phase`, `bench`).

Exit codes: 0 feasible/success, 10 infeasible/trivial, 20 indeterminate,
1 usage or validation error.  `-` means stdin/stdout everywhere.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import bench as bench_mod
from . import certify as certify_mod
from . import jsonio
from .errors import TropSdpError, ValidationError
from .exact import affine_feasibility, game_value_bruteforce, solve_tmsdfp
from .game import game_from_pencil
from .markov import analyze, chain_from_policies
from .pencil import metzlerize, normalize, require_metzler
from .shapley import check_feasibility, structural_constant_value_check

EXIT_FEASIBLE = 0
EXIT_INFEASIBLE = 10
EXIT_INDETERMINATE = 20
EXIT_ERROR = 1

_SCHEMAS = """\
File formats (all indices 1-based, rationals as "p/q" or integer strings):

signed tropical entry
  {"sign": "+"|"-", "val": "p/q"}  or the string "-inf"

pencil
  {"n": int, "m": int, "affine": bool,
   "matrices": [{"entries": [{"i": int, "j": int,
                              "sign": "+"|"-", "val": "p/q"}, ...]}, ...]}
  one matrices element per variable; i <= j; omitted entries are -inf

game
  {"n": int, "m": int,
   "min_actions": [[{"to": [i] or [i, j], "reward": "p/q"}, ...] per state],
   "max_actions": [[{"to": k, "reward": "p/q"}, ...] per state]}

iteration report (output of `check`)
  {"verdict": "Feasible"|"Infeasible"|"Indeterminate",
   "iterations": int, "witness": ["p/q", ...], "epsilon": "p/q"}

certificate (output of `certify`)
  {"kind": "Feasibility"|"Infeasibility", "vector": ["p/q", ...],
   "lambda": "p/q", "strict": bool}

sweep/benchmark CSV
  header: n,m,samples,feasible_ratio,indeterminate,mean_iters,mean_time_s
"""


@dataclass(frozen=True)
class CliConfig:
    """Resolved run parameters shared by the subcommands."""

    subcommand: str
    input: str
    output: str
    epsilon: Fraction
    max_iters: int
    exact_mode: bool
    seed: int
    threads: Optional[int]

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValidationError("max-iters must be at least 1")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message):
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return jsonio.parse_rational(text)
    except ValidationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list:
    return [int(part) for part in text.split(",") if part.strip()]


def _size_list(text: str) -> list:
    sizes = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        n, _, m = part.partition("x")
        if not m:
            raise argparse.ArgumentTypeError(f"sizes look like 100x10, got {part!r}")
        sizes.append((int(n), int(m)))
    return sizes


def build_parser() -> _Parser:
    parser = _Parser(prog="tropsdp",
                     description="Tropical Metzler semidefinite feasibility "
                                 "via stochastic mean payoff games.")
    parser.add_argument("--schema", action="store_true",
                        help="print the JSON/CSV file formats and exit")
    sub = parser.add_subparsers(dest="subcommand", metavar="COMMAND")

    def add(name, help_text, with_input=True):
        p = sub.add_parser(name, help=help_text)
        if with_input:
            p.add_argument("input", nargs="?", default="-",
                           help="input file, or - for stdin")
        p.add_argument("-o", "--output", default="-",
                       help="output file, or - for stdout")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: TROPSDP_THREADS or all)")
        return p

    p = add("check", "decide feasibility of a pencil by value iteration")
    p.add_argument("--eps", type=_rational, default=Fraction(1, 10**8),
                   help="termination threshold (rational, default 1/10^8)")
    p.add_argument("--max-iters", type=int, default=10**6)
    p.add_argument("--exact", action="store_true",
                   help="iterate in exact rational arithmetic")

    p = add("exact", "exact game value / margin by policy enumeration")
    p.add_argument("--max-pairs", type=int, default=10**6,
                   help="cap on the number of policy pairs to evaluate")
    p.add_argument("--policies", action="store_true",
                   help="also print the optimal pair in readable form")
    p.add_argument("--dump-chain", action="store_true",
                   help="include the Markov analysis of the optimal pair")

    add("game", "translate a well-formed Metzler pencil to its game")

    p = add("solve-game", "exact value of a game given directly as JSON")
    p.add_argument("--max-pairs", type=int, default=10**6)
    p.add_argument("--policies", action="store_true")
    p.add_argument("--dump-chain", action="store_true")

    add("metzlerize", "rewrite a general symmetric pencil as a Metzler one")
    add("normalize", "strip forced variables/rows; detect trivial instances")

    p = add("affine", "decide feasibility of an affine pencil via dominions")
    p.add_argument("--max-states", type=int, default=16)
    p.add_argument("--max-pairs", type=int, default=10**6)

    p = add("gen", "generate a random pencil", with_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=bench_mod.DEFAULT_GRID,
                   help="denominator of the rational entry grid")

    p = add("phase", "feasibility-ratio sweep over a size grid",
            with_input=False)
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--m-list", type=_int_list, required=True)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--eps", type=_rational, default=Fraction(1, 10**8))
    p.add_argument("--max-iters", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-timing", action="store_true",
                   help="omit wall-clock column (output becomes reproducible)")

    p = add("bench", "timing table on random instances", with_input=False)
    p.add_argument("--sizes", type=_size_list, required=True,
                   help="comma-separated nxm pairs, e.g. 100x10,1000x100")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--eps", type=_rational, default=Fraction(1, 10**8))
    p.add_argument("--max-iters", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)

    p = add("certify", "produce or check (in)feasibility certificates")
    p.add_argument("--lambda", dest="lam", type=_rational, default=None,
                   help="margin: positive for feasibility, negative for "
                        "infeasibility certificates (write --lambda=-1/100 "
                        "for negative values)")
    p.add_argument("--check", default=None, metavar="CERT",
                   help="verify this certificate file against the instance")
    p.add_argument("--game", action="store_true",
                   help="input is a game file rather than a pencil")
    p.add_argument("--eps", type=_rational, default=Fraction(1, 10**8))
    p.add_argument("--max-iters", type=int, default=10**6)
    p.add_argument("--exact", action="store_true")

    return parser


def _emit(args, payload: str) -> None:
    if args.output == "-":
        sys.stdout.write(payload)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)


def _load_pencil(args):
    return jsonio.pencil_from_json(jsonio.load_json(args.input))


def _pencil_to_game(P):
    require_metzler(P)
    if P.affine:
        print("note: affine flag ignored here; use `tropsdp affine` for the "
              "affine question", file=sys.stderr)
    return game_from_pencil(P)


def _value_to_json(value) -> dict:
    return {
        "chi": [jsonio.format_rational(c) for c in value.chi],
        "eta": [jsonio.format_rational(e) for e in value.eta],
        "optimal_pair": {
            "sigma": [a + 1 for a in value.optimal_pair[0]],
            "tau": [a + 1 for a in value.optimal_pair[1]],
        },
        "saddle_verified": value.saddle_verified,
    }


def _chain_to_json(G, sigma, tau) -> dict:
    chain = chain_from_policies(G, sigma, tau)
    info = analyze(chain)
    return {
        "recurrent_classes": [sorted(c) for c in info.recurrent_classes],
        "stationary": [
            {str(state + 1): jsonio.format_rational(pi) for state, pi in dist.items()}
            for dist in info.stationary
        ],
        "gain": [jsonio.format_rational(g) for g in info.gain],
    }


def _describe_policies(G, pair) -> str:
    sigma, tau = pair
    lines = []
    for k, a in enumerate(sigma):
        act = G.min_actions[k][a]
        rows = "".join(f" row {t + 1}" for t in act.targets)
        lines.append(f"  Min {k + 1}: ->{rows}, pays {act.reward}")
    for i, a in enumerate(tau):
        act = G.max_actions[i][a]
        lines.append(f"  Max {i + 1}: -> var {act.target + 1}, "
                     f"receives {act.reward}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    P = _load_pencil(args)
    require_metzler(P)
    if P.affine:
        print("note: affine flag ignored here; use `tropsdp affine` for the "
              "affine question", file=sys.stderr)
    norm = normalize(P)
    if norm.kind == "trivial":
        report = {"verdict": "Infeasible", "iterations": 0, "witness": [],
                  "epsilon": jsonio.format_rational(args.eps)}
        _emit(args, jsonio.dump_json(report))
        return EXIT_INFEASIBLE
    if norm.kind == "nontrivial":
        print(f"note: variable {norm.witness_variable + 1} alone spans a "
              "feasible ray; no iteration needed", file=sys.stderr)
        report = {"verdict": "Feasible", "iterations": 0, "witness": [],
                  "epsilon": jsonio.format_rational(args.eps)}
        _emit(args, jsonio.dump_json(report))
        return EXIT_FEASIBLE
    reduced = norm.pencil
    if reduced is not P:
        gone = [v + 1 for v in norm.eliminated_variables]
        print(f"note: variables {gone} are forced to -inf; the witness is "
              "over the remaining variables", file=sys.stderr)
    if structural_constant_value_check(reduced) == "Unknown":
        print("note: constant-value hypothesis not structurally guaranteed; "
              "verdict computed assuming ergodicity", file=sys.stderr)
    G = game_from_pencil(reduced)
    report = check_feasibility(G, epsilon=args.eps, max_iters=args.max_iters,
                               exact=args.exact)
    _emit(args, jsonio.dump_json(jsonio.report_to_json(report)))
    if report.verdict == "Feasible":
        return EXIT_FEASIBLE
    if report.verdict == "Infeasible":
        return EXIT_INFEASIBLE
    print("hint: indeterminate at this precision; try --exact or "
          "`tropsdp exact` for small instances", file=sys.stderr)
    return EXIT_INDETERMINATE


def _cmd_exact(args) -> int:
    P = _load_pencil(args)
    result = solve_tmsdfp(P, max_pairs=args.max_pairs)
    out = {
        "status": result.status,
        "margin": None if result.margin is None
        else jsonio.format_rational(result.margin),
        "value": None if result.value is None else _value_to_json(result.value),
    }
    if args.dump_chain and result.value is not None:
        G = game_from_pencil(result.normalization.pencil)
        out["chain"] = _chain_to_json(G, *result.value.optimal_pair)
    _emit(args, jsonio.dump_json(out))
    if args.policies and result.value is not None:
        G = game_from_pencil(result.normalization.pencil)
        print("optimal pair:\n"
              + _describe_policies(G, result.value.optimal_pair),
              file=sys.stderr)
    return EXIT_FEASIBLE if result.status == "Nontrivial" else EXIT_INFEASIBLE


def _cmd_game(args) -> int:
    G = _pencil_to_game(_load_pencil(args))
    _emit(args, jsonio.dump_json(jsonio.game_to_json(G)))
    return EXIT_FEASIBLE


def _cmd_solve_game(args) -> int:
    G = jsonio.game_from_json(jsonio.load_json(args.input))
    value = game_value_bruteforce(G, max_pairs=args.max_pairs)
    out = _value_to_json(value)
    if args.dump_chain:
        out["chain"] = _chain_to_json(G, *value.optimal_pair)
    _emit(args, jsonio.dump_json(out))
    if args.policies:
        print("optimal pair:\n" + _describe_policies(G, value.optimal_pair),
              file=sys.stderr)
    return EXIT_FEASIBLE if max(value.chi) >= 0 else EXIT_INFEASIBLE


def _cmd_metzlerize(args) -> int:
    P = _load_pencil(args)
    result = metzlerize(P)
    if result.pencil is not P:
        print(f"note: {result.pencil.n - P.n} auxiliary variables added for "
              "off-diagonal pairs", file=sys.stderr)
    _emit(args, jsonio.dump_json(jsonio.pencil_to_json(result.pencil)))
    return EXIT_FEASIBLE


def _cmd_normalize(args) -> int:
    P = _load_pencil(args)
    require_metzler(P)
    result = normalize(P)
    out = {
        "kind": result.kind,
        "pencil": None if result.pencil is None
        else jsonio.pencil_to_json(result.pencil),
        "witness_variable": None if result.witness_variable is None
        else result.witness_variable + 1,
        "eliminated_variables": [v + 1 for v in result.eliminated_variables],
        "removed_rows": [r + 1 for r in result.removed_rows],
    }
    _emit(args, jsonio.dump_json(out))
    return EXIT_INFEASIBLE if result.kind == "trivial" else EXIT_FEASIBLE


def _cmd_affine(args) -> int:
    P = _load_pencil(args)
    feasible = affine_feasibility(P, max_states=args.max_states,
                                  max_pairs=args.max_pairs)
    _emit(args, jsonio.dump_json({"feasible": feasible}))
    return EXIT_FEASIBLE if feasible else EXIT_INFEASIBLE


def _cmd_gen(args) -> int:
    spec = bench_mod.GenSpec(args.n, args.m, args.seed, args.grid)
    _emit(args, jsonio.dump_json(jsonio.pencil_to_json(bench_mod.gen_random(spec))))
    return EXIT_FEASIBLE


def _cmd_phase(args) -> int:
    cells = bench_mod.phase_diagram(
        args.n_list, args.m_list, samples=args.samples,
        epsilon=float(args.eps), seed=args.seed, max_iters=args.max_iters,
        timing=not args.no_timing)
    _emit(args, bench_mod.to_csv(cells))
    return EXIT_FEASIBLE


def _cmd_bench(args) -> int:
    cells = bench_mod.benchmark(args.sizes, samples=args.samples,
                                epsilon=float(args.eps), seed=args.seed,
                                max_iters=args.max_iters)
    _emit(args, bench_mod.to_csv(cells, hardware_header=True))
    return EXIT_FEASIBLE


def _cmd_certify(args) -> int:
    if args.game:
        G = jsonio.game_from_json(jsonio.load_json(args.input))
    else:
        G = _pencil_to_game(_load_pencil(args))
    if args.check is not None:
        cert = jsonio.certificate_from_json(jsonio.load_json(args.check))
        holds, strict = certify_mod.check_certificate(G, cert)
        _emit(args, jsonio.dump_json(
            {"holds": holds, "strict": strict, "kind": cert.kind}))
        if holds:
            return EXIT_FEASIBLE
        print("certificate does not verify against this instance",
              file=sys.stderr)
        return EXIT_ERROR
    if args.lam is None:
        raise ValidationError("certify needs --lambda (or --check CERT)")
    if args.lam > 0:
        cert = certify_mod.feasibility_certificate(
            G, args.lam, epsilon=args.eps, max_iters=args.max_iters,
            exact=args.exact)
    else:
        cert = certify_mod.infeasibility_certificate(
            G, args.lam, epsilon=args.eps, max_iters=args.max_iters,
            exact=args.exact)
    _emit(args, jsonio.dump_json(jsonio.certificate_to_json(cert)))
    return EXIT_FEASIBLE


_COMMANDS = {
    "check": _cmd_check,
    "exact": _cmd_exact,
    "game": _cmd_game,
    "solve-game": _cmd_solve_game,
    "metzlerize": _cmd_metzlerize,
    "normalize": _cmd_normalize,
    "affine": _cmd_affine,
    "gen": _cmd_gen,
    "phase": _cmd_phase,
    "bench": _cmd_bench,
    "certify": _cmd_certify,
}


def make_config(args) -> CliConfig:
    """Snapshot of the common knobs (validates epsilon/max_iters)."""
    return CliConfig(
        subcommand=args.subcommand,
        input=getattr(args, "input", "-"),
        output=args.output,
        epsilon=getattr(args, "eps", Fraction(1, 10**8)),
        max_iters=getattr(args, "max_iters", 10**6),
        exact_mode=getattr(args, "exact", False),
        seed=getattr(args, "seed", 0),
        threads=args.threads,
    )


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        sys.stdout.write(_SCHEMAS)
        return EXIT_FEASIBLE
    if args.subcommand is None:
        parser.error("a subcommand is required (see --help)")
    try:
        make_config(args)
        if args.threads is not None:
            if args.threads < 1:
                raise ValidationError("--threads must be at least 1")
            os.environ["TROPSDP_THREADS"] = str(args.threads)
        return _COMMANDS[args.subcommand](args)
    except TropSdpError as exc:
        print(f"tropsdp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"tropsdp: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
