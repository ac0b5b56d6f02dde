"""Command-line entry point: ``ldis <subcommand> [config|preset] [--seed N] [--out DIR]``."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import harness
from .errors import (
    AbsContError,
    BudgetError,
    ConfigError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
    LdisError,
    OracleUnavailable,
    QuadratureError,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET, EXIT_NUMERIC = 0, 1, 2, 3, 4


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, BudgetError):
        return EXIT_BUDGET
    if isinstance(exc, (ConvergenceError, QuadratureError)):
        return EXIT_NUMERIC
    if isinstance(exc, (ConfigError, DomainError, InfeasibleError, AbsContError, OracleUnavailable)):
        return EXIT_CONFIG
    return EXIT_FAIL


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ldis", description="Importance sampling for random-walk large deviations.")
    sub = ap.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("reproduce", help="run a preset scenario (exp1, exp2, two_sided_lra)")
    rp.add_argument("preset", choices=harness.PRESETS)
    rp.add_argument("--seed", type=int, default=None)
    rp.add_argument("--out", default="out")
    rp.add_argument("--quick", action="store_true", help="cap replications at 1e6 (smoke runs)")
    for name in harness.MODES:
        sp = sub.add_parser(name, help=f"{name} mode from a scenario config")
        sp.add_argument("config")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="directory for outputs not named in the config")
    st = sub.add_parser("selftest", help="quick consistency checks")
    st.add_argument("--seed", type=int, default=1)
    return ap


def _run_config(args) -> int:
    cfg = harness.with_seed(harness.load_config(args.config), args.seed)
    if cfg.mode != args.command:
        raise ConfigError(f"config mode is {cfg.mode!r} but subcommand is {args.command!r}")
    echo = harness.echo_config(cfg)
    result = harness.run_mode(cfg)
    stem = Path(args.config).stem
    paths = {}
    for key in ("csv", "json", "svg"):
        path = cfg.output(key)
        if path is None and args.out:
            path = str(Path(args.out) / f"{stem}.{key}")
        paths[key] = path
    if not any(paths.values()):
        sys.stdout.write(result.csv())
        return EXIT_OK
    for path in harness.write_outputs(result, echo, paths["csv"], paths["json"], paths["svg"]):
        print(path)
    return EXIT_OK


def _reproduce(args) -> int:
    seeds = (args.seed,) if args.seed is not None else (1,)
    run = harness.run_preset(args.preset, seeds, quick=args.quick)
    for path in harness.write_preset(run, args.out):
        print(path)
    return EXIT_OK


def selftest(seed: int = 1) -> list[tuple[str, bool]]:
    from .distributions import Exponential, FiniteDiscrete, Gaussian
    from .events import EventSet
    from .mc_engine import run_cell
    from .oracle import enumerate_exact, exact_alpha_gaussian
    from .rate_functions import rate

    checks = []
    checks.append(("rate Exp(1) at 1.3", abs(rate(Exponential(1.0), 1.3) - 0.0376357) < 1e-6))
    checks.append(("Gaussian tail n=25 b=0.8", abs(exact_alpha_gaussian(25, EventSet.above(0.8)).value - 3.16712418e-5) < 1e-12))
    b = FiniteDiscrete((0.0, 1.0), (0.5, 0.5))
    checks.append(("Bernoulli enumeration", abs(enumerate_exact(b, b, 8, EventSet.above(0.75)).value - 37 / 256) < 1e-15))
    p = Gaussian(0.0, 1.0)
    A = EventSet.above(0.8)
    c1 = run_cell(p, p.tilt(0.8), 25, 20000, A, seed=seed, threads=1, chunk=4096)
    c2 = run_cell(p, p.tilt(0.8), 25, 20000, A, seed=seed, threads=2, chunk=4096)
    se = math.sqrt(c1.srv.points[-1].srv)
    err = abs(math.expm1(c1.log_alpha_hat - math.log(3.16712418e-5)))
    checks.append(("tilted MC within 4 standard errors", err < 4 * se))
    checks.append(("thread-count determinism", c1 == c2))
    return checks


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "selftest":
            checks = selftest(args.seed)
            for name, ok in checks:
                print(f"{'ok  ' if ok else 'FAIL'} {name}")
            return EXIT_OK if all(ok for _, ok in checks) else EXIT_FAIL
        if args.command == "reproduce":
            return _reproduce(args)
        return _run_config(args)
    except LdisError as exc:
        print(f"ldis: error: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
