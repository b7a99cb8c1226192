"""Command-line front end.

Subcommands:

  run        evaluate one protocol configuration and report per-outcome
             probabilities and fidelities
  figure2    tabulate the standard / optimal / memory fidelity curves to
             CSV (optionally rendering the figure)
  oracle     Monte Carlo cross-check of the analytic engine
  crossover  decoherence level where the memory curve meets the optimal
             memoryless bound

Exit codes: 0 ok, 1 internal error, 2 usage, 3 I/O, 4 statistical
failure, 5 no crossover.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import analysis, plotting
from .errors import ContractViolation, NoCrossoverError
from .oracle import compare, oracle_run
from .protocol import OUTCOME_ORDER, ProtocolConfig, Strategy, run
from .spectrum import DephasingEvent, JointSpectrum

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class _UsageError(Exception):
    pass


def _fmt(v) -> str:
    return format(float(v), ".12g")


# flag name -> (parser, default); used both for argparse defaults and for
# key=value config files (flags override file values, file overrides these)
_PROTOCOL_FLAGS = {
    "alpha_re": (float, _INV_SQRT2),
    "alpha_im": (float, 0.0),
    "beta_re": (float, _INV_SQRT2),
    "beta_im": (float, 0.0),
    "omega0": (float, 2.0),
    "var": (float, 1.0),
    "K": (float, -1.0),
    "dn2": (float, 1.0),
    "t2": (float, None),
    "t3": (float, None),
    "kappa": (float, None),
    "strategy": (str, "memory"),
    "phase": (str, "auto"),
}


def _add_protocol_flags(sub):
    for name, (typ, _) in _PROTOCOL_FLAGS.items():
        sub.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ, default=None)
    sub.add_argument("--config", type=str, default=None,
                     help="flat key=value file; explicit flags override it")


def _load_config_file(path) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _PROTOCOL_FLAGS:
                raise _UsageError(f"{path}:{lineno}: unknown key {key!r}")
            typ, _ = _PROTOCOL_FLAGS[key]
            try:
                values[key] = typ(val)
            except ValueError as exc:
                raise _UsageError(f"{path}:{lineno}: {exc}") from None
    return values


def _resolve_protocol_config(args) -> ProtocolConfig:
    file_values = _load_config_file(args.config) if args.config else {}
    vals = {}
    for name, (_, default) in _PROTOCOL_FLAGS.items():
        flag = getattr(args, name)
        vals[name] = flag if flag is not None else file_values.get(name, default)

    if not -1.0 <= vals["K"] <= 1.0:
        raise _UsageError("--K must be in [-1, 1]")
    if vals["var"] is None or vals["var"] <= 0:
        raise _UsageError("--var must be positive")
    if vals["omega0"] is None or vals["omega0"] <= 0:
        raise _UsageError("--omega0 must be positive")
    if vals["strategy"] not in ("standard", "memory"):
        raise _UsageError("--strategy must be 'standard' or 'memory'")

    phase = vals["phase"]
    if phase not in ("auto", "off"):
        try:
            phase = float(phase)
        except ValueError:
            raise _UsageError("--phase must be 'auto', 'off' or an angle in radians") from None

    spec = JointSpectrum(omega0=vals["omega0"], variance=vals["var"], corr=vals["K"])
    if vals["kappa"] is not None and vals["t2"] is not None:
        raise _UsageError("--kappa and --t2 are mutually exclusive")
    if vals["kappa"] is not None:
        if not 0.0 < vals["kappa"] <= 1.0:
            raise _UsageError("--kappa must be in (0, 1]")
        t2 = spec.duration_for_kappa(vals["kappa"], vals["dn2"])
    else:
        t2 = vals["t2"] if vals["t2"] is not None else 1.0
    if t2 < 0 or (vals["t3"] is not None and vals["t3"] < 0):
        raise _UsageError("interaction times must be nonnegative")

    alpha = complex(vals["alpha_re"], vals["alpha_im"])
    beta = complex(vals["beta_re"], vals["beta_im"])
    nrm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    if nrm == 0:
        raise _UsageError("input amplitudes must not both be zero")
    try:
        return ProtocolConfig(
            alpha=alpha / nrm, beta=beta / nrm, spectrum=spec, dn2=vals["dn2"],
            t2=t2, t3=vals["t3"],
            strategy=Strategy(vals["strategy"]), phase=phase)
    except ContractViolation as exc:
        raise _UsageError(str(exc)) from None


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_run(args) -> int:
    config = _resolve_protocol_config(args)
    report = run(config)
    spec = config.spectrum
    kappa2 = spec.kappa2(DephasingEvent(2, config.dn2, config.t2))
    kappa_joint = spec.char_fn(config.dn2 * config.t2, config.dn2 * config.t3_effective)
    print(f"strategy: {config.strategy.value}   t2={_fmt(config.t2)}   "
          f"t3={_fmt(config.t3_effective)}   K={_fmt(spec.corr)}")
    print(f"|kappa2| = {_fmt(abs(kappa2))}")
    print(f"|kappa(t2,t3)| = {_fmt(abs(kappa_joint))}")
    print(f"{'outcome':<8} {'probability':>16} {'fidelity':>16}")
    for o in OUTCOME_ORDER:
        r = report.outcomes[o]
        print(f"{o.value:<8} {_fmt(r.probability):>16} {_fmt(r.fidelity):>16}")
    print(f"average fidelity: {_fmt(report.average_fidelity)}")
    print(f"worst fidelity:   {_fmt(report.worst_fidelity)}")
    if args.out:
        lines = ["outcome,probability,fidelity"]
        for o in OUTCOME_ORDER:
            r = report.outcomes[o]
            lines.append(f"{o.value},{_fmt(r.probability)},{_fmt(r.fidelity)}")
        _write_lines(args.out, lines)
    if args.plot:
        plotting.plot_run_report(report, args.plot)
    return 0


def _parse_dk_list(text):
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise _UsageError(f"bad delta-K list {text!r}") from None


def cmd_figure2(args) -> int:
    if args.points < 2:
        raise _UsageError("--points must be at least 2")
    if not 0.0 <= args.kappa_min < args.kappa_max <= 1.0:
        raise _UsageError("need 0 <= kappa-min < kappa-max <= 1")
    dks = _parse_dk_list(args.dk)
    if not dks or any(not 0.0 <= dk <= 2.0 for dk in dks):
        raise _UsageError("delta-K values must lie in [0, 2]")
    grid = np.linspace(args.kappa_min, args.kappa_max, args.points)
    points = analysis.figure2_sweep(grid, dks)

    # validation pass: every column must be nondecreasing in kappa
    for label, col in (
        [("f_standard", [p.f_standard for p in points]),
         ("f_optimal", [p.f_optimal for p in points])]
        + [(f"f_memory_dk{dk:g}", [p.f_memory[dk] for p in points]) for dk in dks]
    ):
        if any(b < a for a, b in zip(col, col[1:])):
            raise ContractViolation(f"column {label} is not monotone")

    header = "kappa_abs,f_standard,f_optimal," + ",".join(f"f_memory_dk{dk:g}" for dk in dks)
    lines = [header]
    for p in points:
        cells = [_fmt(p.kappa_abs), _fmt(p.f_standard), _fmt(p.f_optimal)]
        cells += [_fmt(p.f_memory[dk]) for dk in dks]
        lines.append(",".join(cells))
    _write_lines(args.out, lines)
    if args.plot:
        plotting.plot_figure2(points, args.plot)
    print(f"wrote {len(points)} rows to {args.out}")
    return 0


def cmd_oracle(args) -> int:
    if args.samples < 100:
        raise _UsageError("--samples must be at least 100")
    if args.sigma <= 0:
        raise _UsageError("--sigma must be positive")
    config = _resolve_protocol_config(args)
    engine_report = run(config)
    oracle_report = oracle_run(config, args.samples, args.seed, partitions=args.partitions)
    summary = compare(engine_report, oracle_report, args.sigma)
    print(f"{'quantity':<24} {'engine':>14} {'oracle':>14} {'se':>12} {'sigmas':>8}")
    for o in OUTCOME_ORDER:
        eng = engine_report.outcomes[o]
        orc = oracle_report.outcomes[o]
        for label, ev, ov, se in (
            ("probability", eng.probability, orc.probability, orc.probability_se),
            ("fidelity", eng.fidelity, orc.fidelity, orc.fidelity_se),
        ):
            row = next(r for r in summary.rows if r.label == f"{o.value} {label}")
            print(f"{o.value + ' ' + label:<24} {ev:>14.8f} {ov:>14.8f} "
                  f"{se:>12.3e} {row.normalized:>8.2f}")
    print(f"worst offender: {summary.worst.label} at {summary.worst.normalized:.3f} sigmas "
          f"(budget {summary.sigma_budget:g})")
    if not summary.passed:
        print("FAIL: oracle disagrees with engine beyond the sigma budget")
        return 4
    print("PASS")
    return 0


def cmd_crossover(args) -> int:
    dks = _parse_dk_list(args.dk)
    if not dks or any(not 0.0 < dk < 0.5 for dk in dks):
        raise _UsageError("delta-K values must lie in (0, 0.5)")
    stars = [(dk, analysis.crossover(dk)) for dk in dks]
    print(f"{'delta_k':>10} {'kappa_star':>16}")
    for dk, star in stars:
        print(f"{_fmt(dk):>10} {_fmt(star):>16}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmteleport",
        description="Teleportation through correlated dephasing environments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate one protocol configuration")
    _add_protocol_flags(p_run)
    p_run.add_argument("--out", type=str, default=None, help="per-outcome CSV path")
    p_run.add_argument("--plot", type=str, default=None, help="per-outcome figure path")
    p_run.set_defaults(func=cmd_run)

    p_fig = sub.add_parser("figure2", help="tabulate the fidelity comparison curves")
    p_fig.add_argument("--kappa-min", dest="kappa_min", type=float, default=0.0)
    p_fig.add_argument("--kappa-max", dest="kappa_max", type=float, default=1.0)
    p_fig.add_argument("--points", type=int, default=201)
    p_fig.add_argument("--dk", type=str, default="0,0.05,0.1,0.3,0.5")
    p_fig.add_argument("--out", type=str, required=True)
    p_fig.add_argument("--plot", type=str, default=None, help="figure path")
    p_fig.set_defaults(func=cmd_figure2)

    p_orc = sub.add_parser("oracle", help="Monte Carlo cross-check of the engine")
    _add_protocol_flags(p_orc)
    p_orc.add_argument("--samples", type=int, default=100_000)
    p_orc.add_argument("--seed", type=int, default=42)
    p_orc.add_argument("--sigma", type=float, default=4.0)
    p_orc.add_argument("--partitions", type=int, default=1)
    p_orc.set_defaults(func=cmd_oracle)

    p_x = sub.add_parser("crossover", help="memory-vs-optimal curve crossings")
    p_x.add_argument("--dk", type=str, required=True)
    p_x.set_defaults(func=cmd_crossover)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoCrossoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ContractViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
