"""Command-line front end: solve, calibrate, sweep, ruin, simulate, verify, serve.

Exit codes: 0 success, 1 verification failure, 2 invalid input/config.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .config import PremiumSpec, RunConfig, load_config, quotes_from_spec
from .errors import ConfigInvalid, LifecoverError, VerificationFailed
from .model import UNIT_DOLLARS, Scheme, calibrate_to_loss_probability, max_loss_probability
from .policy import (
    comparative_statics_sweep,
    hold_region_boundary_gap,
    pre_death_drift,
    ruin_inputs,
    solve_policy,
    verify_variational_inequality,
)
from .report import solve_report_from_config
from .ruin import prob_ruin_total
from .simulate import (
    SimConfig,
    estimate_insurer_loss_probability,
    estimate_ruin_probability,
    scheme_equivalence_check,
)

_FORMATS = ("table", "json", "csv")


@dataclass
class RunManifest:
    """Reproducibility record embedded in every JSON output."""

    command: str
    config_path: str | None
    seed: int
    format: str
    resolved: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    artifact_version: str = __version__


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json_doc(payload: dict, manifest: RunManifest) -> str:
    return json.dumps({"manifest": asdict(manifest), **payload}, indent=2, sort_keys=True)


def _flatten(prefix: str, value, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in value:
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rows.append((prefix, "" if value is None else f"{value}"))


def _csv_doc(payload: dict) -> str:
    rows: list[tuple[str, str]] = []
    _flatten("", payload, rows)
    return "key,value\n" + "\n".join(f"{k},{v}" for k, v in rows)


def _money(units: float) -> str:
    return f"{units:12.4f} units  (${units * UNIT_DOLLARS:,.0f})"


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    premium = cfg.premium
    scheme = getattr(args, "scheme", None) or premium.scheme
    loading = getattr(args, "loading", None)
    loss_prob = getattr(args, "loss_prob", None)
    if loading is not None and loss_prob is not None:
        raise ConfigInvalid("give --loading or --loss-prob, not both")
    if loading is not None:
        premium = PremiumSpec(scheme=scheme, loading=loading)
    elif loss_prob is not None:
        premium = PremiumSpec(scheme=scheme, loss_probability=loss_prob)
    else:
        premium = PremiumSpec(scheme=scheme, loading=premium.loading,
                              loss_probability=premium.loss_probability)
    return RunConfig(cfg.market, cfg.household, premium)


def _solve_table(report: dict) -> str:
    lines = [f"units: 1 unit = ${UNIT_DOLLARS:,.0f}"]
    for scheme in ("single", "continuous"):
        if scheme not in report["quotes"]:
            continue
        quote = report["quotes"][scheme]
        pol = report["policy"][scheme]
        rate_label = "H (price per $1)" if scheme == "single" else "h (rate per $1/yr)"
        lines.append(f"[{scheme}]")
        lines.append(f"  {rate_label:22s} {quote['rate']:.6f}   loading {quote['loading']:.4f}   "
                     f"loss probability {quote['loss_probability']:.4f}")
        lines.append(f"  optimal benefit        {_money(pol['d_star_units'])}")
        if pol["no_insurance_optimal"]:
            lines.append("  no insurance is optimal at this risk aversion/loading")
        lines.append(f"  jump if x survives     {_money(pol['dc_x_units'])} per yr")
        lines.append(f"  jump if y survives     {_money(pol['dc_y_units'])} per yr")
        r = report["inputs"]["r"]
        lines.append(f"  consumption rule       c(w) = {r:g} w + {pol['c0_intercept_units']:.6f} units/yr")
        if pol["delta_units"] is not None:
            lines.append(f"  wealth drift delta     {pol['delta_units']:.6f} units/yr")
    lines.append(f"risky investment pi*     {_money(report['policy']['pi_star_units'])}")
    if "ruin" in report:
        for scheme in ("single", "continuous"):
            block = report["ruin"].get(scheme)
            if block:
                lines.append(f"zero-consumption prob ({scheme}, w={report['ruin']['wealth_units']:g}): "
                             f"{block['p_total']:.3e}  [case {block['case']}/{block['subcase']}]")
    return "\n".join(lines)


def cmd_solve(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    report = solve_report_from_config(cfg, wealth=args.wealth)
    if args.verbose:
        for scheme, sol in (
                (s.value, solve_policy(cfg.market, cfg.household, q))
                for s, q in quotes_from_spec(cfg.market, cfg.household, cfg.premium).items()):
            report["policy"][scheme]["solver_diagnostics"] = {
                "linear_coefficient": sol.coeff.a_lin,
                "right_hand_side": sol.coeff.b_rhs,
                "residual": sol.coeff.residual,
            }
    manifest = RunManifest("solve", args.config, args.seed, args.format,
                           resolved=report["inputs"],
                           outputs=[args.out] if args.out else [])
    if args.format == "json":
        _emit(_json_doc(report, manifest), args.out)
    elif args.format == "csv":
        _emit(_csv_doc(report), args.out)
    else:
        _emit(_solve_table(report), args.out)
    return 0


def cmd_calibrate(args) -> int:
    cfg = load_config(args.config)
    q = args.loss_prob
    if q is None and cfg.premium.loss_probability is not None:
        q = cfg.premium.loss_probability
    if q is None:
        q = max_loss_probability(cfg.market, cfg.household)
    quote_s, quote_c = calibrate_to_loss_probability(cfg.market, cfg.household, q)
    payload = {
        "loss_probability": q,
        "max_loss_probability": max_loss_probability(cfg.market, cfg.household),
        "single": {"rate": quote_s.rate, "loading": quote_s.loading},
        "continuous": {"rate": quote_c.rate, "loading": quote_c.loading},
    }
    manifest = RunManifest("calibrate", args.config, args.seed, args.format,
                           resolved={"loss_probability": q})
    if args.format == "json":
        _emit(_json_doc(payload, manifest), args.out)
    elif args.format == "csv":
        _emit(_csv_doc(payload), args.out)
    else:
        _emit(
            f"target loss probability  {q:.6f} (max {payload['max_loss_probability']:.6f})\n"
            f"single premium H         {quote_s.rate:.6f}  (loading {quote_s.loading:.4f})\n"
            f"continuous rate h        {quote_c.rate:.6f}  (loading {quote_c.loading:.4f})",
            args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.steps < 2:
        raise ConfigInvalid("--steps must be at least 2", field="steps")
    values = np.linspace(getattr(args, "from"), args.to, args.steps)
    loading = cfg.premium.loading if cfg.premium.loading is not None else 0.0
    table = comparative_statics_sweep(cfg.market, cfg.household, args.param, values,
                                      loading=loading)
    if args.format == "json":
        payload = {
            "parameter": table.parameter,
            "flags": table.flags,
            "rows": [asdict(row) for row in table.rows],
        }
        manifest = RunManifest("sweep", args.config, args.seed, "json",
                               resolved={"parameter": args.param,
                                         "from": getattr(args, "from"),
                                         "to": args.to, "steps": args.steps})
        _emit(_json_doc(payload, manifest), args.out)
    else:
        _emit(table.to_csv(), args.out)
    return 0


def _ruin_payload(cfg: RunConfig, wealth: float) -> dict:
    quotes = quotes_from_spec(cfg.market, cfg.household, cfg.premium)
    payload: dict = {"wealth_units": wealth}
    for scheme, quote in quotes.items():
        sol = solve_policy(cfg.market, cfg.household, quote)
        if sol.d_star <= 0.0 or sol.c0_of_w(wealth) <= 0.0:
            payload[scheme.value] = None
            continue
        payload[scheme.value] = prob_ruin_total(ruin_inputs(sol, wealth)).to_dict()
    return payload


def cmd_ruin(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    payload = _ruin_payload(cfg, args.wealth)
    manifest = RunManifest("ruin", args.config, args.seed, args.format,
                           resolved={"wealth": args.wealth})
    if args.format == "json":
        _emit(_json_doc(payload, manifest), args.out)
    elif args.format == "csv":
        _emit(_csv_doc(payload), args.out)
    else:
        lines = [f"wealth {args.wealth:g} units"]
        for scheme in ("single", "continuous"):
            block = payload.get(scheme)
            if block is None:
                if scheme in payload:
                    lines.append(f"[{scheme}] not applicable (no benefit bought or c0 <= 0)")
                continue
            lines.append(f"[{scheme}] case {block['case']}/{block['subcase']}:  "
                         f"before {block['p_before']:.6e}  between {block['p_between']:.6e}  "
                         f"total {block['p_total']:.6e}")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    sim_cfg = SimConfig(n_paths=args.paths, dt=args.dt, seed=args.seed,
                        horizon_cap=args.horizon)
    quotes = quotes_from_spec(cfg.market, cfg.household, cfg.premium)
    payload: dict = {"wealth_units": args.wealth,
                     "paths": args.paths, "dt": args.dt, "seed": args.seed}
    analytic = _ruin_payload(cfg, args.wealth)
    for scheme, quote in quotes.items():
        sol = solve_policy(cfg.market, cfg.household, quote)
        block: dict = {"analytic": analytic.get(scheme.value)}
        if sol.c0_of_w(args.wealth) > 0.0:
            mc = estimate_ruin_probability(sim_cfg, sol, args.wealth)
            block["mc"] = {
                "before": mc.before.to_dict(), "between": mc.between.to_dict(),
                "total": mc.total.to_dict(),
                "jump_to_negative": mc.jump_to_negative.to_dict(),
                "truncated_fraction": mc.truncated_fraction,
            }
        payload[scheme.value] = block
    if len(quotes) == 2:
        loss = estimate_insurer_loss_probability(sim_cfg, cfg.market, cfg.household,
                                                 quotes[Scheme.SINGLE], quotes[Scheme.CONTINUOUS])
        payload["insurer_loss"] = {k: v.to_dict() for k, v in loss.items()}
        if cfg.premium.loss_probability is not None:
            chk = scheme_equivalence_check(
                SimConfig(n_paths=min(args.paths, 1000), dt=max(args.dt, 1 / 252),
                          seed=args.seed),
                cfg.market, cfg.household, q=cfg.premium.loss_probability)
            payload["scheme_equivalence_max_gap"] = chk.max_consumption_gap
    manifest = RunManifest("simulate", args.config, args.seed, args.format,
                           resolved={"wealth": args.wealth, "paths": args.paths,
                                     "dt": args.dt, "horizon": args.horizon})
    if args.format == "json":
        _emit(_json_doc(payload, manifest), args.out)
    elif args.format == "csv":
        _emit(_csv_doc(payload), args.out)
    else:
        lines = [f"wealth {args.wealth:g} units, {args.paths} paths, seed {args.seed}"]
        for scheme in ("single", "continuous"):
            block = payload.get(scheme)
            if not block:
                continue
            ana = block.get("analytic")
            mc = block.get("mc")
            if ana and mc:
                lines.append(f"[{scheme}] total zero-consumption probability:")
                lines.append(f"  analytic {ana['p_total']:.6e}")
                lines.append(f"  monte-carlo {mc['total']['estimate']:.6e} "
                             f"(se {mc['total']['std_error']:.2e})")
        if "insurer_loss" in payload:
            for scheme, res in payload["insurer_loss"].items():
                lines.append(f"insurer loss P(L>0) [{scheme}]: {res['estimate']:.4f} "
                             f"(target {res.get('target', float('nan')):.4f})")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    quotes = quotes_from_spec(cfg.market, cfg.household, cfg.premium)
    checks: list[tuple[str, bool, str]] = []
    failed = False
    for scheme, quote in quotes.items():
        sol = solve_policy(cfg.market, cfg.household, quote)
        try:
            rep = verify_variational_inequality(cfg.market, cfg.household, quote, sol,
                                                tol=args.tol, raise_on_failure=True)
            checks.append((f"{scheme.value}: optimality conditions on grid "
                           f"(max residual {rep.max_hjb_residual:.2e})", True, ""))
        except VerificationFailed as exc:
            failed = True
            checks.append((f"{scheme.value}: optimality conditions on grid", False,
                           str(exc)))
        if sol.d_star > 0.0:
            try:
                pre_death_drift(sol)
                checks.append((f"{scheme.value}: drift closed forms agree", True, ""))
            except LifecoverError as exc:
                failed = True
                checks.append((f"{scheme.value}: drift closed forms agree", False, str(exc)))
            if scheme is Scheme.SINGLE:
                gap = hold_region_boundary_gap(cfg.market, cfg.household, quote, sol)
                ok = bool(gap <= 1e-10)
                failed |= not ok
                checks.append((f"single: hold-boundary identity gap {gap:.2e} <= 1e-10", ok, ""))
    if args.format == "json":
        manifest = RunManifest("verify", args.config, args.seed, "json",
                               resolved={"tol": args.tol})
        payload = {"passed": not failed,
                   "checks": [{"label": label, "passed": ok, "detail": detail}
                              for label, ok, detail in checks]}
        _emit(_json_doc(payload, manifest), args.out)
    else:
        for label, ok, detail in checks:
            print(("PASS  " if ok else "FAIL  ") + label + (f"  [{detail}]" if detail else ""))
    return 1 if failed else 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    host, _, port = args.bind.partition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port or 8000))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lifecover",
        description="Optimal life-insurance purchasing for a two-earner household "
                    f"(amounts in units of ${UNIT_DOLLARS:,.0f}).")
    parser.add_argument("--version", action="version", version=f"lifecover {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="path to a .toml or .json config")
        p.add_argument("--format", choices=_FORMATS, default="table")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write output to a file instead of stdout")

    p = sub.add_parser("solve", help="optimal benefits, policies, and quotes")
    common(p)
    p.add_argument("--scheme", choices=("single", "continuous", "both"), default=None)
    p.add_argument("--loading", type=float, default=None)
    p.add_argument("--loss-prob", dest="loss_prob", type=float, default=None)
    p.add_argument("--wealth", type=float, default=None,
                   help="include zero-consumption probabilities at this wealth")
    p.add_argument("--verbose", action="store_true",
                   help="include coefficient-solver diagnostics in the report")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("calibrate", help="premium rates hitting a target loss probability")
    common(p)
    p.add_argument("--loss-prob", dest="loss_prob", type=float, default=None)
    p.set_defaults(fn=cmd_calibrate)

    p = sub.add_parser("sweep", help="comparative statics along one parameter")
    common(p)
    p.add_argument("--param", required=True,
                   choices=("theta", "alpha", "income_x", "income_y", "lambda_x", "lambda_y"))
    p.add_argument("--from", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--steps", type=int, default=21)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("ruin", help="analytic zero-consumption probabilities")
    common(p)
    p.add_argument("--scheme", choices=("single", "continuous", "both"), default=None)
    p.add_argument("--wealth", type=float, required=True)
    p.set_defaults(fn=cmd_ruin)

    p = sub.add_parser("simulate", help="Monte Carlo checks next to the analytic values")
    common(p)
    p.add_argument("--scheme", choices=("single", "continuous", "both"), default=None)
    p.add_argument("--wealth", type=float, default=10.0)
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--dt", type=float, default=1.0 / 2000.0)
    p.add_argument("--horizon", type=float, default=2000.0)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="numerical optimality verification suite")
    common(p)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.set_defaults(fn=cmd_serve, config=None, format="table", seed=0, out=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigInvalid as exc:
        field_note = f" (field: {exc.field})" if exc.field else ""
        print(f"config error: {exc}{field_note}", file=sys.stderr)
        return 2
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except LifecoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
