"""Command-line entry point: ``ctxharvest {sweep,scenario,cf,prop}``.

Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import ctxscen as cs
from . import fieldprop as fp
from . import lpcf
from . import sweep as sw
from .errors import ConfigError, CtxHarvestError, NumericalError, PreconditionError, ScenarioError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}") from exc


def _grid(text: str) -> sw.OmegaGrid:
    try:
        return sw.OmegaGrid.parse(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_sweep(sub) -> None:
    p = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--preset", choices=("figure1", "figure2"))
    p.add_argument("--setup", choices=sw.SETUPS)
    p.add_argument("--angle-set", type=int, choices=(1, 2, 3))
    p.add_argument("--omega", type=_grid, metavar="MIN:MAX:COUNT")
    p.add_argument("--T", type=_floats, metavar="LIST", dest="T")
    p.add_argument("--alpha-invsqrt", type=_floats, metavar="LIST")
    p.add_argument("--L", type=_floats, metavar="LIST", dest="L")
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--tbar", type=float)
    p.add_argument("--threshold", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output CSV path (default: stdout)")


def _add_scenario(sub) -> None:
    p = sub.add_parser("scenario", help="pentagram scenario tools")
    ssub = p.add_subparsers(dest="scenario_cmd", required=True, parser_class=_Parser)
    c = ssub.add_parser("check", help="print the validation report for an angle set")
    c.add_argument("set_id", type=int)


def _add_cf(sub) -> None:
    p = sub.add_parser("cf", help="contextual fraction of a JSON empirical model")
    p.add_argument("model_file")


def _add_prop(sub) -> None:
    p = sub.add_parser("prop", help="evaluate one smeared propagator")
    p.add_argument("kind", choices=[k.value for k in fp.Kind])
    p.add_argument("--params", default="",
                   help="first detector, e.g. 'omega=1,T=0.5,alpha=1,x=0,tbar=0'")
    p.add_argument("--params2", default=None, help="second detector (default: same as first)")
    p.add_argument("--signs", default="++", help="sign pair such as '+-'")
    p.add_argument("--same-system", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ctxharvest", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    _add_sweep(sub)
    _add_scenario(sub)
    _add_cf(sub)
    _add_prop(sub)
    return p


def _sweep_config(a) -> sw.SweepConfig:
    if a.config:
        cfg = sw.load_config(a.config)
    elif a.preset:
        cfg = sw.preset(a.preset)
    else:
        cfg = sw.SweepConfig()
    if a.config and a.preset:
        raise ConfigError("--config and --preset are mutually exclusive")
    over = dict(setup=a.setup, angle_set=a.angle_set, omega_grid=a.omega, temporal_widths=a.T,
                alpha_invsqrt=a.alpha_invsqrt, separations=a.L, lambda_=a.lam, tbar=a.tbar,
                threshold=a.threshold, workers=a.workers, output_path=a.out)
    return sw.with_overrides(cfg, **over)


def _cmd_sweep(a) -> int:
    cfg = _sweep_config(a)
    rows = sw.run_sweep(cfg)
    if not cfg.output_path:
        sys.stdout.write(sw.rows_to_csv(rows))
    failed = sum(1 for r in rows if r.error)
    if failed:
        print(f"{failed} of {len(rows)} rows failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _cmd_scenario(a) -> int:
    scen = cs.build_pentagram(a.set_id, check=False)
    rep = cs.scenario_report(scen)
    bad = cs._failures(rep)
    rep["failures"] = bad
    rep["valid"] = not bad
    print(json.dumps(_jsonable(rep), indent=2))
    return EXIT_OK if not bad else EXIT_NUMERIC


def _cmd_cf(a) -> int:
    model = cs.load_model(a.model_file)
    report = cs.validate_model(model)
    sol = lpcf.solve_ncf(cs.incidence(model), model.vector())
    out = {
        "contextual_fraction": 1.0 - sol.objective_value,
        "status": sol.status.value,
        "duality_gap": sol.duality_gap,
        "iterations": sol.iterations,
        "model_valid": report.ok,
        "model_messages": report.messages,
    }
    print(json.dumps(_jsonable(out), indent=2))
    if not report.ok:
        return EXIT_CONFIG
    return EXIT_OK if sol.status is lpcf.Status.OPTIMAL else EXIT_NUMERIC


_PARAM_KEYS = {"omega", "T", "alpha", "x", "y", "z", "tbar", "lambda"}


def _detector(text: str, dim: int = 3) -> fp.DetectorParams:
    vals = {"omega": 1.0, "T": 1.0, "alpha": 1.0, "x": 0.0, "y": 0.0, "z": 0.0,
            "tbar": 0.0, "lambda": 1e-4}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep or key.strip() not in _PARAM_KEYS:
            raise ConfigError(f"bad detector parameter {item!r}; keys are {sorted(_PARAM_KEYS)}")
        try:
            vals[key.strip()] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad value in {item!r}") from exc
    return fp.DetectorParams.single(dim, vals["omega"], vals["T"], vals["alpha"],
                                    (vals["x"], vals["y"], vals["z"]), vals["tbar"],
                                    vals["lambda"])


def _signs(text: str) -> fp.SignPair:
    if len(text) != 2 or any(c not in "+-" for c in text):
        raise ConfigError(f"sign pair must look like '+-', got {text!r}")
    return fp.SignPair(*(1 if c == "+" else -1 for c in text))


def _cmd_prop(a) -> int:
    d = _detector(a.params)
    d2 = d if a.params2 is None else _detector(a.params2)
    s = _signs(a.signs)
    closed = fp.evaluate(a.kind, d, d2, s, a.same_system, method="closed").value
    oracle = fp.evaluate(a.kind, d, d2, s, a.same_system, method="quadrature").value
    denom = max(abs(closed), abs(oracle))
    rel = abs(closed - oracle) / denom if denom > 0 else 0.0
    out = {"kind": a.kind, "closed_form": [closed.real, closed.imag],
           "quadrature": [oracle.real, oracle.imag], "relative_difference": rel}
    print(json.dumps(out, indent=2))
    return EXIT_OK


_COMMANDS = {"sweep": _cmd_sweep, "scenario": _cmd_scenario, "cf": _cmd_cf, "prop": _cmd_prop}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.cmd](args)
    except (ConfigError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ScenarioError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CtxHarvestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
