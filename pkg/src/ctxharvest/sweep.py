"""Parameter sweeps over (Omega, T, alpha, L) and their CSV output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional, Sequence

import numpy as np

from . import ctxscen as cs
from . import fieldprop as fp
from . import lpcf
from . import matcore as mc
from . import measures as ms
from . import udwstate as us
from .errors import ConfigError, CtxHarvestError

log = logging.getLogger(__name__)

SETUPS = ("single_qutrit", "qubit_qutrit")


@dataclass(frozen=True)
class OmegaGrid:
    min: float
    max: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError("omega grid bounds must be finite")
        if self.min < 0 or self.max < self.min:
            raise ConfigError("omega grid needs 0 <= min <= max")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError("omega grid count must be an integer >= 2")

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, int(self.count))

    @classmethod
    def parse(cls, text: str) -> "OmegaGrid":
        parts = str(text).split(":")
        if len(parts) != 3:
            raise ConfigError(f"omega grid must be MIN:MAX:COUNT, got {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ConfigError(f"bad omega grid {text!r}: {exc}") from exc


@dataclass(frozen=True)
class SweepConfig:
    setup: str = "single_qutrit"
    angle_set: int = 1
    omega_grid: OmegaGrid = OmegaGrid(0.0, 4.0, 81)
    temporal_widths: tuple = (1 / 30, 1 / 10, 1 / 3, 1.0)
    alpha_invsqrt: tuple = (1.0, 0.1)
    separations: tuple = ()
    lambda_: float = 1e-4
    tbar: float = 0.0
    threshold: float = ms.DEFAULT_THRESHOLD
    output_path: Optional[str] = None
    # lambda_qubit / lambda_qutrit; sqrt(2) gives the simplified-negativity point
    coupling_ratio: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.setup not in SETUPS:
            raise ConfigError(f"setup must be one of {SETUPS}, got {self.setup!r}")
        if self.angle_set not in cs.REFERENCE_ANGLE_INPUTS:
            raise ConfigError(f"angle set must be 1, 2 or 3, got {self.angle_set!r}")
        if not isinstance(self.omega_grid, OmegaGrid):
            raise ConfigError("omega_grid must be an OmegaGrid")
        for name in ("temporal_widths", "alpha_invsqrt", "separations"):
            vals = tuple(float(v) for v in getattr(self, name))
            object.__setattr__(self, name, vals)
        if not self.temporal_widths or any(not (t > 0 and math.isfinite(t))
                                           for t in self.temporal_widths):
            raise ConfigError("temporal widths must be a non-empty list of positive values")
        if not self.alpha_invsqrt or any(not (a > 0 and math.isfinite(a))
                                         for a in self.alpha_invsqrt):
            raise ConfigError("alpha_invsqrt must be a non-empty list of positive values")
        if self.setup == "qubit_qutrit":
            if not self.separations or any(not (L >= 0 and math.isfinite(L))
                                           for L in self.separations):
                raise ConfigError("qubit_qutrit sweeps need non-negative separations")
        if not (self.lambda_ >= 0 and math.isfinite(self.lambda_)):
            raise ConfigError("lambda must be finite and >= 0")
        if not math.isfinite(self.tbar):
            raise ConfigError("tbar must be finite")
        if not self.threshold >= 0:
            raise ConfigError("threshold must be >= 0")
        if not self.coupling_ratio > 0:
            raise ConfigError("coupling_ratio must be positive")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError("workers must be a positive integer")

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)} | {"lambda"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kw = dict(doc)
        if "lambda" in kw:
            kw["lambda_"] = kw.pop("lambda")
        grid = kw.get("omega_grid")
        if isinstance(grid, str):
            kw["omega_grid"] = OmegaGrid.parse(grid)
        elif isinstance(grid, dict):
            try:
                kw["omega_grid"] = OmegaGrid(float(grid["min"]), float(grid["max"]),
                                             int(grid["count"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad omega_grid {grid!r}") from exc
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        return d


def load_config(path) -> SweepConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return SweepConfig.from_dict(doc)


def preset(name: str) -> SweepConfig:
    if name == "figure1":
        return SweepConfig()
    if name == "figure2":
        return SweepConfig(setup="qubit_qutrit", separations=(0.5, 3.0))
    raise ConfigError(f"unknown preset {name!r}; expected figure1 or figure2")


@dataclass
class SweepRow:
    omega: float
    T: float
    alpha_invsqrt: float
    L: Optional[float] = None
    delta_cf_over_lambda2: float = math.nan
    mana_over_lambda2: float = math.nan
    negativity_over_lambda2: Optional[float] = None
    abs_sym_prop: float = math.nan
    abs_hadamard: float = math.nan
    ratio: float = math.nan
    genuine: bool = False
    s_c_delta: float = math.nan
    error: str = ""


COLUMNS = tuple(f.name for f in fields(SweepRow))


def _points(cfg: SweepConfig) -> list:
    seps = cfg.separations if cfg.setup == "qubit_qutrit" else (None,)
    return [(float(om), T, a, L) for om in cfg.omega_grid.values()
            for T in cfg.temporal_widths for a in cfg.alpha_invsqrt for L in seps]


def _evaluate(cfg: SweepConfig, scen: cs.Scenario, om: float, T: float, ainv: float,
              L: Optional[float]) -> SweepRow:
    alpha = ainv ** -2
    lam = cfg.lambda_
    lam2 = lam * lam
    row = SweepRow(om, T, ainv, L)
    if cfg.setup == "single_qutrit":
        d = fp.DetectorParams.single(3, om, T, alpha, tbar=cfg.tbar, coupling=lam)
        q = us.assemble_single_qutrit(us.UdwSystem((d,)))
        sym, had, ratio = ms.harvest_ratio(d)
    else:
        d1 = fp.DetectorParams.single(2, om, T, alpha, tbar=cfg.tbar,
                                      coupling=lam * cfg.coupling_ratio)
        d2 = fp.DetectorParams.single(3, om, T, alpha, centre=(L, 0.0, 0.0), tbar=cfg.tbar,
                                      coupling=lam)
        joint = us.assemble_qubit_qutrit(us.UdwSystem((d1, d2)))
        q = us.reduce_qutrit(joint)
        sym, had, ratio = ms.harvest_ratio(d1, d2, same_system=False)
        row.negativity_over_lambda2 = ms.negativity_leading(joint.props) / lam2
    dcf = lpcf.delta_cf_perturbative(mc.ground_projector(3), q.drho, scen)
    row.delta_cf_over_lambda2 = dcf / lam2
    row.mana_over_lambda2 = ms.mana_from_drho(q.drho) / lam2
    row.s_c_delta = ms.s_c_delta(q.drho, scen)
    row.abs_sym_prop, row.abs_hadamard, row.ratio = sym, had, ratio
    row.genuine = ms.verdict_from_values(ratio, dcf, cfg.threshold).genuine
    return row


def _safe_evaluate(args) -> SweepRow:
    cfg, scen, (om, T, ainv, L) = args
    try:
        return _evaluate(cfg, scen, om, T, ainv, L)
    except (CtxHarvestError, ArithmeticError, ValueError) as exc:
        log.warning("row omega=%g T=%g alpha_invsqrt=%g L=%s failed: %s", om, T, ainv, L, exc)
        return SweepRow(om, T, ainv, L, error=f"{type(exc).__name__}: {exc}")


def run_sweep(cfg: SweepConfig) -> list:
    """Evaluate the full grid in omega-major order; failed rows carry ``error``."""
    if cfg.lambda_ == 0:
        raise ConfigError("lambda must be positive for per-lambda^2 columns")
    scen = cs.build_pentagram(cfg.angle_set)
    jobs = [(cfg, scen, p) for p in _points(cfg)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=int(cfg.workers)) as pool:
            rows = list(pool.map(_safe_evaluate, jobs, chunksize=16))
    else:
        rows = [_safe_evaluate(j) for j in jobs]
    if cfg.output_path:
        emit_csv(rows, cfg.output_path)
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def emit_csv(rows: Sequence[SweepRow], path) -> None:
    """Write rows atomically (temp file in the target directory, then rename)."""
    text = rows_to_csv(rows)
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".sweep-", suffix=".csv", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(f"cannot write sweep output {path}: {exc}") from exc


def _parse(v: str, kind):
    if v == "":
        return None
    if kind is bool:
        return v == "true"
    if kind is str:
        return v
    return float(v)


_KINDS = {"genuine": bool, "error": str}


def read_csv(path) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        rd = csv.DictReader(fh)
        if tuple(rd.fieldnames or ()) != COLUMNS:
            raise ConfigError(f"{path} does not have the sweep columns")
        out = []
        for rec in rd:
            kw = {c: _parse(rec[c], _KINDS.get(c, float)) for c in COLUMNS}
            kw["error"] = kw["error"] or ""
            out.append(SweepRow(**kw))
    return out


def with_overrides(cfg: SweepConfig, **changes) -> SweepConfig:
    changes = {k: v for k, v in changes.items() if v is not None}
    return replace(cfg, **changes) if changes else cfg
