"""Pentagram measurement scenarios on a qutrit, empirical models and incidence.

Each measurement is a dichotomic observable ``B = I - 2P`` for a rank-one
projector ``P = |v><v|`` with ``v = (sin a cos t, cos a, sin a sin t)`` in the
basis ``|1>, |0>, |-1>``.  Outcome ``-1`` belongs to ``P`` and ``+1`` to
``I - P``.  A context ``(i, j)`` has its four outcome pairs ordered
``(-1,-1), (-1,+1), (+1,-1), (+1,+1)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import matcore as mc
from .errors import ConfigError, DomainError, ScenarioError

PENTAGRAM_CONTEXTS = ((0, 2), (0, 3), (1, 3), (1, 4), (2, 4))
KCBS_CONTEXTS = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))
OUTCOMES = ((-1, -1), (-1, 1), (1, -1), (1, 1))
GAMMA = 2

COMMUTE_TOL = 1e-9
NONCOMMUTE_MIN = 1e-3
IDEMPOTENT_TOL = 1e-10
GAMMA_TOL = 1e-6
CROSS_TOL = 1e-9

PI = math.pi


# ---------------------------------------------------------------------------
# projectors and angles


def projector_from_angles(alpha: float, theta: float) -> np.ndarray:
    v = np.array([math.sin(alpha) * math.cos(theta), math.cos(alpha),
                  math.sin(alpha) * math.sin(theta)])
    return np.outer(v, v).astype(np.complex128)


def phi(alpha_i: float, alpha_j: float) -> float:
    """``arccos(-cot a_i cot a_j)``."""
    x = -1.0 / (math.tan(alpha_i) * math.tan(alpha_j))
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"arccos argument {x:.6g} outside [-1, 1]")
    return math.acos(x)


def solve_alpha3(alpha0: float, alpha1: float, phi24: float, phi02: float,
                 phi14: float) -> float:
    """Closing angle of the pentagram chain, in (0, pi)."""
    s = phi24 + phi02 - phi14
    t0, t1 = math.tan(alpha0), math.tan(alpha1)
    rad = t1 * t1 + t0 * t0 - 2 * t1 * t0 * math.cos(s)
    if not rad > 0:
        raise DomainError("square-root argument in the alpha3 formula is not positive")
    x = t0 * t1 * math.sin(s) / math.sqrt(rad)
    # arccot with range (0, pi)
    return math.atan2(1.0, x)


@dataclass(frozen=True)
class AngleSet:
    theta0: float
    alphas: tuple
    thetas: tuple = ()
    label: str = "custom"

    @classmethod
    def derive(cls, theta0: float, alphas: Sequence[Optional[float]],
               label: str = "custom") -> "AngleSet":
        """Fill in ``alpha3`` (if ``None``) and the theta chain."""
        a = list(alphas)
        if len(a) != 5:
            raise ScenarioError("an angle set needs five alphas")
        p02 = phi(a[0], a[2])
        p24 = phi(a[2], a[4])
        p14 = phi(a[1], a[4])
        if a[3] is None:
            a[3] = solve_alpha3(a[0], a[1], p24, p02, p14)
        p03 = phi(a[0], a[3])
        p13 = phi(a[1], a[3])
        th = (theta0, theta0 - p03 - p13, theta0 - p02, theta0 - p03, theta0 - p24 - p02)
        return cls(theta0, tuple(float(x) for x in a), th, label)

    def gamma(self) -> float:
        return float(sum(math.sin(a) ** 2 * math.sin(t) ** 2
                         for a, t in zip(self.alphas, self.thetas)))

    def cross_term(self) -> float:
        return float(0.5 * sum(math.sin(a) ** 2 * math.sin(2 * t)
                               for a, t in zip(self.alphas, self.thetas)))

    def reduced_alphas(self) -> tuple:
        return tuple(math.remainder(a, 2 * PI) for a in self.alphas)


REFERENCE_ANGLE_INPUTS = {
    1: (3 * PI / 4, (9 * PI / 10, 29 * PI / 10, PI / 2, None, 0.54722012035572493 * PI)),
    2: (0.71549033656902731395587677242763007306802049110217 * PI,
        (9 * PI / 10, 2.83737665013 * PI, PI / 2, None, 0.54722012035572493 * PI)),
    3: (17 * PI / 20, (0.83999268322 * PI, 3 * PI / 4, PI / 2, None, PI / 2)),
}


def reference_angle_set(set_id: int) -> AngleSet:
    if set_id not in REFERENCE_ANGLE_INPUTS:
        raise ConfigError(f"unknown angle set {set_id!r}; expected 1, 2 or 3")
    theta0, alphas = REFERENCE_ANGLE_INPUTS[set_id]
    return AngleSet.derive(theta0, alphas, label=f"set{set_id}")


# ---------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class Scenario:
    n_measurements: int
    contexts: tuple
    projectors: tuple = ()
    name: str = ""
    angles: Optional[AngleSet] = None

    @property
    def observables(self) -> list:
        eye = np.eye(self.projectors[0].shape[0])
        return [eye - 2 * p for p in self.projectors]


def _comm(a, b) -> float:
    return float(np.max(np.abs(a @ b - b @ a)))


def scenario_report(scen: Scenario) -> dict:
    """Numerical diagnostics for a projector-backed scenario."""
    B = scen.observables
    ctx = {tuple(sorted(c)) for c in scen.contexts}
    comm, noncomm = {}, {}
    for i in range(scen.n_measurements):
        for j in range(i + 1, scen.n_measurements):
            (comm if (i, j) in ctx else noncomm)[(i, j)] = _comm(B[i], B[j])
    idem = max(float(np.max(np.abs(p @ p - p))) for p in scen.projectors)
    herm = max(float(np.max(np.abs(p - p.conj().T))) for p in scen.projectors)
    ground = mc.ground_projector(3)
    ground_sum = float(sum(mc.expect(ground, p).real for p in scen.projectors))
    out = {
        "name": scen.name,
        "context_commutators": comm,
        "noncontext_commutators": noncomm,
        "max_context_commutator": max(comm.values()),
        "min_noncontext_commutator": min(noncomm.values()),
        "idempotency": idem,
        "hermiticity": herm,
        "ground_sum": ground_sum,
    }
    if scen.angles is not None:
        out["alphas"] = scen.angles.alphas
        out["reduced_alphas"] = scen.angles.reduced_alphas()
        out["thetas"] = scen.angles.thetas
        out["gamma"] = scen.angles.gamma()
        out["cross_term"] = scen.angles.cross_term()
    return out


def _failures(rep: dict) -> list:
    bad = []
    if rep["max_context_commutator"] > COMMUTE_TOL:
        bad.append(f"context commutator {rep['max_context_commutator']:.3e} > {COMMUTE_TOL}")
    if rep["min_noncontext_commutator"] < NONCOMMUTE_MIN:
        bad.append(f"non-context commutator {rep['min_noncontext_commutator']:.3e} "
                   f"< {NONCOMMUTE_MIN}")
    if rep["idempotency"] > IDEMPOTENT_TOL:
        bad.append(f"projector idempotency {rep['idempotency']:.3e}")
    if abs(rep["ground_sum"] - GAMMA) > GAMMA_TOL:
        bad.append(f"ground-state sum {rep['ground_sum']:.12g} != {GAMMA}")
    if rep.get("cross_term", 0.0) > CROSS_TOL:
        bad.append(f"cross-term constraint {rep['cross_term']:.3e} > 0")
    return bad


def build_pentagram(spec, check: bool = True) -> Scenario:
    """Pentagram scenario from a reference set id (1, 2, 3) or an ``AngleSet``."""
    if isinstance(spec, AngleSet):
        angles = spec if spec.thetas else AngleSet.derive(spec.theta0, spec.alphas, spec.label)
    else:
        angles = reference_angle_set(int(spec))
    projs = tuple(projector_from_angles(a, t) for a, t in zip(angles.alphas, angles.thetas))
    scen = Scenario(5, PENTAGRAM_CONTEXTS, projs, angles.label, angles)
    if check:
        bad = _failures(scenario_report(scen))
        if bad:
            raise ScenarioError(f"pentagram '{angles.label}' is invalid: " + "; ".join(bad))
    return scen


# ---------------------------------------------------------------------------
# empirical models


@dataclass
class EmpiricalModel:
    n_measurements: int
    contexts: tuple
    rows: np.ndarray
    scenario_id: str = ""

    def vector(self) -> np.ndarray:
        return np.ascontiguousarray(np.asarray(self.rows, dtype=float).ravel())


def empirical_model(rho, scen: Scenario) -> EmpiricalModel:
    rho = mc.as_matrix(rho)
    eye = np.eye(rho.shape[0])
    rows = np.empty((len(scen.contexts), 4))
    for r, (i, j) in enumerate(scen.contexts):
        pi_i = {-1: scen.projectors[i], 1: eye - scen.projectors[i]}
        pi_j = {-1: scen.projectors[j], 1: eye - scen.projectors[j]}
        for s, (a, b) in enumerate(OUTCOMES):
            rows[r, s] = mc.expect(rho, pi_i[a] @ pi_j[b]).real
    if rows.min() < -1e-10:
        raise ScenarioError(f"negative probability {rows.min():.3e}: state is not valid")
    return EmpiricalModel(scen.n_measurements, tuple(scen.contexts), rows, scen.name)


def empirical_model_linear(drho, scen: Scenario) -> EmpiricalModel:
    """Model-table response to a traceless state perturbation (no checks)."""
    drho = mc.as_matrix(drho)
    eye = np.eye(drho.shape[0])
    rows = np.empty((len(scen.contexts), 4))
    for r, (i, j) in enumerate(scen.contexts):
        pi_i = {-1: scen.projectors[i], 1: eye - scen.projectors[i]}
        pi_j = {-1: scen.projectors[j], 1: eye - scen.projectors[j]}
        for s, (a, b) in enumerate(OUTCOMES):
            rows[r, s] = mc.expect(drho, pi_i[a] @ pi_j[b]).real
    return EmpiricalModel(scen.n_measurements, tuple(scen.contexts), rows, scen.name)


def incidence(scen_or_contexts, n_measurements: Optional[int] = None) -> np.ndarray:
    """0/1 matrix ``M[(C, s), g]``; bit ``i`` of ``g`` set means outcome +1 of ``m_i``."""
    if isinstance(scen_or_contexts, (Scenario, EmpiricalModel)):
        contexts = scen_or_contexts.contexts
        n = scen_or_contexts.n_measurements
    else:
        contexts = tuple(tuple(c) for c in scen_or_contexts)
        n = n_measurements if n_measurements is not None else 1 + max(max(c) for c in contexts)
    cols = 1 << n
    M = np.zeros((4 * len(contexts), cols), dtype=np.uint8)
    for g in range(cols):
        for r, (i, j) in enumerate(contexts):
            s = 2 * ((g >> i) & 1) + ((g >> j) & 1)
            M[4 * r + s, g] = 1
    return M


@dataclass
class ModelReport:
    ok: bool
    row_sums: list
    min_entry: float
    marginal_mismatch: float
    messages: list = field(default_factory=list)


def validate_model(model: EmpiricalModel, norm_tol: float = 1e-10,
                   neg_tol: float = 1e-12, nosig_tol: float = 1e-9) -> ModelReport:
    rows = np.asarray(model.rows, dtype=float)
    msgs = []
    sums = rows.sum(axis=1)
    for r, s in enumerate(sums):
        if abs(s - 1) > norm_tol:
            msgs.append(f"context {model.contexts[r]} sums to {s:.12g}")
    mn = float(rows.min()) if rows.size else 0.0
    if mn < -neg_tol:
        msgs.append(f"negative entry {mn:.3e}")
    # single-measurement marginals P(m = -1) per context
    marg = {}
    worst = 0.0
    for r, (i, j) in enumerate(model.contexts):
        for m, val in ((i, rows[r, 0] + rows[r, 1]), (j, rows[r, 0] + rows[r, 2])):
            if m in marg:
                diff = abs(marg[m][1] - val)
                worst = max(worst, diff)
                if diff > nosig_tol:
                    msgs.append(f"marginal of m{m} differs between contexts "
                                f"{marg[m][0]} and {model.contexts[r]} by {diff:.3e}")
            else:
                marg[m] = (model.contexts[r], val)
    return ModelReport(not msgs, [float(s) for s in sums], mn, worst, msgs)


# ---------------------------------------------------------------------------
# reference models and serialisation


def _prob(x) -> float:
    if isinstance(x, str):
        try:
            return float(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad probability {x!r}") from exc
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    raise ConfigError(f"bad probability {x!r}")


def model_from_dict(doc: dict, name: str = "") -> EmpiricalModel:
    try:
        n = int(doc["measurements"])
        contexts = tuple(tuple(int(k) for k in c) for c in doc["contexts"])
        rows = np.array([[_prob(p) for p in row] for row in doc["rows"]], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed model document: {exc}") from exc
    if rows.shape != (len(contexts), 4) or any(len(c) != 2 for c in contexts):
        raise ConfigError("model needs one 4-entry row per two-measurement context")
    if any(not 0 <= k < n for c in contexts for k in c):
        raise ConfigError("context index out of range")
    return EmpiricalModel(n, contexts, rows, name or doc.get("name", ""))


def model_to_dict(model: EmpiricalModel) -> dict:
    return {"measurements": model.n_measurements,
            "contexts": [list(c) for c in model.contexts],
            "rows": [[float(p) for p in row] for row in np.asarray(model.rows)]}


def load_model(path) -> EmpiricalModel:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_dict(doc, name=str(path))


def dump_model(model: EmpiricalModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


KCBS_TABLE1 = {
    "measurements": 5,
    "contexts": [list(c) for c in KCBS_CONTEXTS],
    "rows": [["0", "1/9", "2/3", "2/9"],
             ["0", "2/3", "1/3", "0"],
             ["0", "1/3", "1/3", "1/3"],
             ["0", "1/3", "2/3", "0"],
             ["0", "2/3", "1/9", "2/9"]],
}


def kcbs_table1() -> EmpiricalModel:
    return model_from_dict(KCBS_TABLE1, name="kcbs_table1")


def deterministic_model(g: int, contexts=PENTAGRAM_CONTEXTS, n: int = 5) -> EmpiricalModel:
    rows = np.zeros((len(contexts), 4))
    for r, (i, j) in enumerate(contexts):
        rows[r, 2 * ((g >> i) & 1) + ((g >> j) & 1)] = 1.0
    return EmpiricalModel(n, tuple(contexts), rows, f"deterministic_{g}")


def odd_cycle_model(contexts=PENTAGRAM_CONTEXTS, n: int = 5) -> EmpiricalModel:
    """Perfectly anti-correlated outcomes on every context."""
    rows = np.tile([0.0, 0.5, 0.5, 0.0], (len(contexts), 1))
    return EmpiricalModel(n, tuple(contexts), rows, "odd_cycle")
