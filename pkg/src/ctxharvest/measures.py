"""Mana, negativity, the pentagram inequality and the genuine-harvesting test.

Closed forms assume a single Gaussian smearing term centred at ``tbar = 0``.
With ``S = sqrt(2 T^2 + 2/alpha)`` and ``u = T^2 Omega / S`` they share the
prefactor ``P = lambda^2 exp(-T^2 Omega^2 / 2) / (pi^2 S^3)`` and the term
``X = sqrt(pi) T^2 Omega erfc(u) exp(u^2)``.  The product ``exp(-T^2
Omega^2/2) X`` is evaluated in one piece to avoid overflow at large gaps.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from . import ctxscen as cs
from . import fieldprop as fp
from . import matcore as mc
from . import numkernel as nk
from . import udwstate as us
from .errors import PreconditionError, ScenarioError

SQRT3 = math.sqrt(3.0)
SQRT_PI = math.sqrt(math.pi)
SPARSITY_TOL = 1e-10
DEFAULT_THRESHOLD = 0.1


# ---------------------------------------------------------------------------
# mana

_SPARSE_FREE = {(1, 1), (2, 2), (0, 2), (2, 0)}


def _check_sparsity(rho: np.ndarray) -> None:
    if rho.shape != (3, 3):
        raise PreconditionError(f"mana needs a 3x3 state, got {rho.shape}")
    ground = mc.ground_projector(3)
    for i in range(3):
        for j in range(3):
            if (i, j) in _SPARSE_FREE:
                continue
            if abs(rho[i, j] - ground[i, j]) > SPARSITY_TOL:
                raise PreconditionError(
                    f"mana formula needs the harvested sparsity pattern; entry ({i},{j}) = "
                    f"{rho[i, j]!r}")


def _mana_excess(r22: float, re13: float, im13: float) -> float:
    # the three terms sum to 3 r22, so the excess is >= 0 up to rounding
    return max(0.0, -r22 + (abs(r22 + 2 * re13) + abs(r22 - re13 - SQRT3 * im13)
                            + abs(r22 - re13 + SQRT3 * im13)) / 3.0)


def mana(rho) -> float:
    """Mana of a qutrit state with only ``rho22``, ``rho33`` and ``rho13`` excited."""
    rho = mc.as_matrix(rho)
    _check_sparsity(rho)
    r13 = rho[0, 2]
    return math.log1p(_mana_excess(rho[1, 1].real, r13.real, r13.imag))


def mana_from_drho(drho) -> float:
    """Mana from the first-order part ``rho - |g><g|`` (no ``1 - x`` rounding)."""
    d = mc.as_matrix(drho)
    _check_sparsity(d + mc.ground_projector(3))
    r13 = d[0, 2]
    return math.log1p(_mana_excess(d[1, 1].real, r13.real, r13.imag))


@dataclass(frozen=True)
class _Closed:
    lam2: float
    S: float
    E: float     # exp(-T^2 Omega^2 / 2)
    EX: float    # E * X
    T: float
    alpha: float

    @property
    def pref(self) -> float:
        return self.lam2 / (math.pi ** 2 * self.S ** 3)


def _closed_inputs(d: fp.DetectorParams) -> _Closed:
    if d.temporal_centre != 0.0:
        raise PreconditionError("closed form needs the switching centred at tbar = 0")
    if len(d.gauss_terms) != 1:
        raise PreconditionError("closed form needs a single Gaussian smearing term")
    T = d.temporal_width
    alpha = d.gauss_terms[0].alpha
    om = d.omega
    S = math.sqrt(2 * T * T + 2 / alpha)
    u = T * T * om / S
    E = math.exp(-0.5 * (T * om) ** 2)
    EX = SQRT_PI * T * T * om * nk.exp_erfc(-0.5 * (T * om) ** 2 + u * u, u).real
    return _Closed(d.coupling ** 2, S, E, EX, T, alpha)


def mana_closed_form(d: fp.DetectorParams) -> float:
    c = _closed_inputs(d)
    k = SQRT3 * c.T * math.sqrt(c.alpha)
    SE = c.S * c.E
    bracket = (4.0 / 3.0 * c.EX - SE + abs(c.EX - 0.5 * (3 - k) * SE) / 3.0
               + abs(c.EX - 0.5 * (3 + k) * SE) / 3.0)
    return math.log1p(c.pref * max(0.0, bracket))


# ---------------------------------------------------------------------------
# negativity

def negativity(rho, shape: mc.BipartiteShape, subsystem: str = "B") -> float:
    """Sum of the magnitudes of the negative eigenvalues of the partial transpose."""
    rho = mc.as_matrix(rho)
    if rho.shape != (shape.dim, shape.dim):
        raise PreconditionError("state does not match the bipartite shape")
    ev = mc.eig_hermitian(mc.partial_transpose(rho, shape, subsystem))
    return float(-np.sum(ev[ev < 0]))


_NEG_KEYS = ("W11", "W22", "W12", "W21", "r46", "r62")


def _props(props: Mapping) -> dict:
    missing = [k for k in _NEG_KEYS if k not in props]
    if missing:
        raise PreconditionError(f"missing propagator scalars: {', '.join(missing)}")
    return {k: complex(props[k]) for k in _NEG_KEYS}


def _pair_sum_neg(a: float, disc: float) -> float:
    """``min(0, a + sqrt(a^2 + disc)) + min(0, a - sqrt(a^2 + disc))`` for ``a > 0``."""
    root = math.sqrt(a * a + disc)
    plus = a + root
    minus = -disc / plus if plus > 0 else a - root
    return min(0.0, plus) + min(0.0, minus)


def negativity_closed(props: Mapping) -> float:
    """Block-eigenvalue negativity of the second-order qubit-qutrit state.

    ``r66`` is taken from ``props`` when present, otherwise rebuilt as
    ``1 - W11 - 2 W22``.
    """
    p = _props(props)
    w11, w22 = p["W11"].real, p["W22"].real
    r66 = float(props["r66"].real if "r66" in props else 1 - w11 - 2 * w22)
    d1 = (8 * p["W21"] * p["W12"]).real + 4 * abs(p["r46"]) ** 2
    a2 = w11 + 2 * w22
    r62sq = abs(p["r62"]) ** 2
    root2 = math.sqrt((w11 - 2 * w22) ** 2 + 4 * r62sq)
    plus2 = a2 + root2
    # a2 - root2 with the cancellation removed
    minus2 = (8 * w11 * w22 - 4 * r62sq) / plus2 if plus2 > 0 else a2 - root2
    total = _pair_sum_neg(r66, d1) + min(0.0, plus2) + min(0.0, minus2)
    return 0.5 * abs(total)


def negativity_leading(props: Mapping) -> float:
    """Negativity to leading order in the couplings.

    Only the ``{W11, r62, 2 W22}`` block has an O(lambda^2) negative
    eigenvalue.  The other block contributes ``-(2|W12|^2 + |r46|^2) / r66``,
    which is O(lambda^4) and matches the smallest eigenvalue of the truncated
    state itself, so it is a positivity defect of the truncation rather than
    entanglement.
    """
    p = _props(props)
    w11, w22 = p["W11"].real, p["W22"].real
    r62sq = abs(p["r62"]) ** 2
    plus2 = w11 + 2 * w22 + math.sqrt((w11 - 2 * w22) ** 2 + 4 * r62sq)
    if plus2 <= 0:
        return 0.0
    return 0.5 * abs(min(0.0, (8 * w11 * w22 - 4 * r62sq) / plus2))


def negativity_simplified(props: Mapping) -> float:
    """Equal-parameter form under ``lambda1 = sqrt(2) lambda2``, as stated in the reference form.

    The reference form keeps ``W22`` in the third and fourth terms where the
    exact block reduction gives ``2 W22``; use ``negativity_closed`` for the
    exact value.
    """
    p = _props(props)
    w22 = p["W22"].real
    r62 = abs(p["r62"])
    first = -0.5 * (w22 ** 2 + (8 * p["W21"] * p["W12"]).real + 4 * abs(p["r46"]) ** 2)
    return abs(min(0.0, first) + min(0.0, r62 + w22) + min(0.0, -r62 + w22))


# ---------------------------------------------------------------------------
# pentagram inequality

def _check_pentagram(scen: cs.Scenario) -> None:
    if scen.n_measurements != 5 or not scen.projectors:
        raise PreconditionError("a projector-backed five-measurement scenario is required")
    if scen.projectors[0].shape != (3, 3):
        raise PreconditionError("pentagram projectors must act on a qutrit")


def s_c(rho, scen: cs.Scenario) -> float:
    """``sum_i Tr(rho P_i)``."""
    rho = mc.as_matrix(rho)
    _check_pentagram(scen)
    if rho.shape != (3, 3):
        raise PreconditionError("s_c needs a 3x3 state")
    return float(sum(mc.expect(rho, p).real for p in scen.projectors))


def s_c_delta(drho, scen: cs.Scenario) -> float:
    """Change of ``s_c`` under a traceless perturbation ``drho``."""
    return s_c(drho, scen)


@dataclass(frozen=True)
class InequalityCoeffs:
    ell1: float
    ell2: float
    flagged: bool = False
    residual: float = 0.0
    population_response: float = float("nan")
    coherence_response: float = float("nan")
    report: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.ell1) and math.isfinite(self.ell2)):
            raise PreconditionError("inequality coefficients must be finite")


def _closed_basis(d: fp.DetectorParams) -> tuple:
    """Closed-form ΔS_C is ``ell1 * f1 + ell2 * f2``; returns ``(f1, f2)``."""
    c = _closed_inputs(d)
    SE = c.S * c.E
    return c.pref * (c.EX - SE), c.pref * 2 * SE


def delta_s_c_closed(d: fp.DetectorParams, coeffs: InequalityCoeffs) -> float:
    f1, f2 = _closed_basis(d)
    return coeffs.ell1 * f1 + coeffs.ell2 * f2


# (omega, T, alpha) points used to pin the coefficient mapping, plus a check
CALIBRATION_POINTS = ((1.0, 1.0 / 3.0, 1.0), (0.5, 1.0, 1.0))
CHECK_POINT = (2.0, 0.5, 4.0)
CALIBRATION_TOL = 1e-8


def _basis_responses(scen: cs.Scenario) -> tuple:
    pop = np.zeros((3, 3))
    pop[1, 1], pop[2, 2] = 1.0, -1.0
    coh = np.zeros((3, 3))
    coh[0, 2] = coh[2, 0] = 1.0
    return s_c_delta(pop, scen), s_c_delta(coh, scen)


def _operator_route(d: fp.DetectorParams, scen: cs.Scenario) -> float:
    bundle = us.assemble_single_qutrit(us.UdwSystem((d,)))
    return s_c_delta(bundle.drho, scen)


def derive_inequality_coeffs(scen: cs.Scenario) -> InequalityCoeffs:
    """Coefficients that make ``delta_s_c_closed`` reproduce the operator route.

    The pentagram value responds linearly to the population shift and to the
    real part of the ``rho13`` coherence.  The map from those two responses
    to ``(ell1, ell2)`` is fixed by solving the closed form against assembled
    states at two parameter points and confirmed at a third.
    """
    _check_pentagram(scen)
    a, b_coh = _basis_responses(scen)
    rows, rhs = [], []
    for om, T, alpha in CALIBRATION_POINTS:
        d = fp.DetectorParams.single(3, om, T, alpha, coupling=1.0)
        rows.append(_closed_basis(d))
        rhs.append(_operator_route(d, scen))
    ell1, ell2 = np.linalg.solve(np.array(rows), np.array(rhs))
    coeffs = InequalityCoeffs(float(ell1), float(ell2))

    om, T, alpha = CHECK_POINT
    d = fp.DetectorParams.single(3, om, T, alpha, coupling=1.0)
    ref = _operator_route(d, scen)
    got = delta_s_c_closed(d, coeffs)
    residual = abs(got - ref) / max(abs(ref), 1e-300)
    # the closed form reduces to ell1 = -a, ell2 = -b_coh / 4
    structural = max(abs(ell1 + a), abs(ell2 + b_coh / 4)) / max(abs(a), abs(b_coh), 1e-300)
    flagged = residual > CALIBRATION_TOL or structural > CALIBRATION_TOL
    report = ""
    if flagged:
        report = (f"calibration inconsistent: check-point residual {residual:.3e}, "
                  f"structural mismatch {structural:.3e}")
    return InequalityCoeffs(float(ell1), float(ell2), flagged, residual, a, b_coh, report)


# Reference coefficients keyed by the sign label of each row.
REFERENCE_ROWS = (
    (">0", 0.390345, 0.445589),
    ("=0", 2.174898, 0.537879),
    ("<0", 0.902216, 0.451108),
)
# set id -> row, in the order the rows are listed
REFERENCE_COEFFS = {1: REFERENCE_ROWS[0][1:], 2: REFERENCE_ROWS[1][1:], 3: REFERENCE_ROWS[2][1:]}
REFERENCE_TOL = 1e-5
REFERENCE_SCALE = 4.0


def _sign_label(ell1: float, ell2: float, rel: float = 2e-3) -> str:
    gap = 2 * ell2 - ell1
    if abs(gap) <= rel * max(abs(ell1), abs(ell2)):
        return "=0"
    return ">0" if gap > 0 else "<0"


@dataclass
class ReferenceReconciliation:
    direct_match: bool
    direct_max_rel_error: float
    scale: float
    assignment: dict            # set id -> index of the reference row it matches
    reconciled_max_rel_error: float
    reconciled: bool
    derived: dict
    derived_signs: dict
    reference_signs: dict
    text: str = field(default="")

    @property
    def flagged(self) -> bool:
        return not self.direct_match


def _rel(a, b) -> float:
    return max(abs(x - y) / abs(y) for x, y in zip(a, b))


def reconcile_reference(derived: Optional[dict] = None) -> ReferenceReconciliation:
    """Compare derived coefficients with the reference table.

    First a direct comparison set by set.  If that fails, every assignment of
    derived sets to reference rows is tried with a single common scale fitted
    by least squares, and the best one is reported together with the sign
    pattern each set actually produces at zero gap.
    """
    if derived is None:
        derived = {}
        for sid in (1, 2, 3):
            c = derive_inequality_coeffs(cs.build_pentagram(sid))
            derived[sid] = (c.ell1, c.ell2)
    ref = [r[1:] for r in REFERENCE_ROWS]
    direct = max(_rel(derived[s], REFERENCE_COEFFS[s]) for s in (1, 2, 3))

    best = None
    for perm in itertools.permutations(range(3)):
        x = np.array([v for s in (1, 2, 3) for v in derived[s]])
        y = np.array([v for s, r in zip((1, 2, 3), perm) for v in ref[r]])
        scale = float(x @ y / (x @ x))
        err = max(_rel((scale * u, scale * v), ref[r])
                  for (u, v), r in zip((derived[s] for s in (1, 2, 3)), perm))
        if best is None or err < best[2]:
            best = (perm, scale, err)
    perm, scale, err = best
    assignment = {s: r for s, r in zip((1, 2, 3), perm)}
    derived_signs = {s: _sign_label(*derived[s]) for s in (1, 2, 3)}
    reference_signs = {s: _sign_label(*REFERENCE_COEFFS[s]) for s in (1, 2, 3)}

    lines = []
    if direct <= REFERENCE_TOL:
        lines.append(f"derived coefficients match the reference table directly "
                     f"(max rel. error {direct:.2e})")
    else:
        lines.append(f"direct comparison fails: max rel. error {direct:.3e}")
        lines.append(f"best common scale {scale:.9f} (nominal {REFERENCE_SCALE:g}) with "
                     f"max rel. error {err:.2e} under the row assignment "
                     + ", ".join(f"set {s} -> reference row {r + 1} '{REFERENCE_ROWS[r][0]}'"
                                 for s, r in assignment.items()))
        for s in (1, 2, 3):
            l1, l2 = derived[s]
            lines.append(f"  set {s}: derived ({l1:.9f}, {l2:.9f}), x{scale:.6f} = "
                         f"({scale * l1:.6f}, {scale * l2:.6f}); zero-gap sign "
                         f"{derived_signs[s]}; reference row {s} values give "
                         f"{reference_signs[s]} but are labelled '{REFERENCE_ROWS[s - 1][0]}'")
        lines.append("the operator-side sign of each set agrees with the reference labels; "
                     "the reference values of the '=0' and '<0' rows correspond to "
                     "sets 3 and 2 respectively")
    return ReferenceReconciliation(direct <= REFERENCE_TOL, direct, scale, assignment, err,
                               err <= REFERENCE_TOL, dict(derived), derived_signs,
                               reference_signs, "\n".join(lines))


def reference_coeffs(set_id: int) -> InequalityCoeffs:
    """Reference coefficients for a set, in the reference normalisation."""
    if set_id not in REFERENCE_COEFFS:
        raise ScenarioError(f"no reference coefficients for set {set_id!r}")
    l1, l2 = REFERENCE_COEFFS[set_id]
    return InequalityCoeffs(l1, l2)


# ---------------------------------------------------------------------------
# genuine harvesting

@dataclass(frozen=True)
class HarvestVerdict:
    ratio: float
    delta_cf: float
    threshold: float = DEFAULT_THRESHOLD
    genuine: bool = False


def harvest_ratio(d: fp.DetectorParams, d2: Optional[fp.DetectorParams] = None,
                  same_system: Optional[bool] = None, **kw) -> tuple:
    """``(|Delta(+,+)|, |H(+,+)|, ratio)`` for one detector or a pair."""
    if d2 is None:
        d2 = d
        same_system = True if same_system is None else same_system
    elif same_system is None:
        same_system = d2 is d
    sym = abs(fp.symmetric(d, d2, fp.PP, same_system=same_system, **kw).value)
    had = abs(fp.hadamard(d, d2, fp.PP, same_system=same_system, **kw).value)
    ratio = sym / had if had > 1e-300 else math.inf
    return sym, had, ratio


def harvest_verdict(d: fp.DetectorParams, d2: Optional[fp.DetectorParams], delta_cf: float,
                    threshold: float = DEFAULT_THRESHOLD, same_system: Optional[bool] = None,
                    **kw) -> HarvestVerdict:
    if not threshold >= 0:
        raise PreconditionError("threshold must be non-negative")
    _, _, ratio = harvest_ratio(d, d2, same_system, **kw)
    genuine = bool(ratio <= threshold and delta_cf > 0)
    return HarvestVerdict(ratio, float(delta_cf), float(threshold), genuine)


def verdict_from_values(ratio: float, delta_cf: float,
                        threshold: float = DEFAULT_THRESHOLD) -> HarvestVerdict:
    return HarvestVerdict(ratio, delta_cf, threshold, bool(ratio <= threshold and delta_cf > 0))
