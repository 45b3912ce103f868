"""Second-order detector density matrices built from smeared propagators.

Conventions
-----------
The excitation amplitude that fills the populations is
``lambda_d lambda_d' * W(Lambda^-_d, Lambda^+_d')``: negative frequency on the
first argument.  For a single detector it is real, non-negative and
suppressed by ``exp(-(T Omega)^2 / 2)`` at large gaps.  The coherence between
``|1>`` and ``|-1>`` uses the forward time-ordered ``W_fwd(Lambda^+, Lambda^+)``
and the qubit-qutrit pair term uses ``G_F(Lambda^+_2, Lambda^+_1)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fieldprop as fp
from . import matcore as mc
from . import numkernel as nk
from .errors import NumericalError, PreconditionError

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
QUBIT_QUTRIT = mc.BipartiteShape(2, 3)


@dataclass(frozen=True)
class UdwSystem:
    detectors: tuple
    eta: float = fp.DEFAULT_ETA
    allow_unequal_profiles: bool = False
    quad: nk.QuadratureSpec = nk.DEFAULT_QUAD

    def __post_init__(self):
        dets = tuple(self.detectors)
        object.__setattr__(self, "detectors", dets)
        if len(dets) == 1:
            if dets[0].dim != 3:
                raise PreconditionError("a single-detector system must be a qutrit")
        elif len(dets) == 2:
            if (dets[0].dim, dets[1].dim) != (2, 3):
                raise PreconditionError("a two-detector system must be (qubit, qutrit)")
        else:
            raise PreconditionError("only one or two detectors are supported")
        if not self.eta > 0:
            raise PreconditionError("eta must be positive")


@dataclass
class StateBundle:
    rho: np.ndarray
    order: str
    props: dict = field(default_factory=dict)
    # rho minus the initial ground state, built from the propagator values so
    # it carries no 1 - O(lambda^2) rounding
    drho: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


def ground_state(dim: int) -> StateBundle:
    return StateBundle(mc.ground_projector(dim), "initial", {},
                       np.zeros((dim, dim), dtype=np.complex128))


def _excitation(d: fp.DetectorParams, quad) -> complex:
    return fp.wightman(d, d, fp.MP, same_system=True, quad=quad).value


def _squeeze(d: fp.DetectorParams, quad) -> complex:
    return fp.wightman_ordered("Fwd", d, d, fp.PP, same_system=True, quad=quad).value


def _check_population(name: str, value: complex, scale: float) -> None:
    if value.real < -1e-15 * max(scale, 1e-300) or abs(value.imag) > 1e-12 * max(scale, 1e-300):
        log.warning("population %s = %r is not real non-negative", name, value)


def assemble_single_qutrit(sys: UdwSystem) -> StateBundle:
    if len(sys.detectors) != 1:
        raise PreconditionError("assemble_single_qutrit needs exactly one detector")
    d = sys.detectors[0]
    fp.strong_support_warning(d)
    lam2 = d.coupling ** 2
    w11 = lam2 * _excitation(d, sys.quad)
    wbar = lam2 * _squeeze(d, sys.quad)
    _check_population("W11", w11, lam2)
    drho = np.zeros((3, 3), dtype=np.complex128)
    drho[1, 1] = 2 * w11.real
    drho[2, 2] = -2 * w11.real
    drho[0, 2] = -2 * wbar
    drho[2, 0] = np.conj(drho[0, 2])
    rho = drho + mc.ground_projector(3)
    return StateBundle(rho, "second_order", {"W11": w11, "Wbar11": wbar}, drho)


def assemble_qubit_qutrit(sys: UdwSystem) -> StateBundle:
    if len(sys.detectors) != 2:
        raise PreconditionError("assemble_qubit_qutrit needs (qubit, qutrit) detectors")
    d1, d2 = sys.detectors
    for d in (d1, d2):
        fp.strong_support_warning(d)
    l1, l2 = d1.coupling, d2.coupling
    q = sys.quad
    w11 = l1 * l1 * _excitation(d1, q)
    w22 = l2 * l2 * _excitation(d2, q)
    w12 = l1 * l2 * fp.wightman(d1, d2, fp.MP, quad=q).value
    w21 = l1 * l2 * fp.wightman(d2, d1, fp.MP, quad=q).value
    wbar22 = l2 * l2 * _squeeze(d2, q)
    g21 = l1 * l2 * fp.feynman(d2, d1, fp.PP, quad=q,
                              allow_unequal_profiles=sys.allow_unequal_profiles).value
    _check_population("W11", w11, l1 * l1)
    _check_population("W22", w22, l2 * l2)
    if abs(w12 - np.conj(w21)) > 1e-10 * max(l1 * l2, 1e-300) + 1e-10 * abs(w12):
        raise NumericalError(
            f"cross-detector Wightman terms are not conjugate: {w12!r} vs {w21!r}")

    r62 = -SQRT2 * np.conj(g21)
    r46 = -2 * wbar22
    r66 = 1 - w11.real - 2 * w22.real
    drho = np.zeros((6, 6), dtype=np.complex128)
    drho[2, 2] = w11.real
    drho[2, 4] = SQRT2 * w21
    drho[4, 2] = SQRT2 * w12
    drho[4, 4] = 2 * w22.real
    drho[1, 5] = np.conj(r62)
    drho[5, 1] = r62
    drho[3, 5] = r46
    drho[5, 3] = np.conj(r46)
    drho[5, 5] = -w11.real - 2 * w22.real
    rho = drho + mc.ground_projector(6)
    props = {"W11": w11, "W22": w22, "W12": w12, "W21": w21, "Wbar22": wbar22,
             "G21": g21, "r46": r46, "r62": r62, "r66": r66}
    return StateBundle(rho, "second_order", props, drho)


def reduce_qutrit(bundle: StateBundle) -> StateBundle:
    """Trace out the qubit of a qubit-qutrit state."""
    if bundle.rho.shape != (6, 6):
        raise PreconditionError("reduce_qutrit expects a 6x6 state")
    red = mc.partial_trace(bundle.rho, QUBIT_QUTRIT, keep="B")
    dred = None
    if bundle.drho is not None:
        dred = np.ascontiguousarray(mc.partial_trace(bundle.drho, QUBIT_QUTRIT, keep="B"))
    props = {}
    if "W22" in bundle.props:
        props = {"W11": bundle.props["W22"], "Wbar11": bundle.props["Wbar22"]}
    return StateBundle(np.ascontiguousarray(red), bundle.order, props, dred)


def state_report(bundle: StateBundle, lam: Optional[float] = None) -> dict:
    """Trace, Hermiticity and smallest eigenvalue of ``bundle.rho``."""
    rho = bundle.rho
    ev = mc.eig_hermitian(0.5 * (rho + rho.conj().T))
    out = {
        "trace_error": abs(np.trace(rho) - 1),
        "hermiticity": float(np.max(np.abs(rho - rho.conj().T))),
        "min_eigenvalue": float(ev[0]),
    }
    if lam is not None:
        out["positivity_ok"] = bool(ev[0] >= -10 * lam ** 4)
    return out
