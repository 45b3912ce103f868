"""Smeared bi-distributions of a massless scalar field for Gaussian detectors.

Every quantity is a weighted sum over pairs of Gaussian spatial terms.  For a
single pair the spatial integral leaves a one-dimensional ``|k|`` integral

    W = e^g / (4 pi^2) * int_0^inf K_L(k) exp(-A k^2 + B k) dk,

with ``K_L(k) = sin(kL)/L`` (``k`` at ``L = 0``), ``A = (beta + T^2 + T'^2)/4``
and ``B = (p W T^2 - q W' T'^2)/2 - i (tbar - tbar')``.  The forward
time-ordered function carries the extra factor ``erfc(z(k))/2``.  Closed forms
are used wherever they exist; the remaining cases fall back on adaptive
quadrature of these integrands.

Coupling constants are not applied here.
"""

from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple

import numpy as np

from . import numkernel as nk
from .errors import DomainError, PreconditionError

log = logging.getLogger(__name__)

SQRT_PI = math.sqrt(math.pi)
PI2 = math.pi ** 2
SMALL_L_FACTOR = 1e-3
DEFAULT_ETA = 7.0


class Kind(str, enum.Enum):
    WIGHTMAN = "Wightman"
    WIGHTMAN_FWD = "WightmanFwd"
    WIGHTMAN_BWD = "WightmanBwd"
    HADAMARD = "Hadamard"
    CAUSAL = "Causal"
    RETARDED = "Retarded"
    ADVANCED = "Advanced"
    SYMMETRIC = "Symmetric"
    FEYNMAN = "Feynman"


class Method(str, enum.Enum):
    CLOSED = "ClosedForm"
    QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class GaussTerm:
    coeff: float
    alpha: float
    centre: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not (math.isfinite(self.coeff) and math.isfinite(self.alpha)):
            raise PreconditionError("Gaussian term parameters must be finite")
        if self.alpha <= 0:
            raise PreconditionError("alpha must be positive")
        c = tuple(float(x) for x in self.centre)
        if len(c) != 3:
            raise PreconditionError("centre must be a 3-vector")
        object.__setattr__(self, "centre", c)


@dataclass(frozen=True)
class DetectorParams:
    """One Unruh-DeWitt detector with Gaussian switching and smearing."""

    dim: int
    omega: float
    temporal_width: float
    temporal_centre: float = 0.0
    coupling: float = 1e-4
    gauss_terms: tuple = field(default_factory=lambda: (GaussTerm(1.0, 1.0),))

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise PreconditionError("detector dimension must be 2 or 3")
        if not (math.isfinite(self.omega) and self.omega >= 0):
            raise PreconditionError("omega must be finite and >= 0")
        if not (math.isfinite(self.temporal_width) and self.temporal_width > 0):
            raise PreconditionError("temporal width must be positive")
        if not math.isfinite(self.temporal_centre):
            raise PreconditionError("temporal centre must be finite")
        if not (math.isfinite(self.coupling) and self.coupling >= 0):
            raise PreconditionError("coupling must be finite and >= 0")
        terms = tuple(self.gauss_terms)
        if not terms:
            raise PreconditionError("at least one Gaussian term is required")
        object.__setattr__(self, "gauss_terms", terms)
        if not self.norm > 0:
            raise PreconditionError("smearing norm sum(c * alpha^-3/2) must be positive")

    @classmethod
    def single(cls, dim=3, omega=1.0, T=1.0, alpha=1.0, centre=(0.0, 0.0, 0.0),
               tbar=0.0, coupling=1e-4):
        return cls(dim, omega, T, tbar, coupling, (GaussTerm(1.0, alpha, centre),))

    @property
    def norm(self) -> float:
        return float(sum(t.coeff * t.alpha ** -1.5 for t in self.gauss_terms))

    def weights(self) -> list:
        n = self.norm
        return [t.coeff * t.alpha ** -1.5 / n for t in self.gauss_terms]

    def with_(self, **changes) -> "DetectorParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SignPair:
    p: int
    q: int

    def __post_init__(self):
        if self.p not in (1, -1) or self.q not in (1, -1):
            raise PreconditionError("sign pair entries must be +1 or -1")

    def swapped(self) -> "SignPair":
        return SignPair(self.q, self.p)

    def negated_swapped(self) -> "SignPair":
        return SignPair(-self.q, -self.p)


PP = SignPair(1, 1)
PM = SignPair(1, -1)
MP = SignPair(-1, 1)
MM = SignPair(-1, -1)


@dataclass(frozen=True)
class PairGeometry:
    beta: float
    separation: float
    delta_tbar: float


@dataclass(frozen=True)
class PropagatorValue:
    value: complex
    kind: Kind
    method: Method

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


# ---------------------------------------------------------------------------
# per-term-pair parameters


class _Pair(NamedTuple):
    O1: float
    T1: float
    t1: float
    O2: float
    T2: float
    t2: float
    beta: float
    L: float
    ae: float

    def swap(self) -> "_Pair":
        return _Pair(self.O2, self.T2, self.t2, self.O1, self.T1, self.t1,
                     self.beta, self.L, self.ae)

    @property
    def local(self) -> bool:
        return (self.L == 0.0 and self.O1 == self.O2 and self.T1 == self.T2
                and self.t1 == self.t2)


def _pairs(d: DetectorParams, d2: DetectorParams) -> Iterator[tuple]:
    w1 = d.weights()
    w2 = d2.weights()
    for a, ta in zip(w1, d.gauss_terms):
        for b, tb in zip(w2, d2.gauss_terms):
            beta = 1.0 / ta.alpha + 1.0 / tb.alpha
            L = math.dist(ta.centre, tb.centre)
            yield a * b, _Pair(d.omega, d.temporal_width, d.temporal_centre,
                               d2.omega, d2.temporal_width, d2.temporal_centre,
                               beta, L, 2.0 / beta), ta.alpha == tb.alpha


def pair_geometries(d: DetectorParams, d2: DetectorParams) -> list:
    """``(weight, PairGeometry)`` for every Gaussian term pair."""
    return [(w, PairGeometry(P.beta, P.L, P.t1 - P.t2)) for w, P, _ in _pairs(d, d2)]


def _g(p, q, P):
    return complex(-(P.T1 ** 2 * P.O1 ** 2 + P.T2 ** 2 * P.O2 ** 2) / 4.0,
                   p * P.O1 * P.t1 + q * P.O2 * P.t2)


def _small(P, factor):
    return P.L < factor * math.sqrt(P.beta)


# ---------------------------------------------------------------------------
# local (coincident, identical detector) closed forms


def _local_common(p, q, P):
    T, O = P.T1, P.O1
    S = math.sqrt(P.beta + 2 * T * T)
    gs = complex(-0.5 * (T * O) ** 2, (p + q) * O * P.t1)
    x = T * T * O * (p - q)
    u = x / (2 * S)
    return T, O, S, gs, x, u


def _W_local(p, q, P):
    T, O, S, gs, x, u = _local_common(p, q, P)
    val = cmath.exp(gs) * S
    if x != 0:
        val += 0.5 * SQRT_PI * x * nk.exp_erfc(gs + u * u, -u)
    return val / (2 * PI2 * S ** 3)


def _H_local(p, q, P):
    T, O, S, gs, x, u = _local_common(p, q, P)
    val = cmath.exp(gs) * S
    if x != 0:
        val += 0.5 * SQRT_PI * x * nk.exp_erf(gs + u * u, u)
    return val / (PI2 * S ** 3)


def _iE_local(p, q, P):
    T, O, S, gs, x, u = _local_common(p, q, P)
    if x == 0:
        return 0j
    return SQRT_PI * x * cmath.exp(gs + u * u) / (2 * PI2 * S ** 3)


def _V_local(p, q, P, quad):
    T, O, S, gs, x, u = _local_common(p, q, P)
    beta = P.beta
    if p == q:
        return cmath.exp(gs) / (4 * PI2 * S * S) * (1 - 1j * math.sqrt(2) * T / math.sqrt(beta))
    s = (p - q) // 2
    closed = 2.0 / S ** 3 * (cmath.exp(gs) * S
                             + s * SQRT_PI * O * T * T * nk.exp_erfc(gs + u * u, -u))
    r2 = T / math.sqrt(2.0)

    def f(k):
        w = (k - s * O) * r2
        dawson_like = nk.scaled_exp_erfi_array(-w * w, w).real
        return k * np.exp(-0.25 * beta * k * k) * dawson_like

    resid = nk.integrate_semi_infinite(f, 2.0 / math.sqrt(beta), quad)
    return (closed - 1j * resid) / (8 * PI2)


def _retarded_local_parts(p, q, P):
    T, O = P.T1, P.O1
    beta = P.beta
    S = math.sqrt(beta + 2 * T * T)
    a0 = complex(-((p + q) * O * T) ** 2 / 8.0, (p + q) * O * P.t1)
    lead = math.sqrt(4 * T * T + 2 * beta) / (T * math.sqrt(beta))
    h = 0.5 * O * (p - q)
    v = O * T * (p - q) * math.sqrt(beta) / (2 * math.sqrt(4 * T * T + 2 * beta))
    pre = -T * T / (2 * PI2 * S ** 3)
    return pre, a0, lead, h, v


def _GR_local(p, q, P, sign=1):
    pre, a0, lead, h, v = _retarded_local_parts(p, q, P)
    val = cmath.exp(a0) * lead
    if h != 0:
        tail = 1j * cmath.exp(a0 - v * v) - sign * nk.scaled_exp_erfi(a0 - v * v, v)
        val += sign * SQRT_PI * h * tail
    return pre * val


def _Delta_local(p, q, P):
    pre, a0, lead, h, v = _retarded_local_parts(p, q, P)
    val = cmath.exp(a0) * lead
    if h != 0:
        val -= SQRT_PI * h * nk.scaled_exp_erfi(a0 - v * v, v)
    return 2 * pre * val


def _GF_local(p, q, P):
    T, O, S, gs, x, u = _local_common(p, q, P)
    beta = P.beta
    val = S * (cmath.exp(gs) - 1j * math.sqrt(2) * T / math.sqrt(beta)
               * cmath.exp(gs + (O * T * (p - q)) ** 2 / 8.0))
    if x != 0:
        v = O * T * (p - q) * math.sqrt(beta) / (2 * math.sqrt(4 * T * T + 2 * beta))
        val += 0.5 * SQRT_PI * x * (nk.exp_erf(gs + u * u, u)
                                    + 1j * nk.scaled_exp_erfi(gs + u * u, v))
    return val / (2 * PI2 * S ** 3)


# ---------------------------------------------------------------------------
# separated-term closed forms


class _Diff(NamedTuple):
    g: complex
    R: float
    ep: complex
    em: complex
    zp: complex
    zm: complex
    xp: complex
    xm: complex


def _diff_common(p, q, P):
    c = p * P.O1 * P.T1 ** 2 - q * P.O2 * P.T2 ** 2
    dt = P.t2 - P.t1
    TT = P.T1 ** 2 + P.T2 ** 2
    R = math.sqrt(P.beta + TT)
    den = math.sqrt(TT * (2 * P.ae * TT + 4))
    L = P.L
    ep = (c + 2j * (dt + L)) ** 2 / (4 * R * R)
    em = (c + 2j * (dt - L)) ** 2 / (4 * R * R)
    zp = (2 * (dt + L) - 1j * c) / (2 * R)
    zm = (2 * (dt - L) - 1j * c) / (2 * R)
    xp = (-1j * P.ae * L * TT + 2j * dt + c) / den
    xm = (1j * P.ae * L * TT + 2j * dt + c) / den
    return _Diff(_g(p, q, P), R, ep, em, zp, zm, xp, xm)


def _W_diff(p, q, P):
    D = _diff_common(p, q, P)
    br = nk.exp_erfc(D.g + D.ep, -1j * D.zp) - nk.exp_erfc(D.g + D.em, -1j * D.zm)
    return SQRT_PI / (8j * P.L * PI2 * D.R) * br


def _H_diff(p, q, P):
    D = _diff_common(p, q, P)
    br = nk.scaled_exp_erfi(D.g + D.ep, D.zp) - nk.scaled_exp_erfi(D.g + D.em, D.zm)
    return SQRT_PI / (4 * P.L * PI2 * D.R) * br


def _iE_diff(p, q, P):
    D = _diff_common(p, q, P)
    br = cmath.exp(D.g + D.ep) - cmath.exp(D.g + D.em)
    return SQRT_PI / (4j * P.L * PI2 * D.R) * br


def _GR_diff(p, q, P):
    D = _diff_common(p, q, P)
    br = nk.exp_erfc(D.g + D.ep, -1j * D.xp) - nk.exp_erfc(D.g + D.em, -1j * D.xm)
    return -SQRT_PI / (8 * PI2 * P.L * D.R) * br


def _GA_diff(p, q, P):
    D = _diff_common(p, q, P)
    br = nk.exp_erfc(D.g + D.em, 1j * D.xm) - nk.exp_erfc(D.g + D.ep, 1j * D.xp)
    return -SQRT_PI / (8 * PI2 * P.L * D.R) * br


def _Delta_diff(p, q, P):
    D = _diff_common(p, q, P)
    br = nk.scaled_exp_erfi(D.g + D.ep, D.xp) - nk.scaled_exp_erfi(D.g + D.em, D.xm)
    return -1j * SQRT_PI / (4 * PI2 * P.L * D.R) * br


def _GF_diff(p, q, P):
    D = _diff_common(p, q, P)
    br = (nk.scaled_exp_erfi(D.g + D.ep, D.zp) + nk.scaled_exp_erfi(D.g + D.ep, D.xp)
          - nk.scaled_exp_erfi(D.g + D.em, D.zm) - nk.scaled_exp_erfi(D.g + D.em, D.xm))
    return SQRT_PI / (8 * PI2 * P.L * D.R) * br


# ---------------------------------------------------------------------------
# k-integral representation (small separations and quadrature method)


def _AB(p, q, P):
    TT = P.T1 ** 2 + P.T2 ** 2
    A = 0.25 * (P.beta + TT)
    B = complex(0.5 * (p * P.O1 * P.T1 ** 2 - q * P.O2 * P.T2 ** 2), -(P.t1 - P.t2))
    return A, B, TT


def _kernel(k, L):
    if L == 0.0:
        return k
    return np.sin(k * L) / L


def _W_moments(p, q, P):
    """Series in L of the k-integral; exact at L = 0, O(L^6) error otherwise."""
    A, B, _ = _AB(p, q, P)
    g = _g(p, q, P)
    sa = math.sqrt(A)
    m0 = 0.5 * math.sqrt(math.pi / A) * nk.exp_erfc(g + B * B / (4 * A), -B / (2 * sa))
    eg = cmath.exp(g)
    m = [m0]
    for n in range(5):
        prev = m[n - 1] if n >= 1 else 0j
        m.append((B * m[n] + n * prev + (eg if n == 0 else 0)) / (2 * A))
    L2 = P.L * P.L
    return (m[1] - L2 * m[3] / 6.0 + L2 * L2 * m[5] / 120.0) / (4 * PI2)


def _quad_setup(p, q, P):
    A, B, TT = _AB(p, q, P)
    width = 1.0 / math.sqrt(A)
    drift = max(B.real / (2 * A), 0.0)
    return A, B, TT, width, drift


def _W_quad(p, q, P, quad):
    A, B, _, width, drift = _quad_setup(p, q, P)
    g = _g(p, q, P)

    def f(k):
        return _kernel(k, P.L) * np.exp(g - A * k * k + B * k)

    return nk.integrate_semi_infinite(f, width, quad, drift) / (4 * PI2)


def _V_quad(p, q, P, quad):
    A, B, TT, width, drift = _quad_setup(p, q, P)
    # erfc grows like exp(k^2 TT / 4), so the tail only decays as exp(-beta k^2 / 4)
    width = max(width, 2.0 / math.sqrt(P.beta))
    g = _g(p, q, P)
    c = p * P.O1 * P.T1 ** 2 - q * P.O2 * P.T2 ** 2
    dt = P.t2 - P.t1
    rt = math.sqrt(TT)

    def f(k):
        z = (dt + 0.5j * (k * TT - c)) / rt
        return 0.5 * _kernel(k, P.L) * nk.exp_erfc_array(g - A * k * k + B * k, z)

    return nk.integrate_semi_infinite(f, width, quad, drift) / (4 * PI2)


# ---------------------------------------------------------------------------
# per-pair dispatch


@dataclass(frozen=True)
class _Opts:
    method: Method
    quad: nk.QuadratureSpec
    small_l_factor: float


def _pair_W(p, q, P, o):
    if o.method is Method.QUADRATURE:
        return _W_quad(p, q, P, o.quad)
    if P.local:
        return _W_local(p, q, P)
    if _small(P, o.small_l_factor):
        return _W_moments(p, q, P)
    return _W_diff(p, q, P)


def _pair_V(p, q, P, o):
    if o.method is Method.CLOSED and P.local:
        return _V_local(p, q, P, o.quad)
    return _V_quad(p, q, P, o.quad)


def _pair_H(p, q, P, o):
    if o.method is Method.CLOSED:
        if P.local:
            return _H_local(p, q, P)
        if not _small(P, o.small_l_factor):
            return _H_diff(p, q, P)
    return _pair_W(p, q, P, o) + _pair_W(q, p, P.swap(), o)


def _pair_iE(p, q, P, o):
    if o.method is Method.CLOSED:
        if P.local:
            return _iE_local(p, q, P)
        if not _small(P, o.small_l_factor):
            return _iE_diff(p, q, P)
    return _pair_W(p, q, P, o) - _pair_W(q, p, P.swap(), o)


def _pair_GF_composite(p, q, P, o):
    return _pair_V(p, q, P, o) + _pair_V(q, p, P.swap(), o)


def _pair_GF(p, q, P, o):
    if o.method is Method.CLOSED:
        if P.local:
            return _GF_local(p, q, P)
        if not _small(P, o.small_l_factor):
            return _GF_diff(p, q, P)
    return _pair_GF_composite(p, q, P, o)


def _pair_GR(p, q, P, o):
    if o.method is Method.CLOSED:
        if P.local:
            return _GR_local(p, q, P, 1)
        if not _small(P, o.small_l_factor):
            return _GR_diff(p, q, P)
    return -1j * (_pair_GF_composite(p, q, P, o) - _pair_W(q, p, P.swap(), o))


def _pair_GA(p, q, P, o):
    if o.method is Method.CLOSED:
        if P.local:
            return _GR_local(p, q, P, -1)
        if not _small(P, o.small_l_factor):
            return _GA_diff(p, q, P)
    return -1j * (_pair_GF_composite(p, q, P, o) - _pair_W(p, q, P, o))


def _pair_Delta(p, q, P, o):
    if o.method is Method.CLOSED:
        if P.local:
            return _Delta_local(p, q, P)
        if not _small(P, o.small_l_factor):
            return _Delta_diff(p, q, P)
    return _pair_GR(p, q, P, o) + _pair_GA(p, q, P, o)


# ---------------------------------------------------------------------------
# public API


def _options(method, quad, small_l_factor):
    aliases = {"closed": Method.CLOSED, "quadrature": Method.QUADRATURE}
    try:
        m = aliases[method] if method in aliases else Method(method)
    except ValueError:
        raise PreconditionError(f"unknown method {method!r}") from None
    if not small_l_factor >= 0:
        raise PreconditionError("small_l_factor must be >= 0")
    return _Opts(m, quad, small_l_factor)


def _check_same(d, d2, same_system):
    if same_system and d != d2:
        raise PreconditionError("same_system=True requires identical detector parameters")
    if not isinstance(d, DetectorParams) or not isinstance(d2, DetectorParams):
        raise PreconditionError("detectors must be DetectorParams")


def _sum(fn, d, d2, s, opts, need_equal_alpha=False, allow_unequal=False):
    total = 0j
    for w, P, equal_alpha in _pairs(d, d2):
        if need_equal_alpha and not equal_alpha and not P.local and not allow_unequal:
            raise PreconditionError(
                "retarded/advanced/symmetric/Feynman values between terms with "
                "unequal alpha are only available with allow_unequal_profiles=True")
        total += w * fn(s.p, s.q, P, opts)
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise DomainError("propagator evaluation produced a non-finite value")
    return total


def _api(kind, fn, need_equal_alpha=False):
    def op(d: DetectorParams, d2: DetectorParams, s: SignPair, same_system: bool = False,
           method="closed", quad: nk.QuadratureSpec = nk.DEFAULT_QUAD,
           small_l_factor: float = SMALL_L_FACTOR, allow_unequal_profiles: bool = False
           ) -> PropagatorValue:
        _check_same(d, d2, same_system)
        opts = _options(method, quad, small_l_factor)
        val = _sum(fn, d, d2, s, opts, need_equal_alpha, allow_unequal_profiles)
        return PropagatorValue(val, kind, opts.method)
    op.__name__ = kind.name.lower()
    return op


wightman = _api(Kind.WIGHTMAN, _pair_W)
wightman.__doc__ = "Smeared Wightman function W(Lambda^p_d, Lambda^q_d2)."

hadamard = _api(Kind.HADAMARD, _pair_H)
hadamard.__doc__ = "H = W(p,q;d,d2) + W(q,p;d2,d)."


def _pair_E(p, q, P, o):
    return -1j * _pair_iE(p, q, P, o)


causal = _api(Kind.CAUSAL, _pair_E)
causal.__doc__ = "Causal propagator E, with iE = W(p,q;d,d2) - W(q,p;d2,d)."

retarded = _api(Kind.RETARDED, _pair_GR, need_equal_alpha=True)
retarded.__doc__ = "Retarded propagator G_R."

advanced = _api(Kind.ADVANCED, _pair_GA, need_equal_alpha=True)
advanced.__doc__ = "Advanced propagator G_A."

symmetric = _api(Kind.SYMMETRIC, _pair_Delta, need_equal_alpha=True)
symmetric.__doc__ = "Symmetric propagator Delta = G_R + G_A."

feynman = _api(Kind.FEYNMAN, _pair_GF, need_equal_alpha=True)
feynman.__doc__ = "Feynman propagator G_F = H/2 + i Delta/2."

_fwd = _api(Kind.WIGHTMAN_FWD, _pair_V)


def wightman_ordered(direction: str, d: DetectorParams, d2: DetectorParams, s: SignPair,
                     same_system: bool = False, method="closed",
                     quad: nk.QuadratureSpec = nk.DEFAULT_QUAD,
                     small_l_factor: float = SMALL_L_FACTOR) -> PropagatorValue:
    """Time-ordered Wightman function.

    ``Fwd`` keeps the part of the double time integral where the first
    argument's time is later; ``Bwd`` keeps the complement, so
    ``Fwd + Bwd = W``.
    """
    direction = str(direction).capitalize()
    if direction == "Fwd":
        return _fwd(d, d2, s, same_system, method, quad, small_l_factor)
    if direction == "Bwd":
        # W(x, x')* = W(x', x) maps the complementary region onto a forward one
        v = _fwd(d2, d, s.negated_swapped(), same_system, method, quad, small_l_factor)
        return PropagatorValue(v.value.conjugate(), Kind.WIGHTMAN_BWD, v.method)
    raise PreconditionError("direction must be 'Fwd' or 'Bwd'")


def evaluate(kind, d, d2, s, same_system=False, **kw) -> PropagatorValue:
    """Dispatch by ``Kind`` (or its string value)."""
    kind = Kind(kind)
    table = {
        Kind.WIGHTMAN: wightman, Kind.HADAMARD: hadamard, Kind.CAUSAL: causal,
        Kind.RETARDED: retarded, Kind.ADVANCED: advanced, Kind.SYMMETRIC: symmetric,
        Kind.FEYNMAN: feynman,
    }
    if kind is Kind.WIGHTMAN_FWD:
        return wightman_ordered("Fwd", d, d2, s, same_system, **kw)
    if kind is Kind.WIGHTMAN_BWD:
        return wightman_ordered("Bwd", d, d2, s, same_system, **kw)
    return table[kind](d, d2, s, same_system, **kw)


def strong_support_warning(d: DetectorParams) -> bool:
    """Log a warning when the switching is too short for the smearing.

    Flags ``|Omega| T < 1`` together with ``T sqrt(alpha) > 1`` for any term.
    """
    T = d.temporal_width
    if abs(d.omega) * T < 1 and any(T * math.sqrt(t.alpha) > 1 for t in d.gauss_terms):
        log.warning("weak temporal support: |Omega|T=%.3g < 1 with T*sqrt(alpha) > 1",
                    abs(d.omega) * T)
        return True
    return False
