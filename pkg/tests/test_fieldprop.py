import cmath
import math
import warnings

import numpy as np
import pytest
from scipy.special import erf, erfi

from ctxharvest import fieldprop as fp
from ctxharvest.errors import PreconditionError

import oracles
from grids import AINV, GRID_FULL, OMEGAS, TS

SIGNS = (fp.PP, fp.PM, fp.MP, fp.MM)
KINDS = ("Wightman", "WightmanFwd", "Hadamard", "Causal", "Retarded", "Advanced",
         "Symmetric", "Feynman")

warnings.filterwarnings("ignore", module="scipy")


def pair(omega, T, ainv, L, tbar2=0.0):
    a = ainv ** -2
    return (fp.DetectorParams.single(3, omega, T, a, (0, 0, 0)),
            fp.DetectorParams.single(3, omega, T, a, (L, 0, 0), tbar2))


def close(val, ref, scale, rel=1e-6):
    # relative where the value is resolvable, absolute against the W scale where
    # it is suppressed far below its constituents (oracle noise dominates there)
    return abs(val - ref) <= rel * max(abs(ref), 1e-3 * scale)


def w_scale(d, e, s):
    return max(abs(oracles.W(d, e, s.p, s.q)), abs(oracles.W(e, d, s.q, s.p)))


@pytest.mark.parametrize("point", GRID_FULL, ids=lambda p: "O%.1f-T%.3f-a%.1f-L%.1f" % p)
def test_closed_forms_match_oracles_on_grid(point):
    d, e = pair(*point)
    for s in SIGNS:
        scale = w_scale(d, e, s)
        for k in KINDS:
            c = fp.evaluate(k, d, e, s).value
            o = oracles.ORACLES[k](d, e, s.p, s.q)
            q = fp.evaluate(k, d, e, s, method="quadrature").value
            assert close(c, o, scale), (k, s, c, o)
            assert close(c, q, scale), (k, s, c, q)


@pytest.mark.parametrize("omega", OMEGAS[::2])
@pytest.mark.parametrize("T", TS)
@pytest.mark.parametrize("ainv", AINV)
def test_same_system_matches_oracles(omega, T, ainv):
    d = fp.DetectorParams.single(3, omega, T, ainv ** -2)
    for s in SIGNS:
        scale = w_scale(d, d, s)
        for k in KINDS:
            c = fp.evaluate(k, d, d, s, same_system=True).value
            o = oracles.ORACLES[k](d, d, s.p, s.q)
            assert close(c, o, scale), (k, s, c, o)


# ---------------------------------------------------------------------------
# time-domain oracle for the ordered pieces

@pytest.mark.parametrize("s", [fp.MP, fp.PM])
def test_mixed_sign_time_ordered_same_system(s):
    d = fp.DetectorParams.single(3, 1.0, 0.5, 4.0)
    v = fp.wightman_ordered("Fwd", d, d, s, same_system=True).value
    ref = oracles.time_ordered_2d(d, d, s.p, s.q)
    assert abs(v - ref) <= 1e-5 * abs(ref)


@pytest.mark.parametrize("alpha,L,s", [(4.0, 1.0, fp.MP), (100.0, 3.0, fp.MP),
                                       (100.0, 0.5, fp.PP)])
def test_time_ordered_different_systems(alpha, L, s):
    d = fp.DetectorParams.single(3, 1.5, 1.0, alpha)
    e = fp.DetectorParams.single(3, 1.5, 1.0, alpha, (L, 0, 0))
    v = fp.wightman_ordered("Fwd", d, e, s).value
    ref = oracles.time_ordered_2d(d, e, s.p, s.q, n=2401)
    assert abs(v - ref) <= 1e-5 * abs(ref)


def test_forward_plus_backward_is_wightman():
    d = fp.DetectorParams.single(3, 0.7, 0.8, 2.0)
    e = fp.DetectorParams.single(3, 1.2, 0.6, 2.0, (1.5, 0, 0), 0.3)
    for s in SIGNS:
        w = fp.wightman(d, e, s).value
        f = fp.wightman_ordered("Fwd", d, e, s).value
        b = fp.wightman_ordered("Bwd", d, e, s).value
        assert abs(f + b - w) <= 1e-9 * abs(w)


def test_alternate_wightman_formulation_same_system():
    d = fp.DetectorParams.single(3, 1.0, 0.7, 1.5, tbar=0.4)
    for s in SIGNS:
        w = fp.wightman(d, d, s, True).value
        fwd = fp.wightman_ordered("Fwd", d, d, s, True).value
        alt = fp.wightman_ordered("Fwd", d, d, s.negated_swapped(), True).value
        assert abs(fwd + alt.conjugate() - w) <= 1e-8 * abs(w)


# ---------------------------------------------------------------------------
# worked examples

def test_same_system_equal_signs_wightman_formula():
    for T, a, tb, p in ((1.0, 1.0, 0.0, 1), (0.3, 4.0, 0.5, -1), (2.0, 0.25, -1.0, 1)):
        d = fp.DetectorParams.single(3, 1.3, T, a, tbar=tb)
        beta = 2 / a
        s = fp.SignPair(p, p)
        ref = cmath.exp(-(T * 1.3) ** 2 / 2 + 2j * p * 1.3 * tb) / (2 * math.pi ** 2 * (beta + 2 * T * T))
        assert fp.wightman(d, d, s, True).value == pytest.approx(ref, rel=1e-12)
        assert abs(oracles.W(d, d, p, p) - ref) <= 1e-8 * abs(ref)


def test_same_sign_forward_formula():
    for T, a in ((1.0, 1.0), (0.5, 4.0), (0.2, 100.0)):
        d = fp.DetectorParams.single(3, 0.9, T, a)
        beta = 2 / a
        ref = (math.exp(-(0.9 * T) ** 2 / 2) * (1 - 1j * math.sqrt(2) * T / math.sqrt(beta))
               / (4 * math.pi ** 2 * (beta + 2 * T * T)))
        v = fp.wightman_ordered("Fwd", d, d, fp.PP, True).value
        assert v == pytest.approx(ref, rel=1e-12)


def test_zero_gap_makes_signs_irrelevant():
    d, e = pair(0.0, 0.5, 1.0, 1.0)
    for same, (x, y) in ((True, (d, d)), (False, (d, e))):
        ref = fp.wightman(x, y, fp.PP, same).value
        for s in SIGNS:
            assert fp.wightman(x, y, s, same).value == ref


def test_equal_signs_same_system_have_zero_commutator():
    d = fp.DetectorParams.single(3, 2.0, 0.4, 3.0)
    assert fp.causal(d, d, fp.PP, True).value == 0
    assert fp.causal(d, d, fp.MM, True).value == 0


def test_hadamard_is_the_w_sum():
    d = fp.DetectorParams.single(3, 1.0, 1.0, 1.0)
    h = fp.hadamard(d, d, fp.PM, True).value
    w = fp.wightman(d, d, fp.PM, True).value + fp.wightman(d, d, fp.MP, True).value
    assert abs(h - w) <= 1e-12 * abs(h)
    d, e = pair(1.0, 1.0, 1.0, 3.0)
    ref = oracles.H(d, e, 1, 1)
    assert abs(fp.hadamard(d, e, fp.PP).value - ref) <= 1e-8 * abs(ref)


def test_different_system_reference_example():
    d, e = pair(1.0, 1.0, 1.0, 1.0)
    ref = oracles.W(d, e, 1, 1)
    assert abs(fp.wightman(d, e, fp.PP).value - ref) <= 1e-8 * abs(ref)


def test_same_system_ratio_is_t_sqrt_alpha():
    d = fp.DetectorParams.single(3, 1.0, 0.5, 4.0)
    r = abs(fp.symmetric(d, d, fp.PP, True).value) / abs(fp.hadamard(d, d, fp.PP, True).value)
    assert r == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("L", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("omega", [0.0, 1.0, 2.5])
def test_different_system_ratio(L, omega):
    d = fp.DetectorParams.single(3, omega, 1.0, 1.0)
    e = fp.DetectorParams.single(3, omega, 1.0, 1.0, (L, 0, 0), L)
    r = abs(fp.symmetric(d, e, fp.PP).value) / abs(fp.hadamard(d, e, fp.PP).value)
    ref = math.exp(L * L) * abs(erf(L) / erfi(L))
    assert r == pytest.approx(ref, rel=1e-8)


def test_hadamard_gaussian_suppression():
    vals = [abs(fp.hadamard(*(2 * (fp.DetectorParams.single(3, om, 1.0, 1.0),)), fp.PP, True).value)
            for om in (0, 5, 10, 20)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-80


# ---------------------------------------------------------------------------
# identities and symmetries

def _draws(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        a = float(rng.choice([0.5, 1.0, 4.0, 25.0]))
        d = fp.DetectorParams.single(3, rng.uniform(0, 3), rng.uniform(0.1, 1.5), a,
                                     tbar=rng.uniform(-1, 1))
        e = fp.DetectorParams.single(3, rng.uniform(0, 3), rng.uniform(0.1, 1.5), a,
                                     tuple(rng.uniform(-2, 2, 3)), rng.uniform(-1, 1))
        yield d, e, SIGNS[int(rng.integers(4))]


def test_wightman_hermiticity():
    for d, e, s in _draws(50, 11):
        w = fp.wightman(d, e, s).value
        wc = fp.wightman(e, d, s.negated_swapped()).value
        assert abs(w.conjugate() - wc) <= 1e-10 * max(abs(w), 1e-300)


def test_definitional_identities():
    for d, e, s in _draws(25, 12):
        ev = {k: fp.evaluate(k, d, e, s).value for k in KINDS}
        w = ev["Wightman"]
        w2 = fp.wightman(e, d, s.swapped()).value
        tol = 1e-9 * max(abs(w), abs(w2))
        assert abs((ev["Hadamard"] + 1j * ev["Causal"]) / 2 - w) <= tol
        assert abs((ev["Hadamard"] - 1j * ev["Causal"]) / 2 - w2) <= tol
        assert abs(ev["Symmetric"] - ev["Retarded"] - ev["Advanced"]) <= tol
        assert abs(ev["Feynman"] - ev["Hadamard"] / 2 - 0.5j * ev["Symmetric"]) <= tol
        assert abs(ev["Advanced"] - (ev["Retarded"] - ev["Causal"])) <= tol
        ga_swap = fp.retarded(e, d, s.swapped()).value
        assert abs(ev["Advanced"] - ga_swap) <= tol


def test_same_system_retarded_minus_advanced_is_causal():
    d = fp.DetectorParams.single(3, 1.0, 1.0, 1.0)
    for s in SIGNS:
        gr = fp.retarded(d, d, s, True).value
        ga = fp.advanced(d, d, s, True).value
        e = fp.causal(d, d, s, True).value
        assert abs(gr - ga - e) <= 1e-9 * max(abs(gr), abs(ga), 1e-300)


def test_small_separation_continuity():
    for omega, T, a in ((1.0, 1.0, 1.0), (2.0, 0.3, 9.0), (0.0, 0.5, 100.0)):
        d = fp.DetectorParams.single(3, omega, T, a)
        e = fp.DetectorParams.single(3, omega, T, a, (1e-4, 0, 0))
        for k in ("Wightman", "Hadamard", "Retarded", "Feynman"):
            series = fp.evaluate(k, d, e, fp.PM).value
            direct = fp.evaluate(k, d, e, fp.PM, small_l_factor=0.0).value
            assert abs(series - direct) <= 1e-6 * abs(series), k
        # the series path also agrees with the local L = 0 limit to O(L^2)
        near = fp.wightman(d, e, fp.PP).value
        local = fp.wightman(d, d, fp.PP).value
        assert abs(near - local) <= 1e-6 * abs(local)


def test_multi_term_smearing_is_weighted_sum():
    terms = (fp.GaussTerm(1.0, 2.0), fp.GaussTerm(0.5, 2.0, (0.3, 0, 0)))
    d = fp.DetectorParams(3, 1.0, 0.7, 0.0, 1e-4, terms)
    e = fp.DetectorParams.single(3, 1.0, 0.7, 2.0, (2.0, 0, 0))
    w = d.weights()
    assert sum(w) == pytest.approx(1.0)
    singles = [fp.DetectorParams.single(3, 1.0, 0.7, 2.0, t.centre) for t in terms]
    for k in ("Wightman", "Retarded", "Feynman"):
        total = fp.evaluate(k, d, e, fp.PM).value
        parts = sum(wi * fp.evaluate(k, si, e, fp.PM).value for wi, si in zip(w, singles))
        assert abs(total - parts) <= 1e-12 * abs(total)


# ---------------------------------------------------------------------------
# preconditions

def test_unequal_alpha_needs_opt_in():
    d = fp.DetectorParams.single(3, 1.0, 1.0, 1.0)
    e = fp.DetectorParams.single(3, 1.0, 1.0, 4.0, (1.0, 0, 0))
    with pytest.raises(PreconditionError):
        fp.retarded(d, e, fp.PP)
    with pytest.raises(PreconditionError):
        fp.feynman(d, e, fp.PP)
    v = fp.retarded(d, e, fp.PP, allow_unequal_profiles=True).value
    assert math.isfinite(abs(v))
    fp.wightman(d, e, fp.PP)


def test_bad_inputs_rejected():
    d = fp.DetectorParams.single(3, 1.0, 1.0, 1.0)
    e = d.with_(omega=2.0)
    with pytest.raises(PreconditionError):
        fp.wightman(d, e, fp.PP, same_system=True)
    with pytest.raises(PreconditionError):
        fp.wightman(d, d, fp.PP, method="simpson")
    with pytest.raises(PreconditionError):
        fp.SignPair(1, 0)
    with pytest.raises(PreconditionError):
        fp.DetectorParams.single(3, 1.0, -1.0)
    with pytest.raises(PreconditionError):
        fp.DetectorParams.single(4, 1.0, 1.0)
    with pytest.raises(PreconditionError):
        fp.GaussTerm(1.0, 0.0)
    with pytest.raises(PreconditionError):
        fp.wightman_ordered("sideways", d, d, fp.PP)


def test_strong_support_warning(caplog):
    assert fp.strong_support_warning(fp.DetectorParams.single(3, 0.1, 2.0, 4.0))
    assert not fp.strong_support_warning(fp.DetectorParams.single(3, 5.0, 2.0, 4.0))
