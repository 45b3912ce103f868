import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxharvest import ctxscen as cs
from ctxharvest import fieldprop as fp
from ctxharvest import lpcf
from ctxharvest import matcore as mc
from ctxharvest import udwstate as us
from ctxharvest.errors import LpError, PreconditionError

from oracles import ncf_highs

M5 = cs.incidence(cs.PENTAGRAM_CONTEXTS, 5)


def relabelled_odd_cycle(flips):
    """Anti-correlation box with the outcomes of the flagged measurements swapped."""
    base = cs.odd_cycle_model()
    rows = base.rows.copy()
    for r, (i, j) in enumerate(base.contexts):
        block = rows[r].reshape(2, 2)
        if flips >> i & 1:
            block = block[::-1]
        if flips >> j & 1:
            block = block[:, ::-1]
        rows[r] = block.ravel()
    return cs.EmpiricalModel(5, base.contexts, rows)


def random_models(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        w = rng.dirichlet(np.full(32, 0.3))
        nc = (M5 @ w).reshape(5, 4)
        t = rng.uniform(0, 1) if rng.uniform() < 0.7 else 0.0
        ctx = relabelled_odd_cycle(int(rng.integers(32))).rows
        out.append(cs.EmpiricalModel(5, cs.PENTAGRAM_CONTEXTS, (1 - t) * nc + t * ctx))
    return out


def random_quantum_models(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        scen = cs.build_pentagram(1 + k % 3)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = a @ a.conj().T
        out.append(cs.empirical_model(rho / np.trace(rho), scen))
    return out


@pytest.mark.parametrize("g", range(32))
def test_deterministic_models_have_zero_cf(g):
    m = cs.deterministic_model(g)
    sol = lpcf.solve_ncf(M5, m.vector())
    assert sol.status is lpcf.Status.OPTIMAL
    assert lpcf.contextual_fraction(m) == 0.0
    assert sol.duality_gap <= 1e-9


def test_odd_cycle_is_strongly_contextual():
    m = cs.odd_cycle_model()
    assert cs.validate_model(m).ok
    assert abs(lpcf.contextual_fraction(m) - 1.0) <= 1e-12
    assert lpcf.normalized_violation(m) == pytest.approx(1.0)
    assert lpcf.violation_functional(m) == pytest.approx(lpcf.S_MAX)


@pytest.mark.parametrize("flips", range(32))
def test_relabelled_boxes(flips):
    # an odd number of anti-correlated contexts keeps the box strongly contextual
    m = relabelled_odd_cycle(flips)
    anti = sum(m.rows[r, 1] > 0 for r in range(5))
    cf = lpcf.contextual_fraction(m)
    assert cf == pytest.approx(1.0 if anti % 2 else 0.0, abs=1e-12)


def test_random_models_match_highs():
    models = random_models(70, 1) + random_quantum_models(30, 2)
    for m in models:
        assert cs.validate_model(m).ok
        sol = lpcf.solve_ncf(M5, m.vector())
        assert sol.status is lpcf.Status.OPTIMAL
        assert sol.duality_gap <= 1e-9
        assert abs(sol.objective_value - ncf_highs(M5.astype(float), m.vector())) <= 1e-9
        cf = 1 - sol.objective_value
        assert lpcf.normalized_violation(m) <= cf + 1e-9


def test_certificates_are_feasible():
    for m in random_models(20, 5):
        v = m.vector()
        sol = lpcf.solve_ncf(M5, v)
        assert np.all(sol.b_star >= -1e-12)
        assert np.all(M5 @ sol.b_star <= v + 1e-9)
        assert np.all(M5.T @ sol.dual >= 1 - 1e-9)
        assert np.all(sol.dual >= -1e-12)
        assert sol.objective_value == pytest.approx(v @ sol.dual, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(2, 8), st.integers(0, 2 ** 31 - 1))
def test_generic_packing_lps_match_highs(m, n, seed):
    rng = np.random.default_rng(seed)
    A = (rng.uniform(size=(m, n)) < 0.5).astype(float)
    A[rng.integers(m, size=n), np.arange(n)] = 1.0  # no empty column, so bounded
    v = rng.uniform(0, 1, m)
    sol = lpcf.solve_ncf(A, v)
    assert sol.status is lpcf.Status.OPTIMAL
    assert abs(sol.objective_value - ncf_highs(A, v)) <= 1e-9


def test_kcbs_table_cf_matches_oracle():
    m = cs.kcbs_table1()
    M = cs.incidence(m)
    assert lpcf.contextual_fraction(m) == pytest.approx(1 - ncf_highs(M.astype(float), m.vector()),
                                                        abs=1e-9)


def test_delta_cf_routes_agree():
    scen = cs.build_pentagram(1)
    g = mc.ground_projector(3)
    d = fp.DetectorParams.single(3, 0.0, 1 / 3, 1.0, coupling=0.03)
    drho = us.assemble_single_qutrit(us.UdwSystem((d,))).drho
    direct = lpcf.delta_cf(g + drho, g, scen)
    pert = lpcf.delta_cf_perturbative(g, drho, scen)
    assert direct > 0
    assert pert == pytest.approx(direct, rel=1e-6)
    # linear rescaling holds while the perturbation stays small
    assert lpcf.delta_cf_perturbative(g, 1e-5 * drho, scen) == pytest.approx(1e-5 * pert, rel=1e-6)
    assert lpcf.delta_cf_perturbative(g, 0 * drho, scen) == 0.0


def test_infeasible_and_bad_inputs():
    v = cs.deterministic_model(0).vector()
    v[0] = -1e-6
    assert lpcf.solve_ncf(M5, v).status is lpcf.Status.INFEASIBLE
    tiny = cs.deterministic_model(0).vector()
    tiny[1] = -1e-13  # clamped as rounding noise
    assert lpcf.solve_ncf(M5, tiny).status is lpcf.Status.OPTIMAL
    with pytest.raises(PreconditionError):
        lpcf.solve_ncf(M5, v[:5])
    v[0] = np.nan
    with pytest.raises(PreconditionError):
        lpcf.solve_ncf(M5, v)
    with pytest.raises(LpError):
        lpcf.solve_ncf(np.zeros((2, 2)), np.ones(2))
    bad = cs.EmpiricalModel(5, cs.PENTAGRAM_CONTEXTS, -np.ones((5, 4)))
    with pytest.raises(LpError):
        lpcf.contextual_fraction(bad)
    with pytest.raises(PreconditionError):
        lpcf.normalized_violation(cs.EmpiricalModel(2, ((0, 1),), np.ones((1, 4)) / 4))
