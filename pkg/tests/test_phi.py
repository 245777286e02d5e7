import numpy as np
import pytest
import scipy.sparse as sp

from capbound.bounds import PhiTable, build_I, igraph_pair, lower_bound_edge, strip_classes, strip_upper_bound
from capbound.constraints import Constraint1D, axial_presentation, edge_form_axial
from capbound.graph import LabeledMultigraph
from capbound.phi import (
    MaxEntropicParams,
    PsiVector,
    max_entropic_phi,
    optimize_phi,
    window_marginal,
)
from capbound.spectral import perron, quadratic_form_power


@pytest.fixture(scope="module")
def full_form():
    # full binary shift presented by "last symbol read", two vertices
    g = LabeledMultigraph(["a", "b"], [(f"{x}{y}", x, y, y) for x in "ab" for y in "ab"])
    c = Constraint1D(g, "full")
    return edge_form_axial(c, c, "full2")


def test_params_validation():
    with pytest.raises(ValueError):
        MaxEntropicParams(-1, 0, 1)
    with pytest.raises(ValueError):
        MaxEntropicParams(0, 0, 0)
    assert MaxEntropicParams(3, 1, 2).omega == 9


@pytest.mark.parametrize("params", [(0, 0, 1), (1, 1, 1), (2, 1, 2)])
def test_marginal_is_distribution(even2_form, params):
    m = window_marginal(even2_form, MaxEntropicParams(*params))
    assert m.min() >= 0
    assert m.sum() == pytest.approx(1.0, abs=1e-12)


def test_full_shift_gives_uniform_weights(full_form):
    for mu, alpha in [(0, 1), (1, 1), (1, 2)]:
        phi = max_entropic_phi(full_form, MaxEntropicParams(1, mu, alpha))
        assert np.allclose(phi.weights, 2.0 ** (-alpha / 2), atol=1e-10)


def test_maxent_zero_where_impossible(nak_form):
    phi = max_entropic_phi(nak_form, MaxEntropicParams(1, 1, 1))
    # a 1 never sits on top of another 1
    assert phi.window(3) == ("1", "1")
    assert phi.weights[3] == 0.0
    assert phi.weights[:3].min() > 0


def test_maxent_rows_are_conditionals(nak_form):
    phi = max_entropic_phi(nak_form, MaxEntropicParams(2, 1, 1))
    cond = phi.weights.reshape(2, 2) ** 2
    assert np.allclose(cond.sum(axis=1), 1.0, atol=1e-12)


def test_maxent_small_chg_value(chg3_form):
    phi = max_entropic_phi(chg3_form, MaxEntropicParams(0, 0, 1))
    r = lower_bound_edge(chg3_form, 0, 1, 1, 2, phi)
    assert r.bound == pytest.approx(0.4188210386, abs=1e-9)


def test_psi_round_trip(nak_form):
    phi = max_entropic_phi(nak_form, MaxEntropicParams(1, 1, 1))
    psi = PsiVector.from_phi(phi)
    assert psi.values[psi.anchor] == 0.0
    back = psi.to_phi().weights
    pos = phi.weights > 0
    assert np.allclose(back[pos] * phi.weights[psi.anchor], phi.weights[pos], rtol=1e-12)
    with pytest.raises(ValueError):
        PsiVector(1, 1, phi.symbols, np.ones(4), 0)


def test_zero_psi_is_baseline(even2_form):
    k = even2_form.num_edge_vertices
    phi = PsiVector(1, 1, even2_form.edge_graph.vertices, np.zeros(k * k), 0).to_phi()
    a = lower_bound_edge(even2_form, 1, 1, 1, 3, phi).bound
    b = lower_bound_edge(even2_form, 1, 1, 1, 3).bound
    assert a == b


def test_budget_one_returns_init(even2_form):
    init = max_entropic_phi(even2_form, MaxEntropicParams(1, 1, 1))
    res = optimize_phi(even2_form, 1, 1, 1, 2, init, budget=1)
    assert res.phi is init
    assert res.bound == lower_bound_edge(even2_form, 1, 1, 1, 2, init).bound
    assert res.evaluations == 1


def test_optimizer_trace_and_reproducibility(even2_form):
    init = PhiTable.ones(1, 1, even2_form.edge_graph.vertices)
    a = optimize_phi(even2_form, 1, 1, 1, 2, init, budget=40, seed=3)
    b = optimize_phi(even2_form, 1, 1, 1, 2, init, budget=40, seed=3)
    assert a.trace == b.trace and np.array_equal(a.phi.weights, b.phi.weights)
    assert np.all(np.diff(a.trace) >= 0)
    assert len(a.trace) == 40
    assert a.bound >= a.trace[0]
    # the reported table really attains the reported bound
    assert lower_bound_edge(even2_form, 1, 1, 1, 2, a.phi).bound == pytest.approx(a.bound, abs=1e-14)


def test_optimizer_stays_below_upper(even, even2_form):
    init = max_entropic_phi(even2_form, MaxEntropicParams(1, 1, 1))
    res = optimize_phi(even2_form, 1, 1, 1, 2, init, budget=30)
    up = strip_upper_bound(axial_presentation([even, even]), 6).bound
    assert res.bound <= up


def test_optimizer_argument_checks(even2_form):
    init = PhiTable.ones(1, 1, even2_form.edge_graph.vertices)
    with pytest.raises(ValueError):
        optimize_phi(even2_form, 1, 1, 1, 2, init, budget=0)
    with pytest.raises(ValueError):
        optimize_phi(even2_form, 0, 1, 1, 2, init)


def test_log_root_is_midpoint_convex_in_psi(nak_form):
    rng = np.random.default_rng(2024)
    I = build_I(1, 2, strip_classes(nak_form, 3), nak_form.num_edge_vertices)
    size = nak_form.num_edge_vertices ** 3

    def log_root(psi):
        return np.log(perron(I.matrix(np.exp(psi))).lambda_hat)

    for _ in range(20):
        a, b = rng.normal(scale=1.5, size=(2, size))
        assert log_root((a + b) / 2) <= (log_root(a) + log_root(b)) / 2 + 1e-9


def test_relabeling_windows_commutes(full_form):
    # swapping the two row-graph vertices is an automorphism of the full shift
    pair = igraph_pair(full_form, 1, 1, 1, 1)
    rng = np.random.default_rng(5)
    w = rng.random(4) + 0.1
    swap = np.array([3, 2, 1, 0])  # (x, y) -> (not x, not y)
    for I in pair:
        assert perron(I.matrix(w)).lambda_hat == pytest.approx(
            perron(I.matrix(w[swap])).lambda_hat, rel=1e-11)


def _weight_vector(phi_single, k):
    z = np.ones(1)
    for _ in range(k):
        z = np.kron(z, phi_single)
    return z


def weighted_quadratic_forms(form, phi, n, ks):
    """``z_k^T H_k^n z_k`` with ``z_k`` the k-fold product of single-vertex weights."""
    out = []
    for k in ks:
        h = sp.csr_matrix(form.transfer(k))
        out.append(quadratic_form_power(h, _weight_vector(phi.weights, k), n))
    return np.array(out)


def test_weighted_growth_rate_decreases_to_root(chg3_form):
    # the strip spectrum has period two, so compare values two rows apart
    phi = max_entropic_phi(chg3_form, MaxEntropicParams(0, 0, 1))
    I = build_I(0, 1, strip_classes(chg3_form, 2), chg3_form.num_edge_vertices)
    lam = perron(I.matrix(phi)).lambda_hat
    vals = weighted_quadratic_forms(chg3_form, phi, 2, range(1, 9))
    est = np.sqrt(vals[2:] / vals[:-2])
    assert np.all(est > lam)
    assert np.all(np.diff(est) < 0)
