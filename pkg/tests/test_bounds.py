from math import log2

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capbound.bounds import (
    BoundReport,
    PhiTable,
    SymmetryError,
    build_I,
    cw_upper_bound,
    finite_count_upper,
    igraph_pair,
    lower_bound_edge,
    lower_bound_vertex,
    strip_classes,
    strip_transfer,
    strip_upper_bound,
)
from capbound.constraints import axial_presentation, builtin_1d, edge_form_axial, recode_1x2, strip
from capbound.graph import DeterministicGraph
from capbound.phi import MaxEntropicParams, max_entropic_phi
from capbound.spectral import perron

GOLDEN = (1 + 5 ** 0.5) / 2


def test_trivial_weights_give_strip_capacity(even2_form):
    # with mu = 0, alpha = 1 and unit weights, I is the strip presentation itself
    for n in (1, 2, 3):
        I = build_I(0, 1, even2_form.vertical_strip(n), even2_form.edge_graph)
        lam = perron(I.matrix(np.ones(even2_form.num_edge_vertices))).lambda_hat
        ref = perron(even2_form.vertical_strip(n).graph.adjacency()).lambda_hat
        assert lam == pytest.approx(ref, rel=1e-12)


def test_grouped_strip_matches_explicit(even2_form, nak_form):
    for form in (even2_form, nak_form):
        for n in (1, 2, 3):
            for mu, alpha in [(0, 1), (1, 1), (1, 2)]:
                a = build_I(mu, alpha, strip_classes(form, n), form.num_edge_vertices)
                b = build_I(mu, alpha, form.vertical_strip(n), form.edge_graph)
                rng = np.random.default_rng(n)
                w = rng.random(form.num_edge_vertices ** (mu + alpha)) + 0.1
                la = perron(a.matrix(w)).lambda_hat
                lb = perron(b.matrix(w)).lambda_hat
                assert la == pytest.approx(lb, rel=1e-11)
                assert a.num_paths == b.num_paths


def test_I_is_deterministic(nak_form):
    a = build_I(1, 2, strip_classes(nak_form, 3), nak_form.num_edge_vertices)
    b = build_I(1, 2, strip_classes(nak_form, 3), nak_form.num_edge_vertices)
    for f in ("src", "dst", "count", "left_window", "right_window"):
        assert np.array_equal(getattr(a, f), getattr(b, f))


@pytest.mark.parametrize("c", [0.5, 3.0])
def test_scaling_weights_leaves_bound(even2_form, c):
    phi = max_entropic_phi(even2_form, MaxEntropicParams(1, 1, 1))
    base = lower_bound_edge(even2_form, 1, 1, 1, 2, phi).bound
    scaled = lower_bound_edge(even2_form, 1, 1, 1, 2, phi.scaled(c)).bound
    assert scaled == pytest.approx(base, abs=1e-12)


def test_scaling_squares_matrix_entries(even2_form):
    I = build_I(1, 1, strip_classes(even2_form, 2), even2_form.num_edge_vertices)
    w = np.linspace(0.2, 1.0, even2_form.num_edge_vertices ** 2)
    a = I.matrix(w).csr.toarray()
    b = I.matrix(3 * w).csr.toarray()
    assert np.allclose(b, 9 * a, rtol=1e-14)


def test_baseline_ignores_window_shape(even2_form):
    ref = lower_bound_edge(even2_form, 0, 1, 1, 2).bound
    for mu, alpha in [(1, 1), (0, 2)]:
        got = lower_bound_edge(even2_form, mu, alpha, 1, 2).bound
        assert got == pytest.approx(ref, abs=1e-10)


def test_baseline_is_strip_ratio(even2_form):
    top = perron(even2_form.vertical_strip(5).graph.adjacency()).lambda_hat
    bot = perron(even2_form.vertical_strip(4).graph.adjacency()).lambda_hat
    r = lower_bound_edge(even2_form, 0, 1, 1, 2)
    assert r.bound == pytest.approx(log2(top / bot), abs=1e-10)
    assert r.method == "cw-baseline"


def test_vertex_and_edge_routes_agree_on_hard_square(hard_square):
    # hard-square is rll(1, inf) squared, which also has an edge route
    rll = builtin_1d("rll", 1, float("inf"))
    edge = edge_form_axial(rll, rll)
    e = lower_bound_edge(edge, 0, 1, 1, 3).bound
    v = lower_bound_vertex(hard_square, 0, 1, 1, 3).bound
    cw_up = cw_upper_bound(edge, 3).bound
    assert e <= cw_up and v <= cw_up
    assert abs(e - v) < 5e-3


def test_lower_report_fields(nak):
    r = lower_bound_vertex(nak, 0, 1, 2, 2)
    d = r.as_dict()
    assert set(d) == {"constraint", "method", "params", "bound", "certificates", "runtime_ms"}
    assert d["params"]["widths"] == [7, 5]
    assert [c["n"] for c in d["certificates"]] == [7, 5]
    for c in d["certificates"]:
        assert c["lo"] <= c["lambda"] <= c["hi"]


def test_lower_below_upper(nak, nak_form, even2_form):
    lo = lower_bound_vertex(nak, 0, 1, 2, 3, form=nak_form).bound
    assert lo <= strip_upper_bound(nak, 5, vertex_form=nak_form).bound
    assert lo <= cw_upper_bound(nak_form, 3).bound
    lo = lower_bound_edge(even2_form, 0, 1, 1, 3).bound
    assert lo <= cw_upper_bound(even2_form, 3).bound
    assert lo <= finite_count_upper(axial_presentation([builtin_1d("even")] * 2), 4, 4).bound


def test_phi_annihilates_strip(nak, nak_form):
    # weight only on symbol 1: a boundary column of all ones is not allowed
    phi = PhiTable(0, 1, nak_form.edge_graph.vertices, [0.0, 1.0])
    with pytest.raises(ValueError, match="phi annihilates strip"):
        lower_bound_vertex(nak, 0, 1, 1, 1, phi, form=nak_form)


def test_phi_validation(even2_form):
    s = even2_form.edge_graph.vertices
    with pytest.raises(ValueError):
        PhiTable(0, 1, s, -np.ones(len(s)))
    with pytest.raises(ValueError):
        PhiTable(0, 1, s, np.zeros(len(s)))
    with pytest.raises(ValueError):
        PhiTable(0, 1, s, np.ones(len(s) + 1))
    with pytest.raises(ValueError):
        lower_bound_edge(even2_form, 1, 1, 1, 2, PhiTable.ones(0, 1, s))


def test_phi_text_round_trip(nak_form):
    phi = max_entropic_phi(nak_form, MaxEntropicParams(1, 1, 1))
    text = phi.to_text()
    back = PhiTable.from_text(text, 1, 1, phi.symbols)
    assert np.array_equal(back.weights, phi.weights)
    assert text.splitlines()[0].startswith("window ")


def test_phi_text_errors(nak_form):
    s = nak_form.edge_graph.vertices
    with pytest.raises(ValueError, match="unknown vertex"):
        PhiTable.from_text("window zz weight 1\n", 0, 1, s)
    with pytest.raises(ValueError):
        PhiTable.from_text("window weight 1\n", 0, 1, s)


def test_strip_transfer_hard_square(hard_square):
    a = strip_transfer(hard_square, 1, "vertical").toarray()
    assert sorted(a.sum(axis=1).tolist()) == [1, 2]
    assert perron(a).lambda_hat == pytest.approx(GOLDEN, rel=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_recoded_nak_strips_symmetric(nak, m):
    from capbound.constraints import edge_form_vertex

    form = edge_form_vertex(nak)
    a = strip_transfer(form, m).csr
    assert (a - a.T).count_nonzero() == 0


def test_strip_upper_routes_agree(nak, nak_form):
    for n in (2, 3, 4):
        a = strip_upper_bound(nak, n).bound
        b = strip_upper_bound(nak, n, vertex_form=nak_form).bound
        assert a == pytest.approx(b, abs=1e-11)


def test_strip_upper_even2(even):
    r = strip_upper_bound(axial_presentation([even, even]), 1)
    assert r.bound == pytest.approx(log2(GOLDEN), abs=1e-11)
    assert r.method == "strip-upper"


def test_cw_upper_requires_symmetry(odd):
    even = builtin_1d("even")
    form = edge_form_axial(even, odd)
    with pytest.raises(SymmetryError):
        cw_upper_bound(form, 2)


def test_cw_upper_hard_square(hard_square):
    from capbound.constraints import edge_form_vertex

    r = cw_upper_bound(edge_form_vertex(hard_square), 4)
    assert 0.5878 <= r.bound <= 0.5880
    assert r.method == "cw-upper"


def test_finite_count_upper(nak):
    r = finite_count_upper(nak, 2, 2)
    assert r.bound == pytest.approx(log2(5) / 4)
    assert r.method == "finite-upper"


def test_report_json(nak):
    import json

    r = finite_count_upper(nak, 2, 2)
    d = json.loads(r.to_json())
    assert d["bound"] == r.bound and "estimate" not in d


@settings(max_examples=15)
@given(st.lists(st.floats(0.05, 4.0), min_size=4, max_size=4))
def test_weighted_bound_below_upper(even2_form, w):
    phi = PhiTable(0, 1, even2_form.edge_graph.vertices, w[: even2_form.num_edge_vertices])
    lo = lower_bound_edge(even2_form, 0, 1, 1, 2, phi).bound
    assert lo <= cw_upper_bound(even2_form, 3).bound + 1e-12
