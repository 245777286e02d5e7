import itertools
from math import inf, log2

import numpy as np
import pytest

from capbound.constraints import (
    Constraint1D,
    PresentationND,
    axial_presentation,
    builtin_1d,
    builtin_2d,
    edge_form_axial,
    edge_form_vertex,
    filtered_power,
    lift,
    membership,
    recode_1x2,
    strip,
    transpose_2d,
)
from capbound.graph import LabeledMultigraph, determinize, find_edge_reversing_matching
from capbound.oracle import count_arrays_2d, count_words

GOLDEN = (1 + 5 ** 0.5) / 2
PRESETS_2D = ["nak", "rwim", "hard-square", "even2", "chg2_2d", "chg3_2d"]


@pytest.fixture(scope="module")
def presets():
    return {name: builtin_2d(name) for name in PRESETS_2D}


def full_shift_1d():
    g = LabeledMultigraph([0], [("0", 0, 0, "0"), ("1", 0, 0, "1")])
    return Constraint1D(g, "full")


def test_one_dimensional_capacities(even, odd, chg2):
    assert even.presentation.num_vertices == 2 and even.presentation.num_edges == 3
    assert even.capacity() == pytest.approx(log2(GOLDEN), abs=1e-12)
    assert odd.capacity() == pytest.approx(0.5, abs=1e-12)
    assert chg2.capacity() == pytest.approx(0.5, abs=1e-12)


def test_rll_parameters():
    hs = builtin_1d("rll", 1, inf)
    assert hs.capacity() == pytest.approx(log2(GOLDEN), abs=1e-12)
    assert membership("1001", builtin_1d("rll", 1, 2))
    assert not membership("10001", builtin_1d("rll", 1, 2))
    for bad in [("chg", 0), ("rll", 3, 1)]:
        with pytest.raises(ValueError):
            builtin_1d(*bad)


def test_deterministic_cache_matches_presentation(even, odd, chg3):
    for c in (even, odd, chg3):
        assert c.deterministic.graph.words(6) == c.presentation.words(6)


def test_window_presets(nak, rwim):
    # windows with at most one 1, plus two vertical pairs for rwim
    assert nak.num_edges == 5
    assert rwim.num_edges == 7
    v = nak.vertical
    used = {v.vertices[i] for i in np.unique(np.concatenate([v.src, v.dst]))}
    assert used == {"00", "01", "10"}
    h = rwim.horizontal
    used = {h.vertices[i] for i in np.unique(np.concatenate([h.src, h.dst]))}
    assert "11" in used


def test_small_counts(presets):
    assert count_arrays_2d(presets["nak"], 2, 2).count == 5
    assert count_arrays_2d(presets["hard-square"], 2, 2).count == 7
    assert count_arrays_2d(presets["chg2_2d"], 2, 2).count >= 2


def test_axial_first_row_is_1d(even):
    s = axial_presentation([even, even])
    for n in range(1, 7):
        assert count_arrays_2d(s, 1, n).count == count_words(even, n)
    assert axial_presentation([even]) is even


def test_axial_alphabet_mismatch(even, chg2):
    with pytest.raises(ValueError):
        axial_presentation([even, chg2])


def test_presentation_checks_shared_edges():
    g1 = LabeledMultigraph([0], [("a", 0, 0, "x")])
    g2 = LabeledMultigraph([0], [("b", 0, 0, "x")])
    with pytest.raises(ValueError):
        PresentationND([g1, g2])


def test_vertical_strip_of_nak(nak):
    v1 = strip(nak, 1, "vertical")
    assert count_words(v1, 3) == 5


def test_hard_square_height_two(hard_square):
    h2 = strip(hard_square, 2, "horizontal")
    assert h2.presentation.num_vertices == 3
    for n in range(1, 7):
        assert count_words(h2, n) == count_arrays_2d(hard_square, 2, n).count


def test_height_one_strips_are_1d(even2_form, even):
    s = axial_presentation([even, even])
    for d in ("horizontal", "vertical"):
        c = strip(s, 1, d)
        for n in range(6):
            assert count_words(c, n) == count_words(even, n)


def test_strip_bad_arguments(nak):
    with pytest.raises(ValueError):
        strip(nak, 0)
    with pytest.raises(ValueError):
        strip(nak, 1, "diagonal")


@pytest.mark.parametrize("name", PRESETS_2D)
def test_transpose_swaps_counts(presets, name):
    s = presets[name]
    t = transpose_2d(s)
    for m in range(1, 5):
        for n in range(1, 5):
            if m * n > 12:
                continue
            assert count_arrays_2d(t, n, m).count == count_arrays_2d(s, m, n).count


def test_transpose_involution(nak):
    tt = transpose_2d(transpose_2d(nak))
    assert tt.vertical == nak.vertical and tt.horizontal == nak.horizontal


@pytest.mark.parametrize("name", PRESETS_2D)
def test_recoding_count_identity(presets, name):
    s = presets[name]
    r = recode_1x2(s)
    for m in range(1, 6):
        for n in range(2, 6):
            if m * n > 16:
                continue
            assert count_arrays_2d(s, m, n).count == count_arrays_2d(r, m, n - 1).count


def test_recoded_rwim_is_axial(rwim):
    r = recode_1x2(rwim)
    cols, rows = strip(r, 1, "vertical"), strip(r, 1, "horizontal")
    ax = axial_presentation([cols, rows])
    assert count_arrays_2d(ax, 3, 3).count == count_arrays_2d(r, 3, 3).count


def test_recoded_full_shift():
    full = full_shift_1d()
    s = axial_presentation([full, full])
    r = recode_1x2(s)
    assert len(r.alphabet) == 4
    for m, n in [(1, 1), (2, 2), (2, 3)]:
        assert count_arrays_2d(r, m, n).count == 2 ** (m * (n + 1))


def test_lift_even_into_even(even):
    # edge words whose labels lie in the constraint; no path condition
    f = lift(even, even.presentation)
    g = even.presentation
    ids = list(g.edge_ids)
    expect = set()
    for L in range(6):
        for w in itertools.product(range(g.num_edges), repeat=L):
            if membership([g.alphabet[g.label[e]] for e in w], even):
                expect.add(tuple(ids[e] for e in w))
    assert f.presentation.words(5) == expect


def test_lift_chg_alphabet(chg3):
    f = lift(chg3, chg3.presentation)
    assert len(f.alphabet) == 6


def test_lift_of_full_shift_is_all_edge_words(chg2):
    # every edge sequence, path or not, since no transverse restriction applies
    full = Constraint1D(LabeledMultigraph([0], [("a", 0, 0, "+1"), ("b", 0, 0, "-1")]))
    f = lift(full, chg2.presentation)
    n = chg2.presentation.num_edges
    assert count_words(f, 3) == n ** 3


def test_lift_alphabet_mismatch(even, chg2):
    with pytest.raises(ValueError):
        lift(chg2, even.presentation)


@pytest.mark.parametrize("pair", [("even", "even"), ("chg", "chg")])
def test_lift_sandwich(pair):
    c = builtin_1d("even") if pair[0] == "even" else builtin_1d("chg", 2)
    r = axial_presentation([c, c])
    form = edge_form_axial(c, c)
    vs = form.num_edge_vertices
    for m in range(1, 5):
        for n in range(1, 5):
            if m * n > 12:
                continue
            cr = count_arrays_2d(r, m, n).count
            cu = count_arrays_2d(form.presentation, m, n).count
            assert cr <= cu <= cr * vs ** (2 * m)


def test_membership_examples(even, chg2):
    assert membership("00", even)
    assert not membership("101", even)
    assert membership("1001", even)
    assert membership("", even)
    assert not membership(["+1", "+1", "+1"], chg2)
    assert not membership("2", even)


@pytest.mark.parametrize("name", ["chg3", "even"])
def test_lifted_strips_are_symmetric(name, chg3, even):
    c = chg3 if name == "chg3" else even
    form = edge_form_axial(c, c)
    for m in range(1, 4):
        assert find_edge_reversing_matching(form.horizontal_strip(m)) is not None
    assert form.symmetric_strips(3)


def test_vertex_form_requires_vertex_constraint():
    # rows of odd are not a vertex constraint on their symbols
    odd = builtin_1d("odd")
    with pytest.raises(ValueError):
        edge_form_vertex(axial_presentation([odd, odd]))


def test_vertex_form_matches_strip_counts(nak, nak_form):
    # a width-n strip of the recoding is a width-(n+1) strip of the original
    for n in range(1, 5):
        a = nak_form.vertical_strip(n).graph.adjacency().toarray()
        ones = np.ones(a.shape[0])
        for m in range(1, 4):
            paths = ones @ np.linalg.matrix_power(a, m) @ ones
            assert paths == count_arrays_2d(nak, m + 1, n + 1).count


def test_filtered_power_overflow_guard(even):
    g = even.presentation
    dfa = np.zeros((1, len(g.alphabet)), dtype=np.int64)
    with pytest.raises(ValueError):
        filtered_power(g, 80, g.label, dfa)
