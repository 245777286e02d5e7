"""One- and two-dimensional constraints and their structural transformations.

Direction 1 of a two-dimensional presentation is vertical: every column of
an edge array is a path in the vertical graph and every row is a path in
the horizontal graph.  The generated constraint is the set of label arrays.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from math import inf, log2
from typing import Sequence

import numpy as np

from .graph import (
    DeterministicGraph,
    LabeledMultigraph,
    ProductSequence,
    check_size,
    determinize,
    essential_mask,
    sort_key,
)

__all__ = [
    "Constraint1D",
    "PresentationND",
    "Presentation2D",
    "EdgeConstraintView",
    "EdgeStripForm",
    "subset_automaton",
    "builtin_1d",
    "builtin_2d",
    "window_presentation",
    "axial_presentation",
    "strip",
    "filtered_power",
    "recode_1x2",
    "lift",
    "transpose_2d",
    "membership",
    "edge_form_axial",
    "edge_form_vertex",
]

INFINITY = inf


def subset_automaton(delta: np.ndarray) -> np.ndarray:
    """Subset construction of a partial transition table from all states.

    Parameters
    ----------
    delta : (n_states, n_symbols) int array
        Deterministic transitions, ``-1`` where undefined.

    Returns
    -------
    (n_subsets, n_symbols) int array
        Transitions between reachable nonempty subsets, ``-1`` where the
        image is empty.  Row 0 is the set of all states.
    """
    delta = np.asarray(delta)
    n, k = delta.shape
    start = frozenset(range(n))
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        cur = np.fromiter(order[i], dtype=np.int64)
        row = np.full(k, -1, dtype=np.int64)
        for a in range(k):
            img = delta[cur, a]
            img = frozenset(img[img >= 0].tolist())
            if not img:
                continue
            if img not in index:
                index[img] = len(order)
                order.append(img)
            row[a] = index[img]
        rows.append(row)
        i += 1
    return np.array(rows, dtype=np.int64).reshape(len(rows), k)


class Constraint1D:
    """A one-dimensional constraint given by a labeled-graph presentation.

    Parameters
    ----------
    presentation : LabeledMultigraph
    name : str, optional
    """

    def __init__(self, presentation: LabeledMultigraph, name: str | None = None):
        self.presentation = presentation
        self.name = name

    @property
    def alphabet(self) -> Sequence:
        return self.presentation.alphabet

    @cached_property
    def deterministic(self) -> DeterministicGraph:
        """Deterministic presentation, built on first use."""
        return determinize(self.presentation)

    @cached_property
    def dfa(self) -> np.ndarray:
        """Transition table of the subset automaton started from all states."""
        return subset_automaton(self.deterministic.delta)

    def accepts(self, word: Sequence) -> bool:
        """Whether ``word`` (a sequence of alphabet symbols) is generated."""
        idx = self.presentation.label_index
        state = 0
        for a in word:
            j = idx.get(a)
            if j is None:
                return False
            state = self.dfa[state, j]
            if state < 0:
                return False
        return True

    def capacity(self, rel_tol: float = 1e-12) -> float:
        """``log2`` of the Perron root of the deterministic presentation."""
        from .spectral import perron

        cert = perron(self.deterministic.graph.adjacency(), rel_tol=rel_tol)
        return log2(cert.lambda_hat) if cert.lambda_hat > 0 else -inf

    def __repr__(self):
        return f"Constraint1D({self.name or self.presentation!r})"


def membership(word: Sequence, c: Constraint1D) -> bool:
    """True iff some path of ``c``'s presentation generates ``word``."""
    if isinstance(word, str) and all(len(str(a)) == 1 for a in c.alphabet):
        word = list(word)
    return c.accepts(word)


class EdgeConstraintView:
    """The edge constraint of a graph: words are paths, labeled by edge ids."""

    def __init__(self, graph: LabeledMultigraph):
        self.graph = graph.relabeled(graph.edge_ids, np.arange(graph.num_edges))

    @property
    def vertices(self):
        return self.graph.vertices

    @property
    def edges(self):
        return self.graph.edge_ids

    @cached_property
    def constraint(self) -> Constraint1D:
        return Constraint1D(self.graph, name="edge constraint")

    @cached_property
    def automaton(self) -> np.ndarray:
        """Deterministic table: state = last vertex, symbol = edge index."""
        g = self.graph
        t = np.full((g.num_vertices, g.num_edges), -1, dtype=np.int64)
        t[g.src, np.arange(g.num_edges)] = g.dst
        return t


# multidimensional presentations


class PresentationND:
    """``D`` labeled graphs over one edge set with one labeling.

    Parameters
    ----------
    graphs : sequence of LabeledMultigraph
        ``graphs[i]`` holds the endpoints in direction ``i``; direction 0 is
        vertical for ``D = 2``.
    factors : sequence of Constraint1D, optional
        Set by :func:`axial_presentation`; enables faster strip and count
        routines that work on the factors.
    """

    def __init__(self, graphs: Sequence[LabeledMultigraph], factors=None, name=None):
        graphs = tuple(graphs)
        g0 = graphs[0]
        for g in graphs[1:]:
            if (list(g.edge_ids) != list(g0.edge_ids)
                    or list(g.alphabet) != list(g0.alphabet)
                    or not np.array_equal(g.label, g0.label)):
                raise ValueError("graphs must share edge ids and labels")
        self.graphs = graphs
        self.factors = None if factors is None else tuple(factors)
        self.name = name

    @property
    def dim(self) -> int:
        return len(self.graphs)

    @property
    def alphabet(self):
        return self.graphs[0].alphabet

    @property
    def edge_ids(self):
        return self.graphs[0].edge_ids

    @property
    def label(self) -> np.ndarray:
        return self.graphs[0].label

    @property
    def num_edges(self) -> int:
        return self.graphs[0].num_edges

    @classmethod
    def from_edges(cls, edges, vertex_sets=None, alphabet=None, name=None):
        """Build from ``(edge_id, label, (src_1, dst_1), ..., (src_D, dst_D))``."""
        edges = list(edges)
        D = len(edges[0]) - 2
        graphs = []
        for i in range(D):
            verts = set() if vertex_sets is None else set(vertex_sets[i])
            for e in edges:
                verts.update(e[2 + i])
            graphs.append(LabeledMultigraph(
                verts, [(e[0], e[2 + i][0], e[2 + i][1], e[1]) for e in edges], alphabet))
        return cls(graphs, name=name)

    def __repr__(self):
        return f"{type(self).__name__}({self.name or ''}, |E|={self.num_edges})"


class Presentation2D(PresentationND):
    """Pair (vertical graph, horizontal graph) sharing edges and labels."""

    def __init__(self, graphs, factors=None, name=None):
        if len(graphs) != 2:
            raise ValueError("a 2D presentation has exactly two graphs")
        super().__init__(graphs, factors, name)

    @property
    def vertical(self) -> LabeledMultigraph:
        return self.graphs[0]

    @property
    def horizontal(self) -> LabeledMultigraph:
        return self.graphs[1]


def _wrap(graphs, factors=None, name=None):
    return (Presentation2D if len(graphs) == 2 else PresentationND)(graphs, factors, name)


def axial_presentation(cs: Sequence[Constraint1D], name=None):
    """Fiber-product presentation of the axial product of ``cs``.

    Edges are label-agreeing tuples ``(e_1, ..., e_D)`` of edges of the
    factor presentations; in direction ``i`` an edge inherits the endpoints
    of ``e_i``.  Lossless factors give a capacity-preserving presentation.

    Returns
    -------
    Presentation2D, PresentationND, or the single constraint when D = 1.
    """
    cs = list(cs)
    if len(cs) == 1:
        return cs[0]
    alph = set(cs[0].alphabet)
    for c in cs[1:]:
        if set(c.alphabet) != alph:
            raise ValueError("axial factors must share one alphabet")
    by_label = []
    for c in cs:
        g = c.presentation
        groups: dict = {}
        for i, a in enumerate(g.label.tolist()):
            groups.setdefault(g.alphabet[a], []).append(i)
        by_label.append(groups)
    alphabet = tuple(sorted(alph, key=sort_key))
    tuples = []
    for a in alphabet:
        lists = [grp.get(a, []) for grp in by_label]
        for combo in itertools.product(*lists):
            tuples.append((a, combo))
    gs = [c.presentation for c in cs]
    tuples.sort(key=lambda t: sort_key(tuple(gs[i].edge_ids[e] for i, e in enumerate(t[1]))))
    ids = tuple(tuple(gs[i].edge_ids[e] for i, e in enumerate(t[1])) for t in tuples)
    aidx = {a: i for i, a in enumerate(alphabet)}
    lab = np.array([aidx[t[0]] for t in tuples], dtype=np.int64)
    graphs = []
    for i, g in enumerate(gs):
        comp = np.array([t[1][i] for t in tuples], dtype=np.int64)
        graphs.append(LabeledMultigraph.from_arrays(
            g.vertices, alphabet, g.src[comp], g.dst[comp], lab, ids))
    return _wrap(graphs, factors=cs, name=name)


def transpose_2d(s: Presentation2D) -> Presentation2D:
    """Swap the vertical and horizontal roles."""
    f = None if s.factors is None else s.factors[::-1]
    name = None if s.name is None else (s.name[:-2] if s.name.endswith("-t") else s.name + "-t")
    return Presentation2D((s.horizontal, s.vertical), factors=f, name=name)


# strips


def filtered_power(base: LabeledMultigraph, m: int, symbol: np.ndarray,
                   dfa: np.ndarray) -> LabeledMultigraph:
    """Tensor power of ``base`` restricted by a transverse automaton.

    An ``m``-tuple of edges is kept iff the automaton ``dfa`` (row 0 is the
    start state) accepts ``symbol[e_1] ... symbol[e_m]``.  The tuples are
    built one coordinate at a time; a first pass collects reachable target
    tuples so that source tuples which are nobody's target are never built.
    The result is trimmed of inessential vertices.

    Vertices are :class:`ProductSequence` tuples of base vertices and labels
    are tuples of base labels, encoded most-significant-first.
    """
    nV, nA = base.num_vertices, len(base.alphabet)
    if float(nV) ** m >= 2 ** 62 or float(nA) ** m >= 2 ** 62:
        raise ValueError(f"strip of width {m} cannot be encoded in 64-bit codes")
    limit_edges = None
    # candidate transitions: (base edge, dfa state) -> next dfa state
    e_src, e_dst, e_lab, e_sym = base.src, base.dst, base.label, np.asarray(symbol)
    # pass 1: reachable (target prefix, dfa state)
    dst = np.zeros(1, dtype=np.int64)
    st = np.zeros(1, dtype=np.int64)
    for _ in range(m):
        nxt = dfa[st][:, e_sym]                      # (prefixes, edges)
        pi, ei = np.nonzero(nxt >= 0)
        dst = dst[pi] * nV + e_dst[ei]
        st = nxt[pi, ei]
        key = np.unique(np.stack([dst, st]), axis=1)
        dst, st = key[0], key[1]
        check_size(f"strip of width {m}", len(dst), limit_edges)
    targets = np.unique(dst)
    prefixes = [np.unique(targets // nV ** (m - j)) for j in range(m + 1)]
    # pass 2: the edges themselves
    src = np.zeros(1, dtype=np.int64)
    dst = np.zeros(1, dtype=np.int64)
    lab = np.zeros(1, dtype=np.int64)
    st = np.zeros(1, dtype=np.int64)
    for j in range(m):
        nxt = dfa[st][:, e_sym]
        pi, ei = np.nonzero(nxt >= 0)
        s2 = src[pi] * nV + e_src[ei]
        keep = np.isin(s2, prefixes[j + 1], assume_unique=False)
        pi, ei, s2 = pi[keep], ei[keep], s2[keep]
        dst = dst[pi] * nV + e_dst[ei]
        lab = lab[pi] * nA + e_lab[ei]
        st = nxt[pi, ei]
        src = s2
        check_size(f"strip of width {m}", len(src), limit_edges)
    codes, inv = np.unique(np.concatenate([src, dst]), return_inverse=True)
    k = len(src)
    isrc, idst = inv[:k], inv[k:]
    alive = essential_mask(len(codes), isrc, idst)
    new_index = np.cumsum(alive) - 1
    emask = alive[isrc] & alive[idst]
    isrc, idst, lab = new_index[isrc[emask]], new_index[idst[emask]], lab[emask]
    order = np.lexsort((lab, idst, isrc))
    return LabeledMultigraph.from_arrays(
        ProductSequence(base.vertices, m, codes[alive]),
        ProductSequence(base.alphabet, m),
        isrc[order], idst[order], lab[order])


def _symbols_into(g: LabeledMultigraph, alphabet: Sequence) -> np.ndarray:
    idx = {a: i for i, a in enumerate(alphabet)}
    return np.array([idx[g.alphabet[a]] for a in g.label.tolist()], dtype=np.int64)


def _edge_automaton(g: LabeledMultigraph) -> np.ndarray:
    t = np.full((g.num_vertices, g.num_edges), -1, dtype=np.int64)
    t[g.src, np.arange(g.num_edges)] = g.dst
    return subset_automaton(t)


def strip(s: Presentation2D, m: int, direction: str = "horizontal") -> Constraint1D:
    """Strip of height (horizontal) or width (vertical) ``m`` as a 1D constraint.

    The result is a constraint over ``m``-tuples of symbols: a horizontal
    strip reads columns top to bottom, a vertical strip reads rows left to
    right.  For axial products the direction's factor presentation is raised
    (deterministically presented) to the ``m``-th tensor power and filtered
    by the transverse factor, so the result is deterministic;
    otherwise the direction's graph is raised to the power and filtered so
    that the transverse tuple is a path in the other graph.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if direction not in ("horizontal", "vertical"):
        raise ValueError("direction must be 'horizontal' or 'vertical'")
    along, across = (1, 0) if direction == "horizontal" else (0, 1)
    if s.factors is not None:
        base = s.factors[along].deterministic.graph
        trans = s.factors[across]
        g = filtered_power(base, m, _symbols_into(base, trans.alphabet), trans.dfa)
    else:
        base = s.graphs[along]
        g = filtered_power(base, m, np.arange(base.num_edges), _edge_automaton(s.graphs[across]))
    return Constraint1D(g, name=f"{direction} strip {m}")


def recode_1x2(s: Presentation2D) -> Presentation2D:
    """Pair horizontally adjacent symbols.

    New edges are horizontal 2-paths ``(e0, e1)`` labeled by
    ``(L(e0), L(e1))``.  Vertically the pair runs from
    ``(src_V(e0), src_V(e1))`` to ``(dst_V(e0), dst_V(e1))``; horizontally it
    runs from ``e0`` to ``e1``.  Arrays of size ``m x n`` correspond one to
    one with recoded arrays of size ``m x (n - 1)``.
    """
    gv, gh = s.vertical, s.horizontal
    E = gh.num_edges
    pairs = [(i, j) for i in range(E) for j in range(E) if gh.dst[i] == gh.src[j]]
    ids = [(s.edge_ids[i], s.edge_ids[j]) for i, j in pairs]
    labels = [(s.alphabet[s.label[i]], s.alphabet[s.label[j]]) for i, j in pairs]
    vert = [((gv.vertices[gv.src[i]], gv.vertices[gv.src[j]]),
             (gv.vertices[gv.dst[i]], gv.vertices[gv.dst[j]])) for i, j in pairs]
    hor = [(s.edge_ids[i], s.edge_ids[j]) for i, j in pairs]
    edges = [(ids[k], labels[k], vert[k], hor[k]) for k in range(len(pairs))]
    vv = list(itertools.product(gv.vertices, repeat=2))
    out = PresentationND.from_edges(edges, vertex_sets=[vv, list(s.edge_ids)])
    name = None if s.name is None else s.name + "[1x2]"
    return Presentation2D(out.graphs, name=name)


def lift(t: Constraint1D, s_pres: LabeledMultigraph) -> Constraint1D:
    """Inverse image of ``t`` under the labeling of a lossless presentation.

    The presentation has the vertices of ``t``'s deterministic presentation
    and one edge ``(e_T, e_S)`` for every pair of edges with equal labels,
    labeled by ``e_S``.  It is deterministic, and its words are the
    sequences of edges of ``s_pres`` whose label words lie in ``t``.
    """
    if not set(s_pres.alphabet) <= set(t.alphabet):
        raise ValueError("labels of the presentation are not in the constraint's alphabet")
    gt = t.deterministic.graph
    by_label: dict = {}
    for i, a in enumerate(s_pres.label.tolist()):
        by_label.setdefault(s_pres.alphabet[a], []).append(i)
    src, dst, lab, ids = [], [], [], []
    for eT in range(gt.num_edges):
        a = gt.alphabet[gt.label[eT]]
        for eS in by_label.get(a, []):
            src.append(gt.src[eT])
            dst.append(gt.dst[eT])
            lab.append(eS)
            ids.append((gt.edge_ids[eT], s_pres.edge_ids[eS]))
    order = sorted(range(len(ids)), key=lambda k: sort_key(ids[k]))
    g = LabeledMultigraph.from_arrays(
        gt.vertices, tuple(s_pres.edge_ids),
        np.array([src[k] for k in order], dtype=np.int64),
        np.array([dst[k] for k in order], dtype=np.int64),
        np.array([lab[k] for k in order], dtype=np.int64),
        tuple(ids[k] for k in order))
    name = None if t.name is None else f"lift({t.name})"
    return Constraint1D(g, name=name)


# edge-strip form


class EdgeStripForm:
    """Constraint whose rows are paths in ``edge_graph`` and columns lie in ``vertical``.

    Parameters
    ----------
    vertical : DeterministicGraph
        Deterministic presentation of the column constraint; its alphabet is
        the edge-id sequence of ``edge_graph``.
    edge_graph : LabeledMultigraph
        Graph whose edge constraint governs the rows.
    name : str, optional
    """

    def __init__(self, vertical: DeterministicGraph, edge_graph: LabeledMultigraph, name=None):
        if list(vertical.graph.alphabet) != list(edge_graph.edge_ids):
            raise ValueError("column alphabet must be the edge set of the row graph")
        self.vertical = vertical
        self.edge_view = EdgeConstraintView(edge_graph)
        self.edge_graph = self.edge_view.graph
        self.name = name

    @property
    def num_edge_vertices(self) -> int:
        return self.edge_graph.num_vertices

    @cached_property
    def column_constraint(self) -> Constraint1D:
        return Constraint1D(self.vertical.graph, name="columns")

    @cached_property
    def presentation(self) -> Presentation2D:
        """Axial presentation, for counting and generic strips."""
        return axial_presentation([self.column_constraint, self.edge_view.constraint],
                                  name=self.name)

    def vertical_strip(self, n: int) -> DeterministicGraph:
        """Deterministic presentation of the width-``n`` vertical strip.

        Labels are rows of ``n`` edges of ``edge_graph``, encoded as base
        ``|E|`` integers with the leftmost edge most significant.
        """
        g = self.vertical.graph
        out = filtered_power(g, n, g.label, _edge_automaton(self.edge_graph))
        return DeterministicGraph(out)

    def horizontal_strip(self, m: int) -> LabeledMultigraph:
        """Height-``m`` horizontal strip; vertices are ``m``-tuples of ``V_E``."""
        return filtered_power(self.edge_graph, m, np.arange(self.edge_graph.num_edges),
                              self.column_constraint.dfa)

    def transfer(self, m: int):
        """Transfer matrix ``H_m`` indexed by all of ``V_E^m`` (row-major codes)."""
        import scipy.sparse as sp

        h = self.horizontal_strip(m)
        codes = h.vertices.codes
        N = self.num_edge_vertices ** m
        a = sp.csr_matrix((np.ones(h.num_edges), (codes[h.src], codes[h.dst])), shape=(N, N))
        a.sum_duplicates()
        return a

    def symmetric_strips(self, max_m: int = 3) -> bool:
        """Whether ``H_1 .. H_max_m`` have symmetric transfer matrices."""
        for m in range(1, max_m + 1):
            if float(self.num_edge_vertices) ** m > 5000:
                break
            a = self.transfer(m)
            if (a - a.T).count_nonzero():
                return False
        return True

    def __repr__(self):
        return f"EdgeStripForm({self.name or ''})"


def edge_form_axial(c_vertical: Constraint1D, c_horizontal: Constraint1D, name=None) -> EdgeStripForm:
    """Edge-strip form of ``c_vertical (x) c_horizontal`` through a lift.

    The horizontal factor is presented by its deterministic (hence lossless)
    presentation ``G_S``; columns become the inverse image of the vertical
    factor.  The capacity is unchanged.
    """
    gs = c_horizontal.deterministic.graph
    f = lift(c_vertical, gs)
    return EdgeStripForm(DeterministicGraph(f.presentation), gs, name=name)


def edge_form_vertex(s: Presentation2D, name=None) -> EdgeStripForm:
    """Edge-strip form of the ``[1x2]`` recoding of ``s``.

    Requires the height-1 horizontal strip of ``s`` to be a vertex
    constraint: its length-``k`` words are exactly the walks on the graph of
    its allowed symbol pairs (checked for ``k <= 4``).  The row graph of the
    result has the symbols as vertices and the allowed pairs as edges.
    """
    h1 = strip(s, 1, "horizontal")
    dfa = h1.dfa
    alph = [a[0] for a in h1.alphabet]
    k = len(alph)
    allowed = [(i, j) for i in range(k) for j in range(k)
               if _run(dfa, [i, j]) >= 0]
    pair_ok = np.zeros((k, k), dtype=bool)
    for i, j in allowed:
        pair_ok[i, j] = True
    for L in (3, 4):
        for w in itertools.product(range(k), repeat=L):
            walk = all(pair_ok[w[t], w[t + 1]] for t in range(L - 1))
            if walk != (_run(dfa, list(w)) >= 0):
                raise ValueError("horizontal strip of height 1 is not a vertex constraint")
    ge = LabeledMultigraph(alph, [((alph[i], alph[j]), alph[i], alph[j], (alph[i], alph[j]))
                                  for i, j in allowed])
    eidx = ge.edge_index
    v1 = strip(recode_1x2(s), 1, "vertical")
    natural = _vertex_presentation(v1)
    if natural is not None:
        syms, steps = natural
        # state = last pair read, label = the pair being entered
        sym_edge = [eidx[x[0]] for x in syms]
        order = sorted(range(len(syms)), key=lambda i: sort_key(syms[i][0]))
        pos = {i: r for r, i in enumerate(order)}
        trans = sorted((pos[i], pos[j], sym_edge[j]) for i, j in steps)
        arr = np.array(trans, dtype=np.int64).reshape(-1, 3)
        verts = tuple(syms[i][0] for i in order)
        ids = tuple((verts[a], verts[b]) for a, b, _ in trans)
        tg = LabeledMultigraph.from_arrays(verts, tuple(ge.edge_ids), arr[:, 0], arr[:, 1],
                                           arr[:, 2], ids)
        return EdgeStripForm(DeterministicGraph(tg), ge, name=name)
    t = v1.deterministic.graph
    # labels are 1-tuples of pairs; map them onto the edges of ge
    lab = np.array([eidx[t.alphabet[a][0]] for a in t.label.tolist()], dtype=np.int64)
    tg = LabeledMultigraph.from_arrays(t.vertices, tuple(ge.edge_ids), t.src, t.dst, lab, t.edge_ids)
    return EdgeStripForm(DeterministicGraph(tg), ge, name=name)


def _vertex_presentation(c: Constraint1D, max_len: int = 5):
    """Symbols and allowed steps when ``c`` is a vertex constraint, else None.

    ``c`` is a vertex constraint when its words of every length up to
    ``max_len`` are exactly the walks of its allowed-pair graph.
    """
    dfa = c.dfa
    syms = [a for i, a in enumerate(c.alphabet) if dfa[0, i] >= 0]
    cols = [c.presentation.label_index[a] for a in syms]
    k = len(syms)
    ok = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            ok[i, j] = _run(dfa, [cols[i], cols[j]]) >= 0
    for L in range(3, max_len + 1):
        if k ** L > 200_000:
            break
        for w in itertools.product(range(k), repeat=L):
            walk = all(ok[w[t], w[t + 1]] for t in range(L - 1))
            if walk != (_run(dfa, [cols[x] for x in w]) >= 0):
                return None
    return syms, [(i, j) for i in range(k) for j in range(k) if ok[i, j]]


def _run(dfa, word) -> int:
    st = 0
    for a in word:
        st = dfa[st, a]
        if st < 0:
            return -1
    return st


# presets


def builtin_1d(name: str, *params) -> Constraint1D:
    """Standard one-dimensional constraints.

    ``even``: runs of 0s between 1s have even length.  ``odd``: such runs
    have odd length.  ``chg(b)``: words over ``{+1, -1}`` whose running sums
    stay in a window of ``b + 1`` values.  ``rll(d, k)``: at least ``d`` and at
    most ``k`` 0s between 1s; ``k = inf`` removes the upper limit.
    """
    if name == "even":
        g = LabeledMultigraph("AB", [("AA1", "A", "A", "1"), ("AB0", "A", "B", "0"),
                                     ("BA0", "B", "A", "0")])
        return Constraint1D(g, "even")
    if name == "odd":
        g = LabeledMultigraph("AB", [("AB0", "A", "B", "0"), ("BA0", "B", "A", "0"),
                                     ("BA1", "B", "A", "1")])
        return Constraint1D(g, "odd")
    if name == "chg":
        (b,) = params
        b = int(b)
        if b < 1:
            raise ValueError("chg needs b >= 1")
        edges = [((i, "+1"), i, i + 1, "+1") for i in range(b)]
        edges += [((i + 1, "-1"), i + 1, i, "-1") for i in range(b)]
        return Constraint1D(LabeledMultigraph(range(b + 1), edges), f"chg({b})")
    if name == "rll":
        d, k = params
        d = int(d)
        finite = k is not None and k != inf
        if finite:
            k = int(k)
        if d < 0 or (finite and k < d):
            raise ValueError("rll needs 0 <= d <= k")
        top = k if finite else d
        edges = [((i, "0"), i, i + 1, "0") for i in range(top)]
        edges += [((i, "1"), i, 0, "1") for i in range(d, top + 1)]
        if not finite:
            edges.append(((top, "0"), top, top, "0"))
        label = f"rll({d},{k if finite else 'inf'})"
        return Constraint1D(LabeledMultigraph(range(top + 1), edges, ["0", "1"]), label)
    raise ValueError(f"unknown 1D constraint {name!r}")


def window_presentation(windows, name=None) -> Presentation2D:
    """Presentation whose edges are admissible 2x2 binary windows.

    Each window ``((a, b), (c, d))`` is labeled by ``d``.  Vertically it runs
    from its top row ``ab`` to its bottom row ``cd``; horizontally from its
    left column ``ac`` to its right column ``bd``.
    """
    blocks = ["".join(p) for p in itertools.product("01", repeat=2)]
    edges = []
    for (a, b), (c, d) in windows:
        wid = f"{a}{b}/{c}{d}"
        edges.append((wid, str(d), (f"{a}{b}", f"{c}{d}"), (f"{a}{c}", f"{b}{d}")))
    out = PresentationND.from_edges(edges, vertex_sets=[blocks, blocks], alphabet=["0", "1"])
    return Presentation2D(out.graphs, name=name)


def _windows(pred):
    out = []
    for a, b, c, d in itertools.product("01", repeat=4):
        if pred(int(a), int(b), int(c), int(d)):
            out.append(((a, b), (c, d)))
    return out


def builtin_2d(name: str) -> Presentation2D:
    """Two-dimensional presets.

    ``nak``: no two 1s adjacent horizontally, vertically or diagonally.
    ``rwim``: windows with at most one 1, plus the two windows holding a
    vertical pair of 1s.  ``hard_square``: no two 1s adjacent horizontally or
    vertically, as the axial square of ``rll(1, inf)``.  ``even2``,
    ``chg2_2d``, ``chg3_2d``: axial squares of ``even``, ``chg(2)``,
    ``chg(3)``.
    """
    if name == "nak":
        return window_presentation(_windows(lambda a, b, c, d: a + b + c + d <= 1), "nak")
    if name == "rwim":
        extra = {(1, 0, 1, 0), (0, 1, 0, 1)}
        return window_presentation(
            _windows(lambda a, b, c, d: a + b + c + d <= 1 or (a, b, c, d) in extra), "rwim")
    if name in ("hard_square", "hard-square"):
        c = builtin_1d("rll", 1, inf)
        return axial_presentation([c, c], name="hard-square")
    if name == "even2":
        c = builtin_1d("even")
        return axial_presentation([c, c], name="even2")
    if name in ("chg2_2d", "chg3_2d"):
        c = builtin_1d("chg", int(name[3]))
        return axial_presentation([c, c], name=f"chg{name[3]}x2")
    raise ValueError(f"unknown 2D constraint {name!r}")


def capacity_1d(c: Constraint1D) -> float:
    return c.capacity()


def log2_or_neg_inf(x: float) -> float:
    return log2(x) if x > 0 else -inf
