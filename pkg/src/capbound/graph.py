"""Directed labeled multigraphs and the transformations built on them.

A :class:`LabeledMultigraph` stores its edges as integer arrays (source,
target and label indices) next to ordered sequences of vertex ids, edge ids
and alphabet symbols.  Orderings are canonical, so every matrix derived from
a graph is reproducible bit for bit.

Derived graphs (tensor powers, subset constructions, strips) use tuples of
constituent ids as vertex ids and tuple labels; those sequences are allowed
to be lazy so that graphs with millions of edges never materialise strings.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Hashable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "SizeGuardError",
    "max_edges",
    "sort_key",
    "LabeledMultigraph",
    "DeterministicGraph",
    "EdgeReversingMatching",
    "StructureReport",
    "determinize",
    "is_deterministic",
    "tensor_power",
    "trim_essential",
    "find_edge_reversing_matching",
    "structure_report",
    "parse_graph",
    "format_graph",
]

DEFAULT_MAX_EDGES = 20_000_000


class SizeGuardError(ValueError):
    """Raised when a construction would exceed the configured size limit.

    Attributes
    ----------
    required : int
        Number of objects the construction needs.
    limit : int
        Active limit.
    """

    def __init__(self, what: str, required: int, limit: int):
        self.required = int(required)
        self.limit = int(limit)
        super().__init__(
            f"{what} needs {self.required} items, limit is {self.limit} "
            "(set CAPBOUND_MAX_EDGES to raise it)"
        )


def max_edges() -> int:
    """Active size limit, overridable with ``CAPBOUND_MAX_EDGES``."""
    raw = os.environ.get("CAPBOUND_MAX_EDGES")
    if raw is None:
        return DEFAULT_MAX_EDGES
    return int(float(raw))


def check_size(what: str, required: int, limit: int | None = None) -> None:
    limit = max_edges() if limit is None else limit
    if required > limit:
        raise SizeGuardError(what, required, limit)


def sort_key(x):
    """Total order on the ids and labels used in this package.

    Numbers sort before strings, strings before tuples; tuples compare
    elementwise.
    """
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x))
    if isinstance(x, (int, float, np.integer)) and not isinstance(x, bool):
        return (0, x)
    return (1, str(x))


class ProductSequence(Sequence):
    """Lazy sequence of tuples ``(base[d_1], ..., base[d_w])`` for codes.

    ``codes`` are integers written in base ``len(base)``, most significant
    digit first.  With sorted ``codes`` and a sorted ``base`` the sequence is
    lexicographically sorted.
    """

    def __init__(self, base: Sequence, width: int, codes: np.ndarray | None = None):
        self.base = base
        self.width = int(width)
        self.codes = codes

    def __len__(self):
        if self.codes is None:
            return len(self.base) ** self.width
        return len(self.codes)

    def decode(self, code: int) -> tuple:
        k = len(self.base)
        digits = []
        for _ in range(self.width):
            code, d = divmod(int(code), k)
            digits.append(self.base[d])
        return tuple(reversed(digits))

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        code = i if self.codes is None else self.codes[i]
        return self.decode(code)

    def index(self, item, *args):
        item = tuple(item)
        if len(item) != self.width:
            raise ValueError(item)
        lookup = _base_lookup(self.base)
        code = 0
        k = len(self.base)
        for x in item:
            code = code * k + lookup[x]
        if self.codes is None:
            return code
        j = int(np.searchsorted(self.codes, code))
        if j < len(self.codes) and self.codes[j] == code:
            return j
        raise ValueError(item)

    def __contains__(self, item):
        try:
            self.index(item)
        except (ValueError, KeyError, TypeError):
            return False
        return True

    def __eq__(self, other):
        return isinstance(other, Sequence) and list(self) == list(other)

    def __hash__(self):
        return hash(tuple(self))


_LOOKUPS: dict[int, tuple[Sequence, dict]] = {}


def _base_lookup(base: Sequence) -> dict:
    hit = _LOOKUPS.get(id(base))
    if hit is not None and hit[0] is base:
        return hit[1]
    table = {x: i for i, x in enumerate(base)}
    _LOOKUPS[id(base)] = (base, table)
    return table


class LazyIds(Sequence):
    """Edge ids ``(prefix, i)`` generated on demand."""

    def __init__(self, n: int, prefix: str = "e"):
        self.n = int(n)
        self.prefix = prefix

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self.n))]
        if i < 0:
            i += self.n
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.prefix, i)

    def index(self, item, *args):
        if isinstance(item, tuple) and len(item) == 2 and item[0] == self.prefix:
            if 0 <= item[1] < self.n:
                return int(item[1])
        raise ValueError(item)


class LabeledMultigraph:
    """Directed multigraph with labeled edges.

    Parameters
    ----------
    vertices : iterable of hashable
        Vertex ids.
    edges : iterable of (edge_id, src, dst, label)
        Parallel edges are allowed, edge ids must be unique.
    alphabet : iterable, optional
        Label set; defaults to the labels that occur on edges.

    Notes
    -----
    Vertices, edges and alphabet are sorted by :func:`sort_key` of their ids
    on construction.  Instances are treated as immutable.
    """

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[tuple],
                 alphabet: Iterable | None = None):
        vertices = sorted(set(vertices), key=sort_key)
        edges = sorted(edges, key=lambda e: sort_key(e[0]))
        ids = [e[0] for e in edges]
        if len(set(ids)) != len(ids):
            raise ValueError("edge ids must be unique")
        if alphabet is None:
            alphabet = {e[3] for e in edges}
        alphabet = sorted(set(alphabet), key=sort_key)
        vidx = {v: i for i, v in enumerate(vertices)}
        aidx = {a: i for i, a in enumerate(alphabet)}
        try:
            src = np.array([vidx[e[1]] for e in edges], dtype=np.int64)
            dst = np.array([vidx[e[2]] for e in edges], dtype=np.int64)
        except KeyError as err:
            raise ValueError(f"edge endpoint {err.args[0]!r} is not a declared vertex") from None
        try:
            lab = np.array([aidx[e[3]] for e in edges], dtype=np.int64)
        except KeyError as err:
            raise ValueError(f"label {err.args[0]!r} is not in the alphabet") from None
        self._init(tuple(vertices), tuple(alphabet), src, dst, lab, tuple(ids))

    def _init(self, vertices, alphabet, src, dst, lab, edge_ids):
        self.vertices = vertices
        self.alphabet = alphabet
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.label = np.asarray(lab, dtype=np.int64)
        self.edge_ids = edge_ids
        for a in (self.src, self.dst, self.label):
            a.setflags(write=False)

    @classmethod
    def from_arrays(cls, vertices: Sequence, alphabet: Sequence, src, dst, label,
                    edge_ids: Sequence | None = None) -> "LabeledMultigraph":
        """Build from index arrays without re-sorting.

        The caller guarantees canonical ordering of ``vertices``,
        ``alphabet`` and ``edge_ids``.
        """
        g = cls.__new__(cls)
        n = len(src)
        g._init(vertices, alphabet, src, dst, label,
                LazyIds(n) if edge_ids is None else edge_ids)
        return g

    # basic accessors

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.src)

    @property
    def edges(self) -> list[tuple]:
        """Edges as ``(id, src, dst, label)`` tuples in canonical order."""
        V, A = self.vertices, self.alphabet
        return [(self.edge_ids[i], V[s], V[d], A[a])
                for i, (s, d, a) in enumerate(zip(self.src, self.dst, self.label))]

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def label_index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edge_ids)}

    def adjacency(self) -> sp.csr_matrix:
        """Adjacency matrix counting parallel edges."""
        n = self.num_vertices
        a = sp.csr_matrix((np.ones(self.num_edges), (self.src, self.dst)), shape=(n, n))
        a.sum_duplicates()
        a.sort_indices()
        return a

    def out_edges(self, v: int) -> np.ndarray:
        """Indices of edges leaving vertex index ``v``."""
        order, ptr = self._out_csr
        return order[ptr[v]:ptr[v + 1]]

    @cached_property
    def _out_csr(self):
        order = np.argsort(self.src, kind="stable")
        ptr = np.searchsorted(self.src[order], np.arange(self.num_vertices + 1))
        return order, ptr

    def subgraph(self, keep_vertices: np.ndarray) -> "LabeledMultigraph":
        """Induced subgraph on a boolean vertex mask, orderings preserved."""
        keep_vertices = np.asarray(keep_vertices, dtype=bool)
        new_index = np.cumsum(keep_vertices) - 1
        emask = keep_vertices[self.src] & keep_vertices[self.dst]
        kept = np.flatnonzero(keep_vertices)
        eidx = np.flatnonzero(emask)
        return LabeledMultigraph.from_arrays(
            _take(self.vertices, kept), self.alphabet,
            new_index[self.src[emask]], new_index[self.dst[emask]], self.label[emask],
            _take(self.edge_ids, eidx))

    def edge_subgraph(self, keep_edges: np.ndarray) -> "LabeledMultigraph":
        """Same vertices, only the edges selected by a boolean mask."""
        eidx = np.flatnonzero(keep_edges)
        return LabeledMultigraph.from_arrays(
            self.vertices, self.alphabet, self.src[eidx], self.dst[eidx],
            self.label[eidx], _take(self.edge_ids, eidx))

    def relabeled(self, alphabet: Sequence, label: np.ndarray) -> "LabeledMultigraph":
        """Same graph with a new labeling (``alphabet`` must be canonical)."""
        return LabeledMultigraph.from_arrays(self.vertices, alphabet, self.src,
                                             self.dst, label, self.edge_ids)

    def words(self, max_len: int) -> set[tuple]:
        """All label words of length at most ``max_len`` (small graphs only)."""
        out = {()}
        frontier = {(): frozenset(range(self.num_vertices))}
        for _ in range(max_len):
            nxt: dict[tuple, set] = {}
            for w, states in frontier.items():
                for v in states:
                    for e in self.out_edges(v):
                        nxt.setdefault(w + (self.alphabet[self.label[e]],), set()).add(
                            int(self.dst[e]))
            frontier = {w: frozenset(s) for w, s in nxt.items()}
            out.update(frontier)
        return out

    def __eq__(self, other):
        if not isinstance(other, LabeledMultigraph):
            return NotImplemented
        return (list(self.vertices) == list(other.vertices)
                and list(self.alphabet) == list(other.alphabet)
                and list(self.edge_ids) == list(other.edge_ids)
                and np.array_equal(self.src, other.src)
                and np.array_equal(self.dst, other.dst)
                and np.array_equal(self.label, other.label))

    __hash__ = None

    def __repr__(self):
        return (f"LabeledMultigraph(|V|={self.num_vertices}, |E|={self.num_edges}, "
                f"|alphabet|={len(self.alphabet)})")


def _take(seq: Sequence, idx: np.ndarray) -> Sequence:
    if isinstance(seq, ProductSequence) and seq.codes is not None:
        return ProductSequence(seq.base, seq.width, seq.codes[idx])
    if isinstance(seq, ProductSequence):
        return ProductSequence(seq.base, seq.width, np.asarray(idx, dtype=np.int64))
    if isinstance(seq, LazyIds):
        return tuple((seq.prefix, int(i)) for i in idx) if len(idx) < 100_000 else _Picked(seq, idx)
    return tuple(seq[int(i)] for i in idx)


class _Picked(Sequence):
    def __init__(self, seq, idx):
        self.seq, self.idx = seq, np.asarray(idx)

    def __len__(self):
        return len(self.idx)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return self.seq[int(self.idx[i])]


# determinism


def is_deterministic(g: LabeledMultigraph) -> bool:
    """True when no two edges share a source and a label."""
    if g.num_edges == 0:
        return True
    key = g.src * max(len(g.alphabet), 1) + g.label
    return len(np.unique(key)) == g.num_edges


@dataclass(frozen=True, eq=False)
class DeterministicGraph:
    """A labeled graph together with a checked determinism certificate.

    Attributes
    ----------
    graph : LabeledMultigraph
    delta : ndarray of shape (num_vertices, len(alphabet))
        Transition table, ``-1`` where no edge exists.
    """

    graph: LabeledMultigraph

    def __post_init__(self):
        if not is_deterministic(self.graph):
            raise ValueError("graph is not deterministic")

    @cached_property
    def delta(self) -> np.ndarray:
        g = self.graph
        t = np.full((g.num_vertices, len(g.alphabet)), -1, dtype=np.int64)
        t[g.src, g.label] = g.dst
        t.setflags(write=False)
        return t

    @cached_property
    def edge_of(self) -> np.ndarray:
        g = self.graph
        t = np.full((g.num_vertices, len(g.alphabet)), -1, dtype=np.int64)
        t[g.src, g.label] = np.arange(g.num_edges)
        return t

    def accepts(self, word_indices: Sequence[int]) -> bool:
        """Whether some state reads the label-index word."""
        states = np.arange(self.graph.num_vertices)
        for a in word_indices:
            states = self.delta[states, a]
            states = np.unique(states[states >= 0])
            if len(states) == 0:
                return False
        return True


def determinize(g: LabeledMultigraph) -> DeterministicGraph:
    """Right-resolving presentation of the word set of ``g``.

    Graphs that are already deterministic are returned unchanged.  Otherwise
    the subset construction runs from the set of all vertices and keeps the
    reachable subsets; a subset state is named by the tuple of its sorted
    member ids.

    Parameters
    ----------
    g : LabeledMultigraph

    Returns
    -------
    DeterministicGraph
    """
    if is_deterministic(g):
        return DeterministicGraph(g)
    nA = len(g.alphabet)
    # successor sets per (vertex, label)
    succ: dict[tuple[int, int], set] = {}
    for s, d, a in zip(g.src.tolist(), g.dst.tolist(), g.label.tolist()):
        succ.setdefault((s, a), set()).add(d)
    start = frozenset(range(g.num_vertices))
    seen = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        cur = order[i]
        for a in range(nA):
            nxt = set()
            for v in cur:
                nxt |= succ.get((v, a), set())
            if not nxt:
                continue
            nxt = frozenset(nxt)
            if nxt not in seen:
                seen[nxt] = len(order)
                order.append(nxt)
            trans.append((i, seen[nxt], a))
        i += 1
        check_size("subset construction", len(order) * max(nA, 1))
    names = [tuple(g.vertices[v] for v in sorted(S)) for S in order]
    rank = sorted(range(len(names)), key=lambda j: sort_key(names[j]))
    pos = np.empty(len(names), dtype=np.int64)
    pos[rank] = np.arange(len(names))
    vertices = tuple(names[j] for j in rank)
    if trans:
        t = np.array(trans, dtype=np.int64)
        src, dst, lab = pos[t[:, 0]], pos[t[:, 1]], t[:, 2]
        order_e = np.lexsort((lab, src))
        src, dst, lab = src[order_e], dst[order_e], lab[order_e]
    else:
        src = dst = lab = np.zeros(0, dtype=np.int64)
    ids = tuple((vertices[s], g.alphabet[a]) for s, a in zip(src.tolist(), lab.tolist()))
    out = LabeledMultigraph.from_arrays(vertices, g.alphabet, src, dst, lab, ids)
    return DeterministicGraph(out)


# tensor powers


def tensor_power(g: LabeledMultigraph, m: int) -> LabeledMultigraph:
    """The ``m``-th tensor power of ``g``.

    Vertices are ``m``-tuples of vertices, edges are ``m``-tuples of edges with
    componentwise source and target, and an edge is labeled by the tuple of
    its components' labels.  The adjacency matrix is the ``m``-fold Kronecker
    power of the adjacency matrix of ``g``.

    Raises
    ------
    SizeGuardError
        If ``|V|**m`` or ``|E|**m`` exceeds the active limit.
    """
    if m < 1:
        raise ValueError("m must be positive")
    nV, nE, nA = g.num_vertices, g.num_edges, len(g.alphabet)
    check_size(f"tensor power m={m} (vertices)", nV ** m)
    check_size(f"tensor power m={m} (edges)", nE ** m)
    # edges are sorted by id, so lexicographic codes over edge indices are canonical
    codes = np.arange(nE ** m, dtype=np.int64)
    src = np.zeros(nE ** m, dtype=np.int64)
    dst = np.zeros_like(src)
    lab = np.zeros_like(src)
    rem = codes.copy()
    for j in range(m):
        digit = rem // nE ** (m - 1 - j)
        rem = rem % nE ** (m - 1 - j)
        src = src * nV + g.src[digit]
        dst = dst * nV + g.dst[digit]
        lab = lab * nA + g.label[digit]
    return LabeledMultigraph.from_arrays(
        ProductSequence(g.vertices, m), ProductSequence(g.alphabet, m),
        src, dst, lab, ProductSequence(g.edge_ids, m))


# trimming


def essential_mask(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Vertices surviving repeated removal of sources and sinks."""
    alive = np.ones(n, dtype=bool)
    emask = np.ones(len(src), dtype=bool)
    while True:
        outdeg = np.bincount(src[emask], minlength=n)
        indeg = np.bincount(dst[emask], minlength=n)
        new_alive = alive & (outdeg > 0) & (indeg > 0)
        if np.array_equal(new_alive, alive):
            return alive
        alive = new_alive
        emask = alive[src] & alive[dst]


def trim_essential(g: LabeledMultigraph) -> LabeledMultigraph:
    """Delete vertices with no incoming or no outgoing edges until none remain.

    The Perron eigenvalue of the adjacency matrix is unchanged; a graph
    without cycles becomes empty.
    """
    alive = essential_mask(g.num_vertices, g.src, g.dst)
    if alive.all():
        return g
    return g.subgraph(alive)


# edge-reversing matchings


@dataclass(frozen=True, eq=False)
class EdgeReversingMatching:
    """Involution on edge indices that reverses every edge.

    Attributes
    ----------
    graph : LabeledMultigraph
    partner : ndarray of int
        ``partner[e]`` is the index of the edge matched with ``e``.
    label_preserving : bool
    """

    graph: LabeledMultigraph
    partner: np.ndarray
    label_preserving: bool

    def __post_init__(self):
        g, r = self.graph, np.asarray(self.partner)
        if not np.array_equal(r[r], np.arange(g.num_edges)):
            raise ValueError("matching is not an involution")
        if not (np.array_equal(g.src, g.dst[r]) and np.array_equal(g.dst, g.src[r])):
            raise ValueError("matching does not reverse edges")
        if self.label_preserving and not np.array_equal(g.label, g.label[r]):
            raise ValueError("matching does not preserve labels")

    def as_dict(self) -> dict:
        ids = self.graph.edge_ids
        return {ids[i]: ids[j] for i, j in enumerate(self.partner.tolist())}


def find_edge_reversing_matching(g: LabeledMultigraph,
                                 label_preserving: bool = False) -> EdgeReversingMatching | None:
    """Edge-reversing matching of ``g`` if one exists.

    Edges are grouped by unordered endpoint pair (and label when
    ``label_preserving``).  A bucket is matchable iff it holds as many
    ``u -> v`` as ``v -> u`` edges; loops are matched to themselves.  Inside a
    bucket edges are paired in canonical order.

    Returns
    -------
    EdgeReversingMatching or None
    """
    partner = np.arange(g.num_edges)
    buckets: dict[tuple, tuple[list, list]] = {}
    for e, (s, d, a) in enumerate(zip(g.src.tolist(), g.dst.tolist(), g.label.tolist())):
        if s == d:
            continue
        key = (min(s, d), max(s, d), a if label_preserving else -1)
        fwd, back = buckets.setdefault(key, ([], []))
        (fwd if s < d else back).append(e)
    for fwd, back in buckets.values():
        if len(fwd) != len(back):
            return None
        for e, f in zip(fwd, back):
            partner[e] = f
            partner[f] = e
    return EdgeReversingMatching(g, partner, label_preserving)


# structure


@dataclass(frozen=True)
class StructureReport:
    """Strongly connected structure of a graph.

    Attributes
    ----------
    components : tuple of tuple
        Vertex ids of every strongly connected component, in order of first
        vertex.
    nontrivial : tuple of bool
        Whether the component carries a cycle.
    periods : tuple of int
        Period of each component, 0 for components without cycles.
    irreducible : bool
        One nontrivial component containing every non-isolated vertex.
    primitive : bool
        Irreducible with period 1.
    period : int
        Period of the graph when irreducible, otherwise the gcd of the
        periods of the nontrivial components (0 when there is none).
    """

    components: tuple
    nontrivial: tuple
    periods: tuple
    irreducible: bool
    primitive: bool
    period: int


def scc_labels(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[int, np.ndarray]:
    a = sp.csr_matrix((np.ones(len(src)), (src, dst)), shape=(n, n))
    return connected_components(a, directed=True, connection="strong")


def component_period(n: int, src: np.ndarray, dst: np.ndarray, members: np.ndarray) -> int:
    """Period of a strongly connected vertex set via BFS levels."""
    inside = np.zeros(n, dtype=bool)
    inside[members] = True
    emask = inside[src] & inside[dst]
    es, ed = src[emask], dst[emask]
    if len(es) == 0:
        return 0
    level = np.full(n, -1, dtype=np.int64)
    root = int(members[0])
    level[root] = 0
    frontier = np.array([root])
    order = np.argsort(es, kind="stable")
    ptr = np.searchsorted(es[order], np.arange(n + 1))
    depth = 0
    while len(frontier):
        depth += 1
        nxt = []
        for v in frontier:
            for e in order[ptr[v]:ptr[v + 1]]:
                w = ed[e]
                if level[w] < 0:
                    level[w] = depth
                    nxt.append(w)
        frontier = np.array(nxt, dtype=np.int64)
    p = 0
    for d in np.unique(np.abs(level[es] + 1 - level[ed])).tolist():
        p = gcd(p, int(d))
    return p


def structure_report(g: LabeledMultigraph) -> StructureReport:
    """Strongly connected components, irreducibility, period and primitivity."""
    n = g.num_vertices
    ncomp, lab = scc_labels(n, g.src, g.dst)
    first = {}
    for v, c in enumerate(lab.tolist()):
        first.setdefault(c, v)
    comp_order = sorted(first, key=first.get)
    comps, nontriv, periods = [], [], []
    loops = np.zeros(n, dtype=bool)
    loops[g.src[g.src == g.dst]] = True
    for c in comp_order:
        members = np.flatnonzero(lab == c)
        comps.append(tuple(g.vertices[v] for v in members))
        nt = len(members) > 1 or bool(loops[members[0]])
        nontriv.append(nt)
        periods.append(component_period(n, g.src, g.dst, members) if nt else 0)
    touched = np.zeros(n, dtype=bool)
    touched[g.src] = True
    touched[g.dst] = True
    nt_idx = [i for i, t in enumerate(nontriv) if t]
    irreducible = False
    if len(nt_idx) == 1:
        members = set(comps[nt_idx[0]])
        irreducible = all(g.vertices[v] in members for v in np.flatnonzero(touched))
    if irreducible:
        period = periods[nt_idx[0]]
    else:
        period = 0
        for i in nt_idx:
            period = gcd(period, periods[i])
    return StructureReport(tuple(comps), tuple(nontriv), tuple(periods),
                           irreducible, irreducible and period == 1, period)


# text format


def _enc(x) -> str:
    if isinstance(x, tuple):
        return "<" + ",".join(_enc(y) for y in x) + ">"
    s = str(x)
    if not s or any(c.isspace() for c in s) or any(c in "<>,#" for c in s):
        raise ValueError(f"token {s!r} cannot be written in the text format")
    return s


def _dec(s: str):
    if not s.startswith("<"):
        return s
    items, depth, cur = [], 0, ""
    for c in s[1:-1]:
        if c == "," and depth == 0:
            items.append(cur)
            cur = ""
            continue
        depth += (c == "<") - (c == ">")
        cur += c
    if cur or s != "<>":
        items.append(cur)
    return tuple(_dec(t) for t in items)


def format_graph(g: LabeledMultigraph) -> str:
    """Serialise to the line format ``alphabet`` / ``vertex`` / ``edge``."""
    lines = ["alphabet " + " ".join(_enc(a) for a in g.alphabet)]
    lines += [f"vertex {_enc(v)}" for v in g.vertices]
    lines += [f"edge {_enc(e)} {_enc(s)} {_enc(d)} {_enc(a)}" for e, s, d, a in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> LabeledMultigraph:
    """Parse the line format written by :func:`format_graph`.

    ``#`` starts a comment; blank lines are ignored.  Tokens written as
    ``<a,b>`` are read back as tuples and all other tokens as strings, so
    graphs with string ids round-trip exactly.
    """
    alphabet, vertices, edges = None, [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        kind, args = line[0], [_dec(t) for t in line[1:]]
        if kind == "alphabet":
            alphabet = (alphabet or []) + args
        elif kind == "vertex" and len(args) == 1:
            vertices.append(args[0])
        elif kind == "edge" and len(args) == 4:
            edges.append(tuple(args))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    return LabeledMultigraph(vertices, edges, alphabet)
