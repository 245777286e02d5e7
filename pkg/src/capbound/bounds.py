"""Lower and upper bounds on the capacity of two-dimensional constraints.

The lower bounds run a weighted transfer-matrix argument on a constraint in
edge-strip form (rows are paths in a graph ``G_E``, columns lie in a 1D
constraint given by a deterministic presentation).  For a strip width ``n``
the deterministic presentation of the width-``n`` vertical strip is combined
with a window weight ``phi`` into the weighted graph ``I``; the bound is

.. math::
    \\frac{\\log_2\\lambda(A_{2q+p}) - \\log_2\\lambda(A_{2q})}{p\\,\\alpha}.

Every reported lower bound pairs the certified lower end of the numerator
root with the certified upper end of the denominator root, so it stays a
true lower bound under eigenvalue uncertainty.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from math import log2
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .constraints import EdgeStripForm, Presentation2D, edge_form_vertex, strip
from .graph import DeterministicGraph, check_size, essential_mask
from .spectral import EigenCertificate, SparseNonnegMatrix, perron

__all__ = [
    "SymmetryError",
    "PhiTable",
    "StripClasses",
    "IGraph",
    "BoundReport",
    "strip_classes",
    "strip_transfer",
    "build_I",
    "igraph_pair",
    "evaluate_pair",
    "lower_bound_edge",
    "lower_bound_vertex",
    "strip_upper_bound",
    "cw_upper_bound",
    "finite_count_upper",
]


class SymmetryError(ValueError):
    """The strips are not symmetric, so the requested bound would be unsound."""


# window weights


class PhiTable:
    """Nonnegative weights on windows of ``mu + alpha`` row-graph vertices.

    Parameters
    ----------
    mu, alpha : int
    symbols : sequence
        Vertices of the row graph, in canonical order.
    weights : array_like of length ``len(symbols) ** (mu + alpha)``
        Indexed by window code, first window entry most significant.
    """

    def __init__(self, mu: int, alpha: int, symbols: Sequence, weights):
        if mu < 0 or alpha < 1:
            raise ValueError("need mu >= 0 and alpha >= 1")
        w = np.asarray(weights, dtype=float).copy()
        k = len(symbols)
        if w.shape != (k ** (mu + alpha),):
            raise ValueError(f"expected {k ** (mu + alpha)} weights, got {w.shape}")
        if not np.all(np.isfinite(w)) or w.min(initial=0) < 0:
            raise ValueError("weights must be finite and nonnegative")
        if not np.any(w > 0):
            raise ValueError("at least one weight must be positive")
        w.setflags(write=False)
        self.mu, self.alpha = int(mu), int(alpha)
        self.symbols = tuple(symbols)
        self.weights = w

    @classmethod
    def ones(cls, mu, alpha, symbols):
        return cls(mu, alpha, symbols, np.ones(len(symbols) ** (mu + alpha)))

    @property
    def width(self) -> int:
        return self.mu + self.alpha

    def scaled(self, c: float) -> "PhiTable":
        return PhiTable(self.mu, self.alpha, self.symbols, c * self.weights)

    def window(self, code: int) -> tuple:
        k = len(self.symbols)
        out = []
        for _ in range(self.width):
            code, d = divmod(code, k)
            out.append(self.symbols[d])
        return tuple(reversed(out))

    def to_text(self) -> str:
        """Lines ``window <v_1> ... <v_{mu+alpha}> weight <float>``."""
        lines = []
        for code, w in enumerate(self.weights):
            win = " ".join(str(v) for v in self.window(code))
            lines.append(f"window {win} weight {float(w)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, mu: int, alpha: int, symbols: Sequence) -> "PhiTable":
        """Parse :meth:`to_text` output; absent windows get weight 0."""
        lookup = {str(v): i for i, v in enumerate(symbols)}
        k, width = len(symbols), mu + alpha
        w = np.zeros(k ** width)
        for lineno, raw in enumerate(text.splitlines(), 1):
            toks = raw.split("#", 1)[0].split()
            if not toks:
                continue
            if toks[0] != "window" or len(toks) != width + 3 or toks[-2] != "weight":
                raise ValueError(f"line {lineno}: expected {width} window entries")
            code = 0
            for t in toks[1:1 + width]:
                if t not in lookup:
                    raise ValueError(f"line {lineno}: unknown vertex {t!r}")
                code = code * k + lookup[t]
            w[code] = float(toks[-1])
        return cls(mu, alpha, symbols, w)

    def __repr__(self):
        return f"PhiTable(mu={self.mu}, alpha={self.alpha}, |windows|={len(self.weights)})"


# compressed vertical strips


@dataclass
class StripClasses:
    """Width-``n`` vertical strip with parallel edges grouped.

    Edges of the deterministic strip presentation that share source, target,
    the source vertex (in ``G_E``) of their leftmost entry and the target
    vertex of their rightmost entry are merged; ``count`` holds the number
    merged.  This is all the weighted graph ``I`` needs.
    """

    n: int
    num_states: int
    src: np.ndarray
    dst: np.ndarray
    first: np.ndarray
    last: np.ndarray
    count: np.ndarray
    state_codes: np.ndarray

    @property
    def num_edges(self) -> int:
        return int(self.count.sum())


def _aggregate(cols: list[np.ndarray], count: np.ndarray):
    """Unique rows of the nonnegative integer columns, with summed counts."""
    if len(cols[0]) == 0:
        return list(cols), count
    radix = [int(c.max()) + 1 for c in cols]
    if np.prod([float(r) for r in radix]) < 2 ** 62:
        key = np.zeros(len(cols[0]), dtype=np.int64)
        for c, r in zip(cols, radix):
            key = key * r + c
        u, inv = np.unique(key, return_inverse=True)
        out = []
        for r in reversed(radix):
            u, d = np.divmod(u, r)
            out.append(d)
        uniq = out[::-1]
    else:
        u, inv = np.unique(np.stack(cols), axis=1, return_inverse=True)
        uniq = list(u)
    return uniq, np.bincount(inv.ravel(), weights=count, minlength=len(uniq[0]))


def strip_classes(form: EdgeStripForm, n: int, periodic: bool = False) -> StripClasses:
    """Grouped width-``n`` vertical strip of an edge-strip form.

    Parameters
    ----------
    form : EdgeStripForm
    n : int
        Strip width (number of row-graph edges per row).
    periodic : bool
        Keep only rows that are closed walks, i.e. the strip wraps around a
        cylinder of circumference ``n``.
    """
    T = form.vertical.graph
    ge = form.edge_graph
    nT = T.num_vertices
    if float(nT) ** n >= 2 ** 62:
        raise ValueError(f"strip of width {n} cannot be encoded in 64-bit codes")
    t_src, t_dst, t_lab = T.src, T.dst, T.label
    e_src, e_dst = ge.src[t_lab], ge.dst[t_lab]   # row-graph endpoints of each column edge
    starts = range(ge.num_vertices) if periodic else [-1]

    # pass 1: reachable (target prefix, current row vertex); sources are
    # pruned to targets pooled over all start vertices
    reached = []
    for v0 in starts:
        dst = np.zeros(1, dtype=np.int64)
        cur = np.full(1, v0, dtype=np.int64)
        for _ in range(n):
            D, C = [], []
            for t in range(T.num_edges):
                ok = (cur == -1) | (cur == e_src[t])
                D.append(dst[ok] * nT + t_dst[t])
                C.append(np.full(int(ok.sum()), e_dst[t]))
            dst, cur = np.concatenate(D), np.concatenate(C)
            u = np.unique(np.stack([dst, cur]), axis=1)
            dst, cur = u[0], u[1]
            check_size(f"strip of width {n}", len(dst))
        reached.append(dst[cur == v0] if periodic else dst)
    targets = np.unique(np.concatenate(reached))
    prefixes = [np.unique(targets // nT ** (n - j)) for j in range(n + 1)]

    # pass 2: grouped edges
    pieces = []
    for v0 in starts:
        src = np.zeros(1, dtype=np.int64)
        dst = np.zeros(1, dtype=np.int64)
        first = np.full(1, -1, dtype=np.int64)
        cur = np.full(1, v0, dtype=np.int64)
        cnt = np.ones(1)
        for j in range(n):
            S, D, F, C, K = [], [], [], [], []
            for t in range(T.num_edges):
                ok = (cur == -1) | (cur == e_src[t])
                s2 = src[ok] * nT + t_src[t]
                keep = np.isin(s2, prefixes[j + 1])
                idx = np.flatnonzero(ok)[keep]
                S.append(s2[keep])
                D.append(dst[idx] * nT + t_dst[t])
                F.append(np.where(first[idx] == -1, e_src[t], first[idx]))
                C.append(np.full(len(idx), e_dst[t]))
                K.append(cnt[idx])
            (src, dst, first, cur), cnt = _aggregate(
                [np.concatenate(S), np.concatenate(D), np.concatenate(F), np.concatenate(C)],
                np.concatenate(K))
            check_size(f"strip of width {n}", len(src))
        if periodic:
            m = cur == v0
            src, dst, first, cur, cnt = src[m], dst[m], first[m], cur[m], cnt[m]
        if len(src):
            pieces.append((src, dst, first, cur, cnt))

    if not pieces:
        z = np.zeros(0, dtype=np.int64)
        return StripClasses(n, 0, z, z, z, z, np.zeros(0), z)
    src, dst, first, last, cnt = (np.concatenate(x) for x in zip(*pieces))
    if periodic:
        (src, dst, first, last), cnt = _aggregate([src, dst, first, last], cnt)
    codes, inv = np.unique(np.concatenate([src, dst]), return_inverse=True)
    k = len(src)
    isrc, idst = inv[:k], inv[k:]
    alive = essential_mask(len(codes), isrc, idst)
    new = np.cumsum(alive) - 1
    em = alive[isrc] & alive[idst]
    return StripClasses(n, int(alive.sum()), new[isrc[em]], new[idst[em]], first[em],
                        last[em], cnt[em], codes[alive])


def classes_from_graph(g_n: DeterministicGraph, edge_graph, n: int) -> StripClasses:
    """Grouped strip from an explicit deterministic presentation of ``V_n``.

    Labels of ``g_n`` must be rows (tuples) of ``n`` edge ids of ``edge_graph``.
    """
    g = g_n.graph
    eidx = edge_graph.edge_index
    used = np.unique(g.label)
    f_of = np.zeros(len(g.alphabet), dtype=np.int64)
    l_of = np.zeros(len(g.alphabet), dtype=np.int64)
    for a in used.tolist():
        row = tuple(g.alphabet[a])
        for x in row:
            if x not in eidx:
                raise ValueError(f"label entry {x!r} is not an edge of the row graph")
        if len(row) != n:
            raise ValueError(f"row of length {len(row)} in a strip of width {n}")
        f_of[a] = edge_graph.src[eidx[row[0]]]
        l_of[a] = edge_graph.dst[eidx[row[-1]]]
    (src, dst, first, last), cnt = _aggregate(
        [g.src, g.dst, f_of[g.label], l_of[g.label]], np.ones(g.num_edges))
    return StripClasses(n, g.num_vertices, src, dst, first, last, cnt,
                        np.arange(g.num_vertices))


# the weighted graph I


@dataclass
class IGraph:
    """Weighted graph whose Perron root drives the lower bound.

    Vertices are triples ``(f, v, l)`` flattened to
    ``(f * num_states + v) * M + l`` with ``M = |V_E| ** mu``.  Edges are
    length-``alpha`` paths of the strip grouped by endpoints and by the
    window extensions they induce; ``count`` holds the number of paths in a
    group.  ``weight_index`` gives, per group, the two windows whose weights
    multiply to the edge weight.
    """

    mu: int
    alpha: int
    n: int
    num_states: int
    num_symbols: int
    src: np.ndarray
    dst: np.ndarray
    count: np.ndarray
    left_window: np.ndarray
    right_window: np.ndarray

    @property
    def num_vertices(self) -> int:
        M = self.num_symbols ** self.mu
        return M * self.num_states * M

    @property
    def num_paths(self) -> int:
        return int(self.count.sum())

    def weights(self, phi: np.ndarray) -> np.ndarray:
        return self.count * phi[self.left_window] * phi[self.right_window]

    def _structure(self):
        if not hasattr(self, "_csr"):
            N = self.num_vertices
            key, inv = np.unique(self.src * N + self.dst, return_inverse=True)
            indptr = np.searchsorted(key // N, np.arange(N + 1))
            self._csr = (inv.ravel(), key % N, indptr, len(key))
        return self._csr

    def matrix(self, phi) -> SparseNonnegMatrix:
        """``A(I, W_phi)`` with parallel contributions summed."""
        w = phi.weights if isinstance(phi, PhiTable) else np.asarray(phi, dtype=float)
        inv, cols, indptr, nnz = self._structure()
        data = np.bincount(inv, weights=self.weights(w), minlength=nnz)
        N = self.num_vertices
        return SparseNonnegMatrix(sp.csr_matrix((data, cols, indptr), shape=(N, N)))


def _alpha_paths(c: StripClasses, alpha: int, k: int):
    """Length-``alpha`` paths grouped by (start, end, first word, last word)."""
    order = np.argsort(c.src, kind="stable")
    ptr = np.searchsorted(c.src[order], np.arange(c.num_states + 1))
    P_s, P_e, PF, PL, cnt = c.src.copy(), c.dst.copy(), c.first.copy(), c.last.copy(), c.count.copy()
    for _ in range(1, alpha):
        deg = ptr[P_e + 1] - ptr[P_e]
        rep = np.repeat(np.arange(len(P_e)), deg)
        offs = np.arange(len(rep)) - np.repeat(np.cumsum(deg) - deg, deg)
        e = order[ptr[P_e][rep] + offs]
        (P_s, P_e, PF, PL), cnt = _aggregate(
            [P_s[rep], c.dst[e], PF[rep] * k + c.first[e], PL[rep] * k + c.last[e]],
            cnt[rep] * c.count[e])
        check_size("alpha-paths of the strip", len(P_s))
    return P_s, P_e, PF, PL, cnt


def build_I(mu: int, alpha: int, strip, edge_graph) -> IGraph:
    """Weighted graph ``I(mu, alpha, n)`` on a vertical strip.

    Out-edges of ``(f, v, l)`` follow the length-``alpha`` paths from ``v``;
    the left window ``f`` is extended by the source vertices of the leftmost
    entries, the right window ``l`` by the target vertices of the rightmost
    entries, and each keeps its last ``mu`` entries.  The edge weight is
    ``phi(f + F) * phi(l + L)``.  Vertices with no weighted path through them
    drop out of the Perron computation.

    Parameters
    ----------
    mu, alpha : int
    strip : StripClasses or DeterministicGraph
        Grouped or explicit deterministic presentation of the strip.  An
        explicit presentation must have labels that are rows of edge ids.
    edge_graph : LabeledMultigraph, EdgeConstraintView or int
        The row graph, or just its number of vertices when ``strip`` is
        already grouped.
    """
    if isinstance(strip, DeterministicGraph):
        g = getattr(edge_graph, "graph", edge_graph)
        n = len(strip.graph.alphabet[0]) if len(strip.graph.alphabet) else 0
        strip = classes_from_graph(strip, g, n)
    classes = strip
    num_symbols = edge_graph if isinstance(edge_graph, (int, np.integer)) else \
        getattr(edge_graph, "graph", edge_graph).num_vertices
    if mu < 0 or alpha < 1:
        raise ValueError("need mu >= 0 and alpha >= 1")
    k = num_symbols
    P_s, P_e, PF, PL, cnt = _alpha_paths(classes, alpha, k)
    M, W, NS = k ** mu, k ** alpha, classes.num_states
    check_size("edges of I", M * M * len(P_s))
    f = np.repeat(np.arange(M), M)
    l = np.tile(np.arange(M), M)
    wf = f[:, None] * W + PF[None, :]
    wl = l[:, None] * W + PL[None, :]
    src = (f[:, None] * NS + P_s[None, :]) * M + l[:, None]
    dst = ((wf % M) * NS + P_e[None, :]) * M + (wl % M)
    return IGraph(mu, alpha, classes.n, NS, k, src.ravel(), dst.ravel(),
                  np.broadcast_to(cnt, wf.shape).ravel().copy(), wf.ravel(), wl.ravel())


# reports


@dataclass
class BoundReport:
    """A computed bound with its parameters and eigenvalue certificates."""

    constraint: str
    method: str
    params: dict
    bound: float
    certificates: list = field(default_factory=list)
    runtime_ms: float = 0.0
    estimate: float | None = None

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("estimate")
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def _cert_entry(n, cert: EigenCertificate) -> dict:
    return {"n": int(n), "lambda": float(cert.lambda_hat), "lo": float(cert.lower),
            "hi": float(cert.upper), "iters": int(cert.iterations)}


def _params(mu=None, alpha=None, p=None, q=None, delta=None, widths=()):
    return {"mu": mu, "alpha": alpha, "p": p, "q": q, "delta": delta, "widths": list(widths)}


def _check_symmetric(form: EdgeStripForm):
    from .graph import find_edge_reversing_matching

    if find_edge_reversing_matching(form.edge_graph) is None or not form.symmetric_strips(3):
        raise SymmetryError(f"horizontal strips of {form.name or 'the constraint'} are not symmetric")


def strip_transfer(s, m: int, direction: str = "horizontal") -> SparseNonnegMatrix:
    """Adjacency matrix of a strip presentation.

    For an :class:`EdgeStripForm` in the horizontal direction the rows and
    columns are indexed by all of ``V_E ** m``; otherwise by the vertices of
    the trimmed strip presentation.
    """
    if isinstance(s, EdgeStripForm) and direction == "horizontal":
        return SparseNonnegMatrix(s.transfer(m))
    if isinstance(s, EdgeStripForm):
        s = s.presentation
    g = strip(s, m, direction).presentation
    return SparseNonnegMatrix(g.adjacency())


def igraph_pair(form: EdgeStripForm, mu: int, alpha: int, p: int, q: int):
    """The weighted graphs for strip widths ``2q + p`` and ``2q``."""
    if p < 1 or q < 1:
        raise ValueError("need p >= 1 and q >= 1")
    k = form.num_edge_vertices
    return tuple(build_I(mu, alpha, strip_classes(form, n), k) for n in (2 * q + p, 2 * q))


def evaluate_pair(pair, phi, p: int, alpha: int, rel_tol: float = 1e-12):
    """Certified bound, point estimate and both certificates for a weighting."""
    top, bot = (perron(I.matrix(phi), rel_tol=rel_tol) for I in pair)
    if bot.upper <= 0:
        raise ValueError("phi annihilates strip: the weighted graph has Perron root 0")
    if top.lower > 0:
        bound = (log2(top.lower) - log2(bot.upper)) / (p * alpha)
    else:
        bound = float("-inf")
    est = (log2(top.lambda_hat) - log2(bot.lambda_hat)) / (p * alpha) if top.lambda_hat > 0 else None
    return bound, est, top, bot


def _lower(form: EdgeStripForm, mu, alpha, p, q, phi, rel_tol, method, name, widths_shown,
           delta=None, check=True, pair=None):
    t0 = time.perf_counter()
    if p < 1 or q < 1:
        raise ValueError("need p >= 1 and q >= 1")
    if check:
        _check_symmetric(form)
    if phi is None:
        phi = PhiTable.ones(mu, alpha, form.edge_graph.vertices)
    if (phi.mu, phi.alpha) != (mu, alpha):
        raise ValueError("phi table does not match mu and alpha")
    if len(phi.symbols) != form.num_edge_vertices:
        raise ValueError("phi table is over the wrong vertex set")
    pair = igraph_pair(form, mu, alpha, p, q) if pair is None else pair
    bound, est, top, bot = evaluate_pair(pair, phi, p, alpha, rel_tol)
    return BoundReport(
        name or form.name or "", method, _params(mu, alpha, p, q, delta, widths_shown), bound,
        [_cert_entry(widths_shown[0], top), _cert_entry(widths_shown[1], bot)],
        (time.perf_counter() - t0) * 1e3, est)


def lower_bound_edge(form: EdgeStripForm, mu: int, alpha: int, p: int, q: int,
                     phi: PhiTable | None = None, rel_tol: float = 1e-12, delta=None,
                     name: str | None = None) -> BoundReport:
    """Lower bound for a constraint in edge-strip form.

    Parameters
    ----------
    form : EdgeStripForm
        Must have symmetric horizontal strips (checked for heights 1-3).
    mu, alpha, p, q : int
    phi : PhiTable, optional
        Window weights; all ones when omitted.
    rel_tol : float
        Relative width requested from the eigenvalue certificates.

    Returns
    -------
    BoundReport
        ``method='thm1-lower'``, or ``'cw-baseline'`` when ``phi`` is omitted.
    """
    method = "cw-baseline" if phi is None else "thm1-lower"
    return _lower(form, mu, alpha, p, q, phi, rel_tol, method, name, (2 * q + p, 2 * q), delta)


def lower_bound_vertex(s: Presentation2D, mu: int, alpha: int, p: int, q: int,
                       phi: PhiTable | None = None, rel_tol: float = 1e-12, delta=None,
                       form: EdgeStripForm | None = None, name=None) -> BoundReport:
    """Lower bound for a constraint with vertex-constrained horizontal strips.

    The constraint is recoded by pairing horizontally adjacent symbols; a
    width-``n`` strip of the original becomes a width-``n - 1`` strip of the
    recoding, so the strips of widths ``p + 2q + 1`` and ``2q + 1`` are used.
    ``phi`` is indexed by windows of original symbols.
    """
    form = edge_form_vertex(s, name=s.name) if form is None else form
    method = "cw-baseline" if phi is None else "vertex-lower"
    return _lower(form, mu, alpha, p, q, phi, rel_tol, method, name or s.name,
                  (2 * q + p + 1, 2 * q + 1), delta)


def _vertical_capacity_upper(g, rel_tol) -> EigenCertificate:
    return perron(g.adjacency(), rel_tol=rel_tol)


def strip_upper_bound(s, n: int, rel_tol: float = 1e-12, vertex_form: EdgeStripForm | None = None,
                      name=None) -> BoundReport:
    """``cap(V_n(S)) / n``, an upper bound on the capacity.

    Parameters
    ----------
    s : Presentation2D
        The constraint itself (not a lift, whose strips are larger).
    n : int
    vertex_form : EdgeStripForm, optional
        Recoded form of ``s``; when given, the width-``n`` strip is read off
        the width-``n - 1`` strip of the recoding, which is deterministic.
    """
    t0 = time.perf_counter()
    if n < 1:
        raise ValueError("n must be positive")
    if vertex_form is not None and n >= 2:
        c = strip_classes(vertex_form, n - 1)
        N = c.num_states
        a = sp.csr_matrix((c.count, (c.src, c.dst)), shape=(N, N))
    else:
        g = strip(s, n, "vertical")
        a = g.deterministic.graph.adjacency()
    cert = perron(a, rel_tol=rel_tol)
    bound = log2(cert.upper) / n if cert.upper > 0 else float("-inf")
    est = log2(cert.lambda_hat) / n if cert.lambda_hat > 0 else None
    return BoundReport(name or getattr(s, "name", "") or "", "strip-upper",
                       _params(widths=(n,)), bound, [_cert_entry(n, cert)],
                       (time.perf_counter() - t0) * 1e3, est)


def cw_upper_bound(form: EdgeStripForm, k: int, p: int = 1, rel_tol: float = 1e-12,
                   name=None) -> BoundReport:
    """Upper bound from strips wrapped around a cylinder.

    For even circumference ``w`` let ``B_w`` be the transfer matrix of
    width-``w`` vertical strips whose rows are closed walks.  When every
    horizontal strip transfer matrix ``H_m`` is symmetric its eigenvalues are
    real, so ``lambda(H_m) ** w <= trace(H_m ** w)``, and the trace counts
    exactly the arrays counted by ``B_w``; hence
    ``cap <= log2(lambda(B_w)) / w``.  Circumferences ``2k`` and ``2k + 2p``
    are evaluated and the smaller bound is reported.

    Raises
    ------
    SymmetryError
        When the strips are not symmetric.
    """
    t0 = time.perf_counter()
    if k < 1 or p < 1:
        raise ValueError("need k >= 1 and p >= 1")
    _check_symmetric(form)
    best, certs, est = float("inf"), [], None
    for w in (2 * k, 2 * k + 2 * p):
        c = strip_classes(form, w, periodic=True)
        N = c.num_states
        a = sp.csr_matrix((c.count, (c.src, c.dst)), shape=(N, N))
        cert = perron(a, rel_tol=rel_tol)
        certs.append(_cert_entry(w, cert))
        if cert.upper > 0:
            val = log2(cert.upper) / w
            if val < best:
                best, est = val, log2(cert.lambda_hat) / w
    return BoundReport(name or form.name or "", "cw-upper",
                       _params(p=p, widths=(2 * k, 2 * k + 2 * p)),
                       best, certs, (time.perf_counter() - t0) * 1e3, est)


def finite_count_upper(s: Presentation2D, m: int, n: int, name=None) -> BoundReport:
    """``log2 |S_{m x n}| / (m n)``, an upper bound on the capacity."""
    from .oracle import count_arrays_2d

    t0 = time.perf_counter()
    cnt = count_arrays_2d(s, m, n).count
    bound = log2(cnt) / (m * n) if cnt > 0 else float("-inf")
    return BoundReport(name or s.name or "", "finite-upper", _params(widths=(m, n)), bound, [],
                       (time.perf_counter() - t0) * 1e3, bound)
