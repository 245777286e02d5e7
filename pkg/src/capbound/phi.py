"""Choosing the window weights for the lower bound.

Two strategies are provided.  :func:`max_entropic_phi` reads conditional
window probabilities off the maximum-entropy Markov measure of a wide
horizontal strip.  :func:`optimize_phi` improves any starting table by a
derivative-free coordinate search on ``psi = log(phi)``; since every
weighting yields a valid bound, optimizer quality only affects tightness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import PhiTable, evaluate_pair, igraph_pair
from .constraints import EdgeStripForm
from .spectral import perron_vector

__all__ = ["MaxEntropicParams", "PsiVector", "max_entropic_phi", "optimize_phi", "OptimizeResult"]


@dataclass(frozen=True)
class MaxEntropicParams:
    """Placement of the weight window inside a strip of height ``omega``.

    The window covers rows ``delta .. delta + mu + alpha - 1`` of a strip of
    height ``omega = 2 * delta + mu + alpha``, i.e. it sits in the middle.
    """

    delta: int
    mu: int
    alpha: int

    def __post_init__(self):
        if self.delta < 0 or self.mu < 0 or self.alpha < 1:
            raise ValueError("need delta >= 0, mu >= 0 and alpha >= 1")

    @property
    def omega(self) -> int:
        return 2 * self.delta + self.mu + self.alpha


def window_marginal(form: EdgeStripForm, params: MaxEntropicParams, rel_tol: float = 1e-12):
    """Joint probability of the window rows under the max-entropic measure.

    The stationary probability of a column ``v`` of the height-``omega``
    strip is ``r_v ** 2`` for the unit Perron vector ``r`` of the symmetric
    transfer matrix.  Returns an array over window codes summing to 1.
    """
    k = form.num_edge_vertices
    h = form.transfer(params.omega)
    r = perron_vector(h, rel_tol=rel_tol)
    prob = r ** 2
    prob = prob / prob.sum()
    lo, hi = params.delta, params.delta + params.mu + params.alpha
    axes = tuple(i for i in range(params.omega) if not lo <= i < hi)
    return prob.reshape([k] * params.omega).sum(axis=axes).reshape(-1)


def max_entropic_phi(form: EdgeStripForm, params: MaxEntropicParams,
                     rel_tol: float = 1e-12) -> PhiTable:
    """Square root of the conditional probability of the last ``alpha``
    window entries given the first ``mu``.

    Conditioning events of probability zero give weight zero.

    Raises
    ------
    ValueError
        If the transfer matrix of the strip has Perron root zero.
    """
    k = form.num_edge_vertices
    joint = window_marginal(form, params, rel_tol)
    cond = joint.reshape(k ** params.mu, k ** params.alpha)
    head = cond.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(head > 0, np.sqrt(cond / np.where(head > 0, head, 1.0)), 0.0)
    return PhiTable(params.mu, params.alpha, form.edge_graph.vertices, w.reshape(-1))


@dataclass
class PsiVector:
    """Log-weights with the anchor window pinned to zero.

    Attributes
    ----------
    values : ndarray
        ``psi`` over window codes; ``values[anchor] == 0``.
    anchor : int
        Window code of the anchor.
    """

    mu: int
    alpha: int
    symbols: tuple
    values: np.ndarray
    anchor: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("psi must be finite")
        if self.values[self.anchor] != 0:
            raise ValueError("psi must vanish at the anchor window")

    @classmethod
    def from_phi(cls, phi: PhiTable, anchor: int | None = None, floor: float = 1e-12):
        """Logarithm of ``phi`` normalized at the anchor.

        Zero weights are replaced by ``floor`` times the smallest positive
        weight so the result stays finite.  The default anchor is the first
        window (in code order) with positive weight.
        """
        w = phi.weights
        pos = np.flatnonzero(w > 0)
        anchor = int(pos[0]) if anchor is None else int(anchor)
        if w[anchor] <= 0:
            raise ValueError("anchor window must have positive weight")
        w = np.where(w > 0, w, floor * w[pos].min())
        psi = np.log(w) - np.log(w[anchor])
        psi[anchor] = 0.0
        return cls(phi.mu, phi.alpha, phi.symbols, psi, anchor)

    def to_phi(self) -> PhiTable:
        return PhiTable(self.mu, self.alpha, self.symbols, np.exp(self.values))


@dataclass
class OptimizeResult:
    """Best weighting found, its bound, and the best-so-far trace."""

    phi: PhiTable
    bound: float
    trace: list = field(default_factory=list)
    evaluations: int = 0


def optimize_phi(form: EdgeStripForm, mu: int, alpha: int, p: int, q: int, init: PhiTable,
                 budget: int = 200, seed: int = 0, rel_tol: float = 1e-12,
                 step: float = 0.5, min_step: float = 1e-4, pair=None) -> OptimizeResult:
    """Coordinate search for the weighting with the largest certified bound.

    Each sweep visits the active windows (those that weight at least one
    edge) in an order drawn from ``seed``, trying ``psi +/- step`` on one
    coordinate at a time and keeping any improvement.  A sweep without
    improvement halves the step; once it falls below ``min_step`` the search
    restarts from the best point with a random perturbation.

    Parameters
    ----------
    form : EdgeStripForm
    mu, alpha, p, q : int
    init : PhiTable
        Starting point; it is the first evaluation.
    budget : int
        Number of bound evaluations, at least 1.
    seed : int

    Returns
    -------
    OptimizeResult
        ``trace[i]`` is the best bound after ``i + 1`` evaluations.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if (init.mu, init.alpha) != (mu, alpha):
        raise ValueError("init does not match mu and alpha")
    rng = np.random.default_rng(seed)
    pair = igraph_pair(form, mu, alpha, p, q) if pair is None else pair

    def objective(weights):
        try:
            return evaluate_pair(pair, weights, p, alpha, rel_tol)[0]
        except ValueError:
            return float("-inf")

    best_phi, best = init, objective(init.weights)
    trace = [best]
    psi = PsiVector.from_phi(init)
    active = np.unique(np.concatenate([np.concatenate([I.left_window, I.right_window])
                                       for I in pair]))
    coords = np.array([c for c in active.tolist() if c != psi.anchor], dtype=np.int64)
    x = psi.values.copy()
    x_val = best
    h = step

    def record(y, val):
        nonlocal best, best_phi
        if val > best:
            best, best_phi = val, PhiTable(mu, alpha, init.symbols, np.exp(y))
        trace.append(best)

    while len(trace) < budget and len(coords):
        improved = False
        for c in rng.permutation(coords):
            for sgn in (1.0, -1.0):
                if len(trace) >= budget:
                    break
                y = x.copy()
                y[c] += sgn * h
                val = objective(np.exp(y))
                record(y, val)
                if val > x_val:
                    x, x_val, improved = y, val, True
                    break
        if improved:
            continue
        h /= 2
        if h < min_step and len(trace) < budget:
            # restart near the best point
            x = np.log(best_phi.weights / best_phi.weights[psi.anchor])
            x[coords] += rng.normal(scale=step / 2, size=len(coords))
            x_val = objective(np.exp(x))
            record(x, x_val)
            h = step
    return OptimizeResult(best_phi, best, trace, len(trace))
