"""Certified Perron roots of sparse nonnegative matrices.

The Perron root of every irreducible diagonal block is enclosed with
Collatz-Wielandt bounds

.. math:: \\min_i (Ax)_i / x_i \\le \\lambda \\le \\max_i (Ax)_i / x_i,

valid for any strictly positive ``x``.  The iterate is produced by power
iteration on ``A + I``, which is primitive on every nontrivial strongly
connected block, so periodic blocks converge as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla
from scipy.sparse.csgraph import connected_components

__all__ = [
    "SparseNonnegMatrix",
    "EigenCertificate",
    "as_nonneg",
    "perron",
    "perron_vector",
    "quadratic_form_power",
]

_EPS = np.finfo(float).eps


class SparseNonnegMatrix:
    """Square sparse matrix with finite nonnegative entries.

    Parameters
    ----------
    data : array_like or scipy.sparse matrix
        Duplicate entries are summed.
    labels : sequence, optional
        Names of the row/column indices.
    """

    def __init__(self, data, labels=None):
        a = sp.csr_matrix(data, dtype=float)
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"matrix must be square, got {a.shape}")
        a.sum_duplicates()
        a.sort_indices()
        if a.nnz and (not np.all(np.isfinite(a.data)) or a.data.min() < 0):
            raise ValueError("entries must be finite and nonnegative")
        a.eliminate_zeros()
        self.csr = a
        self.labels = labels

    @classmethod
    def from_triplets(cls, n, rows, cols, vals, labels=None):
        return cls(sp.csr_matrix((vals, (rows, cols)), shape=(n, n)), labels)

    @property
    def n(self) -> int:
        return self.csr.shape[0]

    def triplets(self):
        """Row-major ``(row, col, weight)`` arrays."""
        c = self.csr.tocoo()
        return c.row, c.col, c.data

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def __repr__(self):
        return f"SparseNonnegMatrix(n={self.n}, nnz={self.csr.nnz})"


def as_nonneg(a) -> SparseNonnegMatrix:
    return a if isinstance(a, SparseNonnegMatrix) else SparseNonnegMatrix(a)


@dataclass
class EigenCertificate:
    """Enclosure of a Perron root.

    Attributes
    ----------
    lambda_hat : float
        Point estimate.
    lower, upper : float
        Collatz-Wielandt enclosure, widened by a rounding allowance.
    iterations : int
        Power iterations summed over blocks.
    converged : bool
        False when the iteration cap stopped the computation; the interval is
        still valid, only wider than requested.
    vector : ndarray or None
        Nonnegative unit eigenvector estimate for the dominant block.
    """

    lambda_hat: float
    lower: float
    upper: float
    iterations: int
    converged: bool = True
    vector: np.ndarray | None = field(default=None, repr=False)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def as_dict(self) -> dict:
        return {"lambda": self.lambda_hat, "lo": self.lower, "hi": self.upper,
                "iters": self.iterations}


def _blocks(a: sp.csr_matrix):
    """Nontrivial strongly connected blocks as index arrays."""
    n = a.shape[0]
    ncomp, lab = connected_components(a, directed=True, connection="strong")
    order = np.argsort(lab, kind="stable")
    bounds = np.searchsorted(lab[order], np.arange(ncomp + 1))
    diag = a.diagonal()
    out = []
    for c in range(ncomp):
        idx = order[bounds[c]:bounds[c + 1]]
        if len(idx) > 1 or diag[idx[0]] > 0:
            out.append(idx)
    return out


def _shift(b) -> float:
    """Largest power of two not above the largest row sum.

    Iterating with ``A + shift * I`` damps periodic parts at any scale, and
    scaling ``A`` by a power of two scales every iterate's ratios exactly.
    """
    top = float(b.sum(axis=1).max())
    return 2.0 ** (np.frexp(top)[1] - 1) if top > 0 else 1.0


def _warm_start(b: sp.csr_matrix, shift: float) -> np.ndarray | None:
    # uncertified estimate; the enclosure below never trusts it
    try:
        shifted = b + shift * sp.identity(b.shape[0], format="csr")
        _, v = sla.eigs(shifted, k=1, which="LM", v0=np.ones(b.shape[0]),
                        tol=1e-14, maxiter=5000)
    except Exception:
        return None
    v = np.abs(np.real(v[:, 0]))
    if not np.all(np.isfinite(v)) or v.max() <= 0:
        return None
    return v / v.max()


def _block_perron(b: sp.csr_matrix, rel_tol: float, max_iter: int, warm: bool):
    n = b.shape[0]
    if n == 1:
        lam = float(b[0, 0])
        return lam, lam, lam, 0, True, np.ones(1)
    # a row of k nonnegative products summed in floating point has relative
    # error at most about k * eps; one more eps for the division
    row_nnz = np.diff(b.indptr).max()
    slack = 2.0 * (row_nnz + 2) * _EPS
    shift = _shift(b)
    x = None
    if warm and n > 64:
        x = _warm_start(b, shift)
        if x is not None:
            x = np.maximum(x, 1e-12)
    if x is None:
        x = np.ones(n)
    best = (0.0, np.inf)
    lam = 0.0
    it = 0
    while True:
        bx = b @ x
        if np.all(x > 0):
            r = bx / x
            lo = r.min() * (1 - slack)
            hi = r.max() * (1 + slack)
            best = (max(best[0], lo), min(best[1], hi))
            lam = float(x @ bx / (x @ x))
            # the rounding allowance is reported but not iterated away
            if r.max() - r.min() <= rel_tol * max(lam, 1e-300):
                return lam, float(best[0]), float(best[1]), it, True, x / np.linalg.norm(x)
        if it >= max_iter:
            break
        y = bx + shift * x
        x = y / y.max()
        it += 1
    hi = float(best[1]) if np.isfinite(best[1]) else float(np.abs(b).sum(axis=1).max())
    return lam, float(best[0]), hi, it, False, x / np.linalg.norm(x)


def perron(a, rel_tol: float = 1e-12, max_iter: int = 10**6,
           warm_start: bool = True) -> EigenCertificate:
    """Certified Perron root of a nonnegative matrix.

    Parameters
    ----------
    a : SparseNonnegMatrix, scipy.sparse matrix or ndarray
    rel_tol : float
        Stop once the Collatz-Wielandt ratios of every block agree to
        ``rel_tol * lambda_hat``; the reported interval adds a rounding
        allowance of about ``row_nnz * eps`` relative on each side.
    max_iter : int
        Power-iteration cap per block.
    warm_start : bool
        Seed large blocks with an uncertified Arnoldi estimate.  The
        Collatz-Wielandt enclosure is recomputed from scratch either way.

    Returns
    -------
    EigenCertificate
        ``lower``/``upper`` are the maxima over blocks of the block bounds.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    a = as_nonneg(a).csr
    n = a.shape[0]
    if a.nnz == 0:
        return EigenCertificate(0.0, 0.0, 0.0, 0, True, None)
    blocks = _blocks(a)
    if not blocks:
        return EigenCertificate(0.0, 0.0, 0.0, 0, True, None)
    subs = [a[idx][:, idx] for idx in blocks]
    # row sums bound each block root from above; visit the largest first
    caps = [float(s.sum(axis=1).max()) for s in subs]
    order = sorted(range(len(blocks)), key=lambda i: -caps[i])
    best_lo, best_hi, best_hat, its, ok = 0.0, 0.0, 0.0, 0, True
    vec = None
    for i in order:
        if caps[i] <= best_lo:
            best_hi = max(best_hi, caps[i])
            continue
        lam, lo, hi, k, conv, x = _block_perron(subs[i], rel_tol, max_iter, warm_start)
        its += k
        ok &= conv
        if lam > best_hat:
            best_hat = lam
            vec = np.zeros(n)
            vec[blocks[i]] = x
        best_lo = max(best_lo, lo)
        best_hi = max(best_hi, hi)
    return EigenCertificate(best_hat, best_lo, best_hi, its, ok, vec)


def perron_vector(a, rel_tol: float = 1e-12, max_iter: int = 10**6) -> np.ndarray:
    """Nonnegative L2-normalised Perron eigenvector.

    For reducible matrices the vector of the dominant block is extended
    by zeros and refined by shifted power iteration over the whole
    matrix until the residual ``||Ar - lambda r||`` is below
    ``rel_tol * lambda``.

    Raises
    ------
    ValueError
        If the Perron root is zero.
    """
    m = as_nonneg(a).csr
    cert = perron(m, rel_tol=rel_tol, max_iter=max_iter)
    if cert.upper <= 0 or cert.vector is None:
        raise ValueError("no Perron vector: Perron root is zero")
    r = cert.vector
    lam = cert.lambda_hat
    shift = _shift(m)
    for _ in range(max_iter):
        ar = m @ r
        if np.linalg.norm(ar - lam * r) <= rel_tol * lam * np.linalg.norm(r):
            break
        y = ar + shift * r
        r = y / np.linalg.norm(y)
        lam = float(r @ (m @ r))
    return r / np.linalg.norm(r)


def quadratic_form_power(a, x, n: int) -> float:
    """``x^T A^n x`` through ``n`` sparse matrix-vector products."""
    m = as_nonneg(a).csr
    x = np.asarray(x, dtype=float)
    if x.shape != (m.shape[0],):
        raise ValueError(f"vector of length {x.shape} does not match {m.shape}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    y = x.copy()
    for _ in range(n):
        y = m @ y
    return float(x @ y)
