"""Constraint tokens accepted on the command line.

One-dimensional tokens: ``even``, ``odd``, ``chg:B``, ``rll:D:K`` (``K`` may
be ``inf``).  Two-dimensional tokens: ``nak``, ``rwim``, ``rwim-t``
(transposed), ``hard-square``, ``even2``, ``chg2x2``, ``chg3x2`` and
``axial:C1,C2`` (columns in ``C1``, rows in ``C2``).  A one-dimensional
token where a two-dimensional constraint is expected means its axial square.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import inf

from .constraints import (
    Constraint1D,
    EdgeStripForm,
    Presentation2D,
    axial_presentation,
    builtin_1d,
    builtin_2d,
    edge_form_axial,
    edge_form_vertex,
    transpose_2d,
)

__all__ = ["Resolved2D", "resolve_1d", "resolve_2d", "TOKENS_2D"]

TOKENS_2D = ("nak", "rwim", "rwim-t", "hard-square", "even2", "chg2x2", "chg3x2")
_VERTEX = {"nak", "rwim", "rwim-t", "hard-square"}


@dataclass
class Resolved2D:
    """A two-dimensional constraint with the edge-strip form used for bounds.

    ``route`` is ``'vertex'`` when ``form`` is the pair recoding of
    ``presentation`` and ``'edge'`` when it is a lift of an axial product.
    """

    token: str
    presentation: Presentation2D
    form: EdgeStripForm
    route: str


def resolve_1d(token: str) -> Constraint1D:
    """Parse a one-dimensional token."""
    parts = token.strip().split(":")
    name = parts[0]
    try:
        if name in ("even", "odd") and len(parts) == 1:
            return builtin_1d(name)
        if name == "chg" and len(parts) == 2:
            return builtin_1d("chg", int(parts[1]))
        if name == "rll" and len(parts) == 3:
            k = inf if parts[2] in ("inf", "oo") else int(parts[2])
            return builtin_1d("rll", int(parts[1]), k)
    except ValueError as exc:
        raise ValueError(f"bad constraint token {token!r}: {exc}") from None
    raise ValueError(f"unknown 1D constraint token {token!r}")


@lru_cache(maxsize=32)
def resolve_2d(token: str) -> Resolved2D:
    """Parse a two-dimensional token and build its edge-strip form."""
    token = token.strip()
    if token in _VERTEX:
        if token == "rwim-t":
            pres = transpose_2d(builtin_2d("rwim"))
        else:
            pres = builtin_2d(token)
        return Resolved2D(token, pres, edge_form_vertex(pres, name=token), "vertex")
    if token == "even2":
        cols = rows = builtin_1d("even")
    elif token in ("chg2x2", "chg3x2"):
        cols = rows = builtin_1d("chg", int(token[3]))
    elif token.startswith("axial:"):
        pair = token[len("axial:"):].split(",")
        if len(pair) != 2:
            raise ValueError(f"axial token needs two factors: {token!r}")
        cols, rows = (resolve_1d(t) for t in pair)
    else:
        cols = rows = resolve_1d(token)
    pres = axial_presentation([cols, rows], name=token)
    return Resolved2D(token, pres, edge_form_axial(cols, rows, name=token), "edge")
