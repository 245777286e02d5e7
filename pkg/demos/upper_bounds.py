"""Upper bounds from strips and from strips wrapped on a cylinder.

The cylinder bound needs symmetric strip transfer matrices; the axial
product of EVEN (columns) and ODD (rows) fails that check and is refused.
"""

from capbound import SymmetryError, cw_upper_bound, strip_upper_bound
from capbound.presets import resolve_2d

for token in ("hard-square", "nak", "even2", "rwim"):
    res = resolve_2d(token)
    vf = res.form if res.route == "vertex" else None
    strip = strip_upper_bound(res.presentation, 6, vertex_form=vf).bound
    cyl = [cw_upper_bound(res.form, k).bound for k in (3, 4, 5)]
    print(f"{token:<12} strip(6) {strip:.10f}   cylinder k=3,4,5: "
          + "  ".join(f"{v:.10f}" for v in cyl))

try:
    cw_upper_bound(resolve_2d("axial:even,odd").form, 2)
except SymmetryError as exc:
    print(f"axial:even,odd refused: {exc}")
