"""Improve max-entropic weights for EVEN x EVEN by coordinate search.

Prints the best-so-far bound every 25 evaluations and checks that the final
table certifies a value below the cylinder upper bound.
"""

from capbound import cw_upper_bound, lower_bound_edge, max_entropic_phi, optimize_phi
from capbound.phi import MaxEntropicParams
from capbound.presets import resolve_2d

form = resolve_2d("even2").form
mu, alpha, p, q = 1, 1, 1, 4

init = max_entropic_phi(form, MaxEntropicParams(3, mu, alpha))
res = optimize_phi(form, mu, alpha, p, q, init, budget=200, seed=0)
for i in range(0, len(res.trace), 25):
    print(f"evaluation {i + 1:4d}: {res.trace[i]:.10f}")
print(f"final bound      {res.bound:.10f}")

check = lower_bound_edge(form, mu, alpha, p, q, res.phi).bound
upper = cw_upper_bound(form, 5).bound
print(f"recomputed       {check:.10f}")
print(f"cylinder upper   {upper:.10f}")
print("weights:")
print(res.phi.to_text(), end="")
