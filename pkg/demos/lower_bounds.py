"""Lower bounds from max-entropic window weights, next to the unit-weight baseline.

Values are rounded down to ten places so they stay lower bounds.  Run
with ``python demos/lower_bounds.py``; the NAK row takes a few seconds.
"""

from capbound.cli import round_sound, run_lower

ROWS = [
    # token, delta, mu, alpha, p, q
    ("chg3x2", 0, 0, 1, 1, 2),
    ("even2", 3, 1, 3, 1, 4),
    ("rwim", 3, 2, 2, 1, 5),
    ("nak", 3, 1, 2, 2, 6),
]

print(f"{'constraint':<10} {'d':>2} {'mu':>2} {'a':>2} {'p':>2} {'q':>2}  {'weighted':>12}  {'baseline':>12}")
for token, delta, mu, alpha, p, q in ROWS:
    weighted = run_lower(token, mu, alpha, p, q, "maxent", delta)
    baseline = run_lower(token, 0, 1, p, q, "ones")
    print(f"{token:<10} {delta:>2} {mu:>2} {alpha:>2} {p:>2} {q:>2}  "
          f"{round_sound(weighted.bound, True):12.10f}  {round_sound(baseline.bound, True):12.10f}")
