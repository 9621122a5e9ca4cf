"""Recursive orbits and their Fibonacci weight ledgers.

Every operator in the library has the shape "coordinate functional times a
linear map".  Its recursive orbit x_n = M(x_{n-m}, ..., x_{n-1}) then has a
closed form: a power of the linear map scaled by two scalar sequences, c_n
(reading the initial data with Fibonacci exponents) and d_n (collecting the
shift weights).  This script iterates directly, rebuilds states from the
ledgers, and checks both against each other.
"""

import numpy as np

from hyperorbit import (
    SeqVector,
    SpaceTag,
    closed_form_state,
    iterate_bc,
    ledger,
    make_operator,
)

rng = np.random.default_rng(0)
spec = make_operator("m_l1")   # (x, y) -> y_1 * B_w(x) with w_i = 1/i^2

n = 100
x = SeqVector.from_complex(SpaceTag.l1(),
                           rng.uniform(0.5, 2, n) * np.exp(1j * rng.uniform(-3, 3, n)))
y = SeqVector.from_complex(SpaceTag.l1(),
                           rng.uniform(0.5, 2, n) * np.exp(1j * rng.uniform(-3, 3, n)))

orbit = iterate_bc(spec, (x, y), 30)
led = ledger(spec, (x, y), 30)

print("step   log|c_n|        log d_n         closed-vs-direct")
for step in (1, 2, 5, 10, 20, 30):
    cf = closed_form_state(spec, (x, y), led, step)
    direct = orbit.states[step - 1]
    gap = float(np.max(np.abs(cf.lm - direct.lm)))
    print(f"{step:4d}  {led.c(step).log_mag:14.4f}  {led.d(step).log_mag:14.4f}"
          f"  {gap:.2e}")

# the recursion-built c_n agrees with the direct product of Fibonacci powers
print("\nrecursion vs direct exponent product:")
for step in (5, 15, 25):
    r, d = led.c(step), led.direct_c(step)
    print(f"  n={step:2d}  |d log| = {abs(r.log_mag - d.log_mag):.2e}")

# the weights collapse doubly exponentially inside the unit ball, which is
# why no orbit started there can reach every target
small = SeqVector.from_complex(SpaceTag.l1(), [0.002] * 60)
tiny_orbit = iterate_bc(spec, (small, small), 25)
print("\ncontraction-ball norms (log):",
      [round(v, 1) for v in tiny_orbit.log_norms()[:8]], "...")
from hyperorbit import classify_orbit
print("classification:", classify_orbit(tiny_orbit).value)
