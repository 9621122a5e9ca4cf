"""Log-domain scalars that survive Fibonacci-sized exponents.

Orbit weights here are products like y1**F(n) * x2**F(n-1) * ... where the
exponents themselves are astronomically large integers.  Ordinary complex
doubles overflow at |z| ~ 1e308; the log-polar representation carries the
magnitude as a natural log and the phase separately, and reduces phases under
big-integer exponents at extended precision.
"""

import math

from hyperorbit import FibCache, LogComplex, logc_add, logc_mul

fib = FibCache(300)

# a modest complex number
z = LogComplex.from_complex(1.5 + 0.7j)
print("z              :", z)

# raising it to the 200th Fibonacci number: the exponent has 42 digits
e = fib(200)
print("F(200)         :", e)
p = z.pow_int(e)
print("log|z**F(200)| :", p.log_mag)       # ~ 1.9e41, far beyond any float range
print("phase          :", p.phase)          # still accurate to ~1e-15

# exact zero is a structural value, not a tiny magnitude
zero = LogComplex.zero()
print("0 * z**F(200)  :", zero.mul(p))

# addition factors out the larger magnitude; exact negations snap to zero
s = logc_add(LogComplex.from_real(3.0), LogComplex.from_complex(4j))
print("|3 + 4i|       :", math.exp(s.log_mag))
print("z + (-z)       :", logc_add(z, z.neg()))

# multiplication is plain addition of logs, so enormous dynamic range is free
big = LogComplex(1e15, 0.3)
tiny = LogComplex(-1e15, -0.3)
print("big * tiny     :", logc_mul(big, tiny))
