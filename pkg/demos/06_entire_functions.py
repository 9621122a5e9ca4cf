"""Entire-function constructions: reciprocal pairs, block-built universal
functions, and the doubly exponential weight collapse.

Vectors tagged ``hc`` store monomial coefficients; differentiation is the
backward shift with weights w_j = j, translation mixes coefficients through
exact big-integer binomials.
"""

import math

import numpy as np

from hyperorbit import (
    DenseTestSeq,
    LogComplex,
    SeqVector,
    SpaceTag,
    delta_d_pair,
    hc_Q_blocks,
    verify_weight_collapse,
)
from hyperorbit.constructions import stacked_primitive_g
from hyperorbit.dynamics import collapse_constant

HC = SpaceTag.hc(1)

# --- the reciprocal-coefficient pair ---------------------------------------
# choosing f^(n)(0) as the reciprocal product of g's derivative values makes
# every even orbit weight of (f, g) exactly one
g = stacked_primitive_g(DenseTestSeq(), blocks=8)
f, certs = delta_d_pair(g)
unity = [c for c in certs if c.name == "even-weight-unity"]
print("even weights certified:", len(unity),
      " worst |log c_2n| =", max(c.measured for c in unity))

# --- the block-built universal function ------------------------------------
# each block solves two monomial equations to pin two consecutive weights to
# one on the principal root branch
qb = hc_Q_blocks(DenseTestSeq(), K=3)
print("\nblock tops:", qb.ns)
print("|alpha| per block:", [round(math.exp(a.log_mag), 6) for a in qb.alphas])
print("|beta| per block: ", [round(math.exp(b.log_mag), 6) for b in qb.betas])
print("all certificates pass:", all(c.ok for c in qb.certificates))

# the top coefficient's modulus approaches one as the gap grows
print("\n|beta_2| -> 1 as the second gap widens:")
for pad in (2, 10, 20, 30):
    qq = hc_Q_blocks(DenseTestSeq(), K=2, pad=pad)
    print(f"  gap to {qq.ns[1]:3d}: ||beta|-1| = "
          f"{abs(math.exp(qq.betas[1].log_mag) - 1):.2e}")

# --- the weight collapse ----------------------------------------------------
# with |f(0)| below the threshold and g's coefficients at most one in modulus,
# the weights fall under 1/(k 2^(2^(n/2))): no such pair can have dense orbit
rng = np.random.default_rng(0)
mags = rng.uniform(0.3, 1.0, 50)
g2 = SeqVector.from_complex(HC, mags * np.exp(1j * rng.uniform(-np.pi, np.pi, 50)))
k_log, delta_log = collapse_constant(40)
rep = verify_weight_collapse(LogComplex(delta_log + math.log(0.99), 0.0), g2, 40)
print("\ncollapse bound holds for n <= 40:", rep.ok)
print("margin at n = 40 (log):", round(rep.margins[-1], 1),
      " (bound is -2^20 log 2 ~ -727000)")
