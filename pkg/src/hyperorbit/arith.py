"""Log-domain complex scalars, Fibonacci machinery, and the quadratic exponent sequence.

Orbit weights in this library are products like ``y_1**F(n) * x_2**F(n-1) * ...``
whose magnitudes overflow any fixed-precision format long before the dynamics
become interesting (``F(200) ~ 2.8e41`` appears as an *exponent*).  Every scalar
is therefore carried in log-polar form: a natural-log magnitude plus a phase in
``(-pi, pi]``.  Exact zero is a distinguished value (log magnitude ``-inf``,
canonical phase ``0``), produced structurally by shifts and functionals, never
by underflow.

Phase reduction under a big-integer exponent is done at extended working
precision (the exponent's bit length plus a guard band), so that e.g. the phase
of ``z**F(200)`` is still accurate to near machine epsilon.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from mpmath import mp

from .errors import ParameterRangeError

LOG_ZERO = float("-inf")

_TWO_PI = 2.0 * math.pi


def normalize_phase(p: float) -> float:
    """Reduce a finite phase into the canonical interval ``(-pi, pi]``."""
    if -math.pi < p <= math.pi:
        return p
    q = math.remainder(p, _TWO_PI)  # lands in [-pi, pi]
    if q <= -math.pi:
        q = math.pi
    return q


def phase_times_int(phase: float, n: int) -> float:
    """Reduce ``n * phase`` mod 2*pi into ``(-pi, pi]`` for arbitrarily large ``n``.

    Naive float multiplication destroys all phase accuracy once ``n*phase``
    exceeds ~2**52; the reduction is performed at a working precision matched
    to the exponent's bit length (the product of an exact integer and an exact
    double, reduced against pi at that precision).
    """
    if phase == 0.0 or n == 0:
        return 0.0
    with mp.workprec(abs(n).bit_length() + 80):
        v = mp.fmod(mp.mpf(n) * mp.mpf(phase), 2 * mp.pi)
        out = float(v)
    return normalize_phase(out)


@dataclass(frozen=True, slots=True)
class LogComplex:
    """A complex scalar as (natural-log magnitude, phase in ``(-pi, pi]``).

    ``log_mag = -inf`` encodes exact zero and absorbs under multiplication.
    Instances are immutable.
    """

    log_mag: float
    phase: float = 0.0

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "LogComplex":
        return LogComplex(LOG_ZERO, 0.0)

    @staticmethod
    def one() -> "LogComplex":
        return LogComplex(0.0, 0.0)

    @staticmethod
    def from_complex(z: complex) -> "LogComplex":
        z = complex(z)
        if z == 0:
            return LogComplex.zero()
        return LogComplex(math.log(abs(z)), normalize_phase(cmath.phase(z)))

    @staticmethod
    def from_real(x: float) -> "LogComplex":
        if x == 0:
            return LogComplex.zero()
        if x > 0:
            return LogComplex(math.log(x), 0.0)
        return LogComplex(math.log(-x), math.pi)

    @staticmethod
    def from_polar(log_mag: float, phase: float) -> "LogComplex":
        if log_mag == LOG_ZERO:
            return LogComplex.zero()
        return LogComplex(log_mag, normalize_phase(phase))

    # -- predicates and conversions ---------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.log_mag == LOG_ZERO

    def to_complex(self) -> complex:
        """Ordinary complex value; overflows to inf beyond float range."""
        if self.is_zero:
            return 0j
        try:
            r = math.exp(self.log_mag)
        except OverflowError:
            r = math.inf
        return cmath.rect(r, self.phase)

    # -- arithmetic --------------------------------------------------------

    def mul(self, other: "LogComplex") -> "LogComplex":
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(
            self.log_mag + other.log_mag,
            normalize_phase(self.phase + other.phase),
        )

    def div(self, other: "LogComplex") -> "LogComplex":
        if other.is_zero:
            raise ZeroDivisionError("division by exact log-domain zero")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(
            self.log_mag - other.log_mag,
            normalize_phase(self.phase - other.phase),
        )

    def inv(self) -> "LogComplex":
        return LogComplex.one().div(self)

    def neg(self) -> "LogComplex":
        if self.is_zero:
            return self
        # direct +-pi flip stays normalized and avoids a wrap round trip
        p = self.phase - math.pi if self.phase > 0 else self.phase + math.pi
        return LogComplex(self.log_mag, p)

    def add(self, other: "LogComplex") -> "LogComplex":
        """Complex sum, computed by factoring out the larger magnitude.

        A relative cancellation below 1e-15 snaps to exact zero, so that
        structural cancellations (``a + (-a)``) produce the distinguished
        zero rather than rounding noise.
        """
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if other.log_mag > self.log_mag:
            self, other = other, self
        ratio = cmath.rect(math.exp(other.log_mag - self.log_mag),
                           other.phase - self.phase)
        s = 1.0 + ratio
        mag = abs(s)
        if mag < 1e-15:
            return LogComplex.zero()
        return LogComplex(
            self.log_mag + math.log(mag),
            normalize_phase(self.phase + cmath.phase(s)),
        )

    def pow_int(self, n: int) -> "LogComplex":
        """``self**n`` for an integer exponent of any size (Fibonacci scale)."""
        if self.is_zero:
            if n <= 0:
                raise ZeroDivisionError("0**n undefined for n <= 0")
            return LogComplex.zero()
        if n == 0:
            return LogComplex.one()
        try:
            nf = float(n)
        except OverflowError:
            nf = math.inf if n > 0 else -math.inf
        return LogComplex(self.log_mag * nf, phase_times_int(self.phase, n))

    def root(self, n: int) -> "LogComplex":
        """Principal branch n-th root: the root whose argument is ``phase/n``."""
        if n < 1:
            raise ParameterRangeError("root index must be a positive integer")
        if self.is_zero:
            return LogComplex.zero()
        if n == 1:
            return self
        try:
            nf = float(n)
        except OverflowError:
            return LogComplex.one()  # log_mag/n and phase/n both underflow to 0
        return LogComplex(self.log_mag / nf, self.phase / nf)

    def __repr__(self) -> str:  # pragma: no cover
        if self.is_zero:
            return "LogComplex(zero)"
        return f"LogComplex(log_mag={self.log_mag!r}, phase={self.phase!r})"


# Spec-level operation aliases.
def logc_mul(a: LogComplex, b: LogComplex) -> LogComplex:
    return a.mul(b)


def logc_add(a: LogComplex, b: LogComplex) -> LogComplex:
    return a.add(b)


def logc_root(a: LogComplex, n: int) -> LogComplex:
    return a.root(n)


def logc_prod(factors) -> LogComplex:
    out = LogComplex.one()
    for f in factors:
        out = out.mul(f)
    return out


# ---------------------------------------------------------------------------
# Fibonacci machinery
# ---------------------------------------------------------------------------


class FibCache:
    """Exact big-integer Fibonacci values ``F(1) = F(2) = 1``, extended on demand.

    Concurrent reads of already-cached values are safe; extension is
    single-owner.
    """

    def __init__(self, prefill: int = 64):
        self._values = [0, 1, 1]  # 1-indexed; slot 0 unused (F(0) = 0 kept for identities)
        self.ensure(prefill)

    def ensure(self, n: int) -> None:
        while len(self._values) <= n:
            self._values.append(self._values[-1] + self._values[-2])

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ParameterRangeError("Fibonacci index must be >= 0")
        self.ensure(n)
        return self._values[n]

    def prefix(self, n: int) -> list[int]:
        """``[F(0), F(1), ..., F(n)]`` as a list (index = subscript)."""
        self.ensure(n)
        return self._values[: n + 1]

    def _corrupt_for_testing(self, n: int, delta: int = 1) -> None:
        """Negative-control hook: damage a cached value so audits must catch it."""
        self.ensure(n)
        self._values[n] += delta


def fib(n: int, cache: FibCache | None = None) -> int:
    """F(n) with F(1) = F(2) = 1, computed exactly."""
    if n < 1:
        raise ParameterRangeError("fib is defined here for n >= 1")
    if cache is None:
        cache = FibCache(n)
    return cache(n)


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of an exhaustive exact identity check."""

    ok: bool
    checked: int
    first_failure: tuple | None = None
    detail: str = ""


def check_fib_identities(N: int, cache: FibCache | None = None) -> IdentityReport:
    """Verify two classical Fibonacci identities exactly for all indices <= N.

    * even-index sum: ``F(2n) = sum_{j=1..n} F(2j-1)`` for all ``2n <= N``;
    * Vajda: ``F(m+i)F(m+j) - F(m)F(m+i+j) = (-1)^m F(i)F(j)`` for all
      ``m, i, j >= 1`` with ``m + i + j <= N``.

    All arithmetic is exact big-integer; the report carries the first failing
    index combination, if any.  Passing a cache makes the scan audit that
    cache's values (a corrupted entry is reported as a failure).
    """
    if N < 3:
        raise ParameterRangeError("identity check needs N >= 3")
    if cache is None:
        cache = FibCache(N)
    cache.ensure(N)
    F = cache.prefix(N)
    checked = 0

    acc = 0
    for n in range(1, N // 2 + 1):
        acc += F[2 * n - 1]
        checked += 1
        if F[2 * n] != acc:
            return IdentityReport(False, checked, ("even-sum", n),
                                  "F(2n) != sum of odd-index terms")

    for m in range(1, N - 1):
        sign = 1 if m % 2 == 0 else -1
        Fm = F[m]
        for i in range(1, N - m):
            Fmi = F[m + i]
            for j in range(1, N - m - i + 1):
                lhs = Fmi * F[m + j] - Fm * F[m + i + j]
                if lhs != sign * F[i] * F[j]:
                    return IdentityReport(False, checked, ("vajda", m, i, j),
                                          "Vajda identity failed")
                checked += 1

    return IdentityReport(True, checked)


def fib_partial_sum_ok(N: int) -> bool:
    """Exact check of ``sum_{l=1..n} F(l) = F(n+2) - 1`` for all n <= N."""
    cache = FibCache(N + 2)
    F = cache.prefix(N + 2)
    acc = 0
    for n in range(1, N + 1):
        acc += F[n]
        if acc != F[n + 2] - 1:
            return False
    return True


# ---------------------------------------------------------------------------
# The exponent sequence a_n
# ---------------------------------------------------------------------------


class ASeq:
    """The integer sequence ``a_1 = 1``, ``a_n = n - sum_{j=1..n-1} a_{n-j} F(2j+1)``.

    The defining convolution is maintained incrementally: with
    ``P_n = sum_j a_{n-j} F(2j)`` and ``Q_n = sum_j a_{n-j} F(2j+1)``, the
    Fibonacci recurrence gives

        ``P_{n+1} = a_n + P_n + Q_n``,
        ``Q_{n+1} = 2 a_n + P_n + 2 Q_n``,

    so each a_n costs O(1) exact integer operations instead of an O(n)
    big-integer sum.  Every entry is cross-checked against the closed form
    ``a_n = 1 - n(n-1)/2`` at construction time.
    """

    def __init__(self, N: int):
        if N < 1:
            raise ParameterRangeError("ASeq needs N >= 1")
        vals = [0, 1]  # 1-indexed
        P, Q = 0, 0
        for n in range(1, N):
            an = vals[n]
            P, Q = an + Q + P, 2 * an + P + 2 * Q
            vals.append(n + 1 - Q)
        for n in range(1, N + 1):
            expected = 1 - n * (n - 1) // 2
            if vals[n] != expected:
                raise AssertionError(
                    f"a_{n} recursion value {vals[n]} != closed form {expected}")
        self._values = vals
        self.N = N

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise IndexError(f"a_n cached only for 1 <= n <= {self.N}")
        return self._values[n]

    def __len__(self) -> int:
        return self.N

    @staticmethod
    def closed_form(n: int) -> int:
        return 1 - n * (n - 1) // 2


def a_seq(N: int) -> ASeq:
    """Build the exponent sequence up to ``a_N`` (exact, closed-form checked)."""
    return ASeq(N)


def a_naive(N: int, cache: FibCache | None = None) -> list[int]:
    """Literal O(N^2) evaluation of the defining sum (independent oracle)."""
    if cache is None:
        cache = FibCache(2 * N + 1)
    F = cache.prefix(2 * N + 1)
    vals = [0, 1]
    for n in range(2, N + 1):
        s = sum(vals[n - j] * F[2 * j + 1] for j in range(1, n))
        vals.append(n - s)
    return vals
