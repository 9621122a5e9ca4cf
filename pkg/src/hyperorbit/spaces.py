"""Truncated sequence/coefficient spaces, their norms, and the linear building blocks.

A :class:`SeqVector` is a truncated element of one of five concrete spaces
(``l1``, ``lp``, ``c0``, the seminormed sequence space ``cn``, and entire
functions ``hc`` stored by monomial coefficients, 1-indexed: slot ``i`` holds
the coefficient of ``z**(i-1)``).  Coordinates live in log-polar form.

Log magnitudes are stored as an unevaluated double-double pair ``(hi, lo)``.
This is what makes the weighted-shift pair exactly invertible: a forward shift
divides by a weight (subtracts its log), a backward shift multiplies it back,
and with a compensated representation the round trip returns the original
coordinate bit for bit, for any weights.  Plain doubles lose the round trip
almost always.

Operations that shorten a vector (backward shifts) simply return a shorter
vector; orbit engines watch for the window running out instead of silently
zero-padding, because every identity checked downstream is exact and padding
would corrupt it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import LOG_ZERO, LogComplex, normalize_phase
from .errors import DegreeCapError, ParameterRangeError, WrongSpaceError

TRANSLATE_DEGREE_CAP = 500

_KINDS = ("l1", "lp", "c0", "cn", "hc")


@dataclass(frozen=True, slots=True)
class SpaceTag:
    """Identifies which space a vector belongs to (plus ``p`` or seminorm index)."""

    kind: str
    param: float | int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterRangeError(f"unknown space kind {self.kind!r}")
        if self.kind == "lp":
            if self.param is None or self.param < 1:
                raise ParameterRangeError("lp needs p >= 1")
        elif self.kind in ("cn", "hc"):
            if self.param is None or int(self.param) < 1:
                raise ParameterRangeError(f"{self.kind} needs seminorm index k >= 1")

    @staticmethod
    def l1() -> "SpaceTag":
        return SpaceTag("l1")

    @staticmethod
    def lp(p: float) -> "SpaceTag":
        return SpaceTag("lp", p)

    @staticmethod
    def c0() -> "SpaceTag":
        return SpaceTag("c0")

    @staticmethod
    def cn(k: int) -> "SpaceTag":
        return SpaceTag("cn", int(k))

    @staticmethod
    def hc(k: int) -> "SpaceTag":
        return SpaceTag("hc", int(k))


# ---------------------------------------------------------------------------
# double-double helpers (vectorized)
# ---------------------------------------------------------------------------


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _dd_add(hi, lo, w):
    """Compensated ``(hi + lo) + w``; exact-zero entries (hi = -inf) pass through."""
    mask = np.isneginf(hi)
    with np.errstate(invalid="ignore"):
        s, e = _two_sum(hi, w)
        lo2 = lo + e
        s2 = s + lo2
        lo3 = lo2 - (s2 - s)
    if mask.any():
        s2 = np.where(mask, LOG_ZERO, s2)
        lo3 = np.where(mask, 0.0, lo3)
    return s2, lo3


def _norm_phases(p):
    inside = (p > -np.pi) & (p <= np.pi)
    q = np.mod(p + np.pi, 2.0 * np.pi) - np.pi
    q = np.where(q <= -np.pi, np.pi, q)
    return np.where(inside, p, q)  # already-normalized phases pass through bitwise


def _lse(a: np.ndarray) -> float:
    """log(sum(exp(a))) with empty/all-zero handled."""
    if a.size == 0:
        return LOG_ZERO
    m = float(np.max(a))
    if m == LOG_ZERO:
        return LOG_ZERO
    return m + math.log(float(np.sum(np.exp(a - m))))


# ---------------------------------------------------------------------------
# weight sequences
# ---------------------------------------------------------------------------


class WeightSeq:
    """A positive weight sequence with an exact generator descriptor.

    Built-in generators: ``ones`` (w_i = 1), ``inv_squares`` (w_i = 1/i**2),
    ``linear`` (w_i = i).  Log weights and their cumulative sums are cached and
    grow on demand; reads of cached entries are safe concurrently.
    """

    def __init__(self, kind: str, values=None):
        if kind not in ("ones", "inv_squares", "linear", "custom"):
            raise ParameterRangeError(f"unknown weight generator {kind!r}")
        self.kind = kind
        if kind == "custom":
            vals = np.asarray(values, dtype=float)
            if vals.ndim != 1 or np.any(vals <= 0):
                raise ParameterRangeError("custom weights must be positive reals")
            self._logs = np.log(vals)
        else:
            self._logs = np.empty(0)
        self._cum = None

    @staticmethod
    def ones() -> "WeightSeq":
        return WeightSeq("ones")

    @staticmethod
    def inv_squares() -> "WeightSeq":
        return WeightSeq("inv_squares")

    @staticmethod
    def linear() -> "WeightSeq":
        return WeightSeq("linear")

    def _ensure(self, n: int) -> None:
        if self._logs.size >= n:
            return
        if self.kind == "custom":
            raise ParameterRangeError(
                f"custom weight sequence has only {self._logs.size} entries, {n} needed")
        i = np.arange(1, n + 1, dtype=float)
        if self.kind == "ones":
            self._logs = np.zeros(n)
        elif self.kind == "inv_squares":
            self._logs = -2.0 * np.log(i)
        else:  # linear
            self._logs = np.log(i)
        self._cum = None

    def logs(self, n: int) -> np.ndarray:
        """Log weights ``log w_1 .. log w_n``."""
        self._ensure(n)
        return self._logs[:n]

    def cum(self, n: int) -> np.ndarray:
        """Cumulative sums ``[0, log w_1, log w_1 + log w_2, ...]`` (length n+1)."""
        self._ensure(n)
        if self._cum is None or self._cum.size < n + 1:
            self._cum = np.concatenate(([0.0], np.cumsum(self._logs)))
        return self._cum[: n + 1]

    def log_at(self, i: int) -> float:
        """``log w_i`` (1-indexed)."""
        return float(self.logs(i)[i - 1])

    def value_at(self, i: int) -> float:
        return math.exp(self.log_at(i))


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------


class SeqVector:
    """Truncated vector with log-polar coordinates (1-indexed externally)."""

    __slots__ = ("space", "hi", "lo", "phase")

    def __init__(self, space: SpaceTag, hi, lo, phase):
        self.space = space
        self.hi = np.asarray(hi, dtype=float)
        self.lo = np.asarray(lo, dtype=float)
        self.phase = np.asarray(phase, dtype=float)
        zero = np.isneginf(self.hi)
        if zero.any():  # canonical zero: no lo part, phase 0
            self.lo = np.where(zero, 0.0, self.lo)
            self.phase = np.where(zero, 0.0, self.phase)
        for a in (self.hi, self.lo, self.phase):
            a.flags.writeable = False

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeros(space: SpaceTag, n: int) -> "SeqVector":
        return SeqVector(space, np.full(n, LOG_ZERO), np.zeros(n), np.zeros(n))

    @staticmethod
    def basis(space: SpaceTag, n: int, i: int) -> "SeqVector":
        """The i-th canonical basis vector (1-indexed) in a length-n window."""
        hi = np.full(n, LOG_ZERO)
        hi[i - 1] = 0.0
        return SeqVector(space, hi, np.zeros(n), np.zeros(n))

    @staticmethod
    def from_complex(space: SpaceTag, values) -> "SeqVector":
        vals = [complex(v) for v in values]
        hi = np.array([LOG_ZERO if v == 0 else math.log(abs(v)) for v in vals])
        ph = np.array([0.0 if v == 0 else normalize_phase(math.atan2(v.imag, v.real))
                       for v in vals])
        return SeqVector(space, hi, np.zeros(len(vals)), ph)

    @staticmethod
    def from_logc(space: SpaceTag, coords) -> "SeqVector":
        coords = list(coords)
        hi = np.array([c.log_mag for c in coords])
        ph = np.array([c.phase for c in coords])
        return SeqVector(space, hi, np.zeros(len(coords)), ph)

    # -- basic access ------------------------------------------------------

    def __len__(self) -> int:
        return self.hi.size

    @property
    def is_exhausted(self) -> bool:
        """True when a shift chain has consumed the whole truncation window."""
        return self.hi.size == 0

    @property
    def lm(self) -> np.ndarray:
        """Collapsed log magnitudes (hi + lo) as plain doubles."""
        with np.errstate(invalid="ignore"):
            out = self.hi + self.lo
        return np.where(np.isneginf(self.hi), LOG_ZERO, out)

    def coord(self, i: int) -> LogComplex:
        """Coordinate ``i`` (1-indexed) as a scalar."""
        if not 1 <= i <= len(self):
            raise IndexError(f"coordinate {i} outside window of length {len(self)}")
        if np.isneginf(self.hi[i - 1]):
            return LogComplex.zero()
        return LogComplex(float(self.hi[i - 1] + self.lo[i - 1]),
                          float(self.phase[i - 1]))

    def to_complex(self) -> np.ndarray:
        """Ordinary complex coordinates; magnitudes beyond float range overflow."""
        with np.errstate(over="ignore"):
            r = np.exp(self.lm)
        return r * np.exp(1j * self.phase)

    def retag(self, space: SpaceTag) -> "SeqVector":
        return SeqVector(space, self.hi, self.lo, self.phase)

    def truncate(self, n: int) -> "SeqVector":
        return SeqVector(self.space, self.hi[:n], self.lo[:n], self.phase[:n])

    # -- algebra -----------------------------------------------------------

    def scale(self, s: LogComplex) -> "SeqVector":
        if s.is_zero:
            return SeqVector.zeros(self.space, len(self))
        hi, lo = _dd_add(self.hi, self.lo, s.log_mag)
        ph = _norm_phases(self.phase + s.phase)
        ph = np.where(np.isneginf(hi), 0.0, ph)
        return SeqVector(self.space, hi, lo, ph)

    def neg(self) -> "SeqVector":
        # direct +-pi flip stays normalized and avoids a wrap round trip
        ph = np.where(self.phase > 0, self.phase - np.pi, self.phase + np.pi)
        ph = np.where(np.isneginf(self.hi), 0.0, ph)
        return SeqVector(self.space, self.hi, self.lo, ph)

    def _padded(self, n: int) -> "SeqVector":
        if len(self) >= n:
            return self
        pad = n - len(self)
        return SeqVector(
            self.space,
            np.concatenate([self.hi, np.full(pad, LOG_ZERO)]),
            np.concatenate([self.lo, np.zeros(pad)]),
            np.concatenate([self.phase, np.zeros(pad)]),
        )

    def add(self, other: "SeqVector") -> "SeqVector":
        """Coordinate-wise complex sum (shorter operand is zero-padded).

        Where one operand is exactly zero the other's coordinate is passed
        through bit for bit; a relative cancellation below 1e-15 snaps to
        exact zero.
        """
        n = max(len(self), len(other))
        a, b = self._padded(n), other._padded(n)
        la, lb = a.lm, b.lm
        za, zb = np.isneginf(la), np.isneginf(lb)
        a_big = la >= lb
        base_hi = np.where(a_big, a.hi, b.hi)
        base_lo = np.where(a_big, a.lo, b.lo)
        base_ph = np.where(a_big, a.phase, b.phase)
        with np.errstate(invalid="ignore", over="ignore"):
            dlog = np.where(a_big, lb - la, la - lb)
            dph = np.where(a_big, b.phase - a.phase, a.phase - b.phase)
            dlog = np.where(za | zb, LOG_ZERO, dlog)
            s = 1.0 + np.exp(dlog) * np.exp(1j * dph)
            smag = np.abs(s)
        cancel = smag < 1e-15
        with np.errstate(divide="ignore"):
            step = np.where(cancel, LOG_ZERO, np.log(np.maximum(smag, 1e-300)))
        hi, lo = _dd_add(base_hi, base_lo, step)
        hi = np.where(cancel, LOG_ZERO, hi)
        lo = np.where(cancel, 0.0, lo)
        ph = _norm_phases(base_ph + np.angle(s))
        ph = np.where(np.isneginf(hi), 0.0, ph)
        out_hi = np.where(za, b.hi, np.where(zb, a.hi, hi))
        out_lo = np.where(za, b.lo, np.where(zb, a.lo, lo))
        out_ph = np.where(za, b.phase, np.where(zb, a.phase, ph))
        return SeqVector(self.space, out_hi, out_lo, out_ph)

    def sub(self, other: "SeqVector") -> "SeqVector":
        return self.add(other.neg())


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def _hc_weights(n: int, k: int) -> np.ndarray:
    j = np.arange(n, dtype=float)
    return j * math.log(k) - np.array([math.lgamma(x + 1.0) for x in j])


_HC_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _hc_weight_row(n: int, k: int) -> np.ndarray:
    key = (n, k)
    row = _HC_CACHE.get(key)
    if row is None:
        row = _hc_weights(n, k)
        row.flags.writeable = False
        _HC_CACHE[key] = row
    return row


def norm(v: SeqVector) -> float:
    """Norm/seminorm of ``v`` per its tag, returned as a log magnitude.

    ``l1``: sum of moduli.  ``lp``: p-th root of the p-sum.  ``c0``: sup.
    ``cn(k)``: max of the first k moduli.  ``hc(k)``: sup over j of
    ``|a_j| * k**j / j!`` on monomial coefficients ``a_j``.
    """
    lm = v.lm
    kind = v.space.kind
    if kind == "l1":
        return _lse(lm)
    if kind == "lp":
        p = float(v.space.param)
        return _lse(p * lm) / p
    if kind == "c0":
        return float(np.max(lm)) if lm.size else LOG_ZERO
    if kind == "cn":
        k = int(v.space.param)
        head = lm[: k]
        return float(np.max(head)) if head.size else LOG_ZERO
    k = int(v.space.param)
    if lm.size == 0:
        return LOG_ZERO
    return float(np.max(lm + _hc_weight_row(lm.size, k)))


# ---------------------------------------------------------------------------
# shifts and coefficient operators
# ---------------------------------------------------------------------------


def backward_shift(v: SeqVector, w: WeightSeq) -> SeqVector:
    """``[B_w v]_i = w_i * v_{i+1}``; output one coordinate shorter.

    On a length-1 window the result is the empty vector, which iteration
    engines treat as window exhaustion.
    """
    n = len(v)
    if n == 0:
        return v
    logs = w.logs(max(n - 1, 0))
    hi, lo = _dd_add(v.hi[1:], v.lo[1:], logs)
    ph = np.where(np.isneginf(hi), 0.0, v.phase[1:])
    return SeqVector(v.space, hi, lo, ph)


def forward_shift(v: SeqVector, w: WeightSeq) -> SeqVector:
    """Formal right inverse of the weighted backward shift.

    ``[S_w v]_1 = 0`` exactly and ``[S_w v]_{i+1} = v_i / w_i``; composing
    ``backward_shift(forward_shift(v))`` returns ``v`` bit for bit.
    """
    n = len(v)
    logs = w.logs(n)
    hi, lo = _dd_add(v.hi, v.lo, -logs)
    ph = np.where(np.isneginf(hi), 0.0, v.phase)
    return SeqVector(
        v.space,
        np.concatenate(([LOG_ZERO], hi)),
        np.concatenate(([0.0], lo)),
        np.concatenate(([0.0], ph)),
    )


def shift_pow(v: SeqVector, w: WeightSeq, k: int) -> SeqVector:
    """``B_w**k`` in one pass via cumulative log-weight sums.

    Coordinate i of the result is ``(w_i ... w_{i+k-1}) * v_{i+k}``.  Uses the
    same cumulative sums as :func:`forward_pow`, so the k-fold round trip is
    exact as well.
    """
    if k == 0:
        return v
    n = len(v)
    if k >= n:
        return SeqVector.zeros(v.space, 0)
    cum = w.cum(n - 1)
    delta = cum[k: n] - cum[0: n - k]
    hi, lo = _dd_add(v.hi[k:], v.lo[k:], delta)
    ph = np.where(np.isneginf(hi), 0.0, v.phase[k:])
    return SeqVector(v.space, hi, lo, ph)


def forward_pow(v: SeqVector, w: WeightSeq, k: int) -> SeqVector:
    """``S_w**k`` in one pass; output has k leading exact zeros."""
    if k == 0:
        return v
    n = len(v)
    cum = w.cum(n + k)
    delta = cum[k: n + k] - cum[0: n]
    hi, lo = _dd_add(v.hi, v.lo, -delta)
    ph = np.where(np.isneginf(hi), 0.0, v.phase)
    return SeqVector(
        v.space,
        np.concatenate([np.full(k, LOG_ZERO), hi]),
        np.concatenate([np.zeros(k), lo]),
        np.concatenate([np.zeros(k), ph]),
    )


_LINEAR = WeightSeq.linear()


def derivative(v: SeqVector) -> SeqVector:
    """Monomial-coefficient derivative; a backward shift with weights w_j = j."""
    if v.space.kind != "hc":
        raise WrongSpaceError("derivative is defined on hc-tagged vectors")
    return backward_shift(v, _LINEAR)


def derivative_pow(v: SeqVector, k: int) -> SeqVector:
    if v.space.kind != "hc":
        raise WrongSpaceError("derivative is defined on hc-tagged vectors")
    return shift_pow(v, _LINEAR, k)


def integral(v: SeqVector) -> SeqVector:
    """Antiderivative with zero constant term; the right inverse of derivative."""
    if v.space.kind != "hc":
        raise WrongSpaceError("integral is defined on hc-tagged vectors")
    return forward_shift(v, _LINEAR)


def derivative_at_zero(v: SeqVector, k: int) -> LogComplex:
    """``f^(k)(0) = k! * a_k`` from monomial storage (slot k+1)."""
    if k + 1 > len(v):
        return LogComplex.zero()
    c = v.coord(k + 1)
    if c.is_zero:
        return c
    return LogComplex(c.log_mag + math.lgamma(k + 1.0), c.phase)


_BINOM_CACHE: dict[int, np.ndarray] = {}


def _log_binom_matrix(n: int) -> np.ndarray:
    """``log C(l, j)`` for 0 <= j <= l < n, -inf elsewhere (big-int exact, then logged)."""
    m = _BINOM_CACHE.get(n)
    if m is None:
        m = np.full((n, n), LOG_ZERO)
        for l in range(n):
            row = 1
            m[l, 0] = 0.0
            for j in range(1, l + 1):
                row = row * (l - j + 1) // j
                m[l, j] = math.log(row)
        m.flags.writeable = False
        _BINOM_CACHE[n] = m
    return m


def translate_by(v: SeqVector, steps: int = 1) -> SeqVector:
    """Monomial coefficients of ``f(z + steps)``: ``b_j = sum_l C(l,j) steps**(l-j) a_l``.

    Exact for polynomial inputs up to rounding; degree capped at
    ``TRANSLATE_DEGREE_CAP``.
    """
    if v.space.kind != "hc":
        raise WrongSpaceError("translate is defined on hc-tagged vectors")
    n = len(v)
    if n == 0 or steps == 0:
        return v
    if n > TRANSLATE_DEGREE_CAP:
        raise DegreeCapError(
            f"translate supports degree < {TRANSLATE_DEGREE_CAP}, got window {n}")
    base = _log_binom_matrix(n)  # [l, j]
    lm = v.lm
    phases = np.broadcast_to(v.phase, (n, n))
    with np.errstate(invalid="ignore"):
        M = base.T + lm[np.newaxis, :]  # row j, column l
        if steps != 1:
            l_idx = np.arange(n, dtype=float)
            off = l_idx[np.newaxis, :] - np.arange(n, dtype=float)[:, np.newaxis]
            off = np.where(off >= 0, off, 0.0)
            M = M + off * math.log(abs(steps))
            if steps < 0:  # odd powers of a negative shift flip sign
                phases = phases + np.pi * np.mod(off, 2.0)
        M = np.where(np.isneginf(base.T), LOG_ZERO, M)
    rowmax = np.max(M, axis=1)
    dead = np.isneginf(rowmax)
    with np.errstate(invalid="ignore"):
        scaled = np.exp(M - np.where(dead, 0.0, rowmax)[:, np.newaxis])
        scaled = np.where(np.isneginf(M), 0.0, scaled)
        s = np.sum(scaled * np.exp(1j * phases), axis=1)
    smag = np.abs(s)
    zero = dead | (smag < 1e-15)
    with np.errstate(divide="ignore"):
        hi = np.where(zero, LOG_ZERO, rowmax + np.log(np.maximum(smag, 1e-300)))
    ph = np.where(zero, 0.0, _norm_phases(np.angle(s)))
    return SeqVector(v.space, hi, np.zeros(n), ph)


def translate(v: SeqVector) -> SeqVector:
    """Coefficients of ``f(z + 1)``."""
    return translate_by(v, 1)


def eval_functional(v: SeqVector) -> LogComplex:
    """First coordinate: ``e_1'`` on sequences, evaluation at 0 on coefficients."""
    if len(v) == 0:
        return LogComplex.zero()
    return v.coord(1)


def eval_at_integer(v: SeqVector, point: int) -> LogComplex:
    """``f(point)`` for an hc vector: first coefficient of ``f(z + point)``."""
    if point == 0:
        return eval_functional(v)
    return eval_functional(translate_by(v, point))


# ---------------------------------------------------------------------------
# JSON vector format
# ---------------------------------------------------------------------------

LOG_FORM_THRESHOLD = 700.0


def vector_to_json(v: SeqVector) -> dict:
    """Serialize in the interchange format (1-indexed coordinate order).

    Coordinates with ``|log magnitude| <= 700`` are written as ``[re, im]``;
    anything larger keeps the log-polar form ``{"log": L, "phase": p}``.
    """
    coords = []
    lm = v.lm
    for i in range(len(v)):
        if np.isneginf(lm[i]):
            coords.append([0.0, 0.0])
        elif abs(lm[i]) <= LOG_FORM_THRESHOLD:
            z = LogComplex(float(lm[i]), float(v.phase[i])).to_complex()
            coords.append([z.real, z.imag])
        else:
            coords.append({"log": float(lm[i]), "phase": float(v.phase[i])})
    obj: dict = {"space": v.space.kind, "coords": coords}
    if v.space.param is not None:
        obj["param"] = v.space.param
    return obj


def _coord_from_json(entry) -> LogComplex:
    if isinstance(entry, dict):
        if "log" in entry:
            return LogComplex.from_polar(float(entry["log"]),
                                         float(entry.get("phase", 0.0)))
        if "num" in entry:
            q = Fraction(int(entry["num"]), int(entry["den"]))
            if q == 0:
                return LogComplex.zero()
            sign_phase = 0.0 if q > 0 else math.pi
            return LogComplex(
                math.log(abs(q.numerator)) - math.log(q.denominator), sign_phase)
        raise ParameterRangeError(f"unrecognized coordinate object {entry!r}")
    re, im = float(entry[0]), float(entry[1])
    return LogComplex.from_complex(complex(re, im))


def vector_from_json(obj: dict) -> SeqVector:
    kind = str(obj["space"]).lower()
    param = obj.get("param")
    tag = SpaceTag(kind, param)
    coords = [_coord_from_json(e) for e in obj["coords"]]
    return SeqVector.from_logc(tag, coords)


def write_vector(path, v: SeqVector) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(vector_to_json(v), fh)


def read_vector(path) -> SeqVector:
    with open(path, encoding="utf-8") as fh:
        return vector_from_json(json.load(fh))
