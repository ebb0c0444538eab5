"""The concrete scalar algebra: d-tuples of exact rationals.

Every scalar of the theory lives here.  Arithmetic is pointwise, the lattice
order is componentwise, and the multiplicative unit is the all-ones tuple.
All values are immutable and every operation is pure.

Irrational values (p-th roots) are carried by :class:`ApproxReal` with a
certified absolute error bound; the ring/lattice layer itself stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from . import _kernel as _k
from . import certified
from .certified import Interval

RationalLike = Union[Fraction, int, str]


class DimensionMismatch(ValueError):
    """Operands live in algebras of different dimension."""


class ZeroDivisor(ZeroDivisionError):
    """Reciprocal of an element with a zero coordinate."""


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class LElement:
    """An element of the d-dimensional rational product algebra.

    Stored as parallel tuples of reduced numerators and positive
    denominators, the form the kernel backends operate on directly.
    """

    __slots__ = ("nums", "dens")

    def __init__(self, coords: Iterable[RationalLike]):
        nums = []
        dens = []
        for c in coords:
            q = as_rational(c)
            nums.append(q.numerator)
            dens.append(q.denominator)
        if not nums:
            raise ValueError("LElement needs at least one coordinate")
        self.nums = tuple(nums)
        self.dens = tuple(dens)

    @classmethod
    def _raw(cls, nums: Tuple[int, ...], dens: Tuple[int, ...]) -> "LElement":
        el = object.__new__(cls)
        el.nums = nums
        el.dens = dens
        return el

    @classmethod
    def unit(cls, d: int) -> "LElement":
        return cls._raw((1,) * d, (1,) * d)

    @classmethod
    def zero(cls, d: int) -> "LElement":
        return cls._raw((0,) * d, (1,) * d)

    @classmethod
    def constant(cls, q: RationalLike, d: int) -> "LElement":
        q = as_rational(q)
        return cls._raw((q.numerator,) * d, (q.denominator,) * d)

    @property
    def dim(self) -> int:
        return len(self.nums)

    @property
    def coords(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(n, d) for n, d in zip(self.nums, self.dens))

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(self.nums[i], self.dens[i])

    def _check(self, other: "LElement") -> None:
        if len(self.nums) != len(other.nums):
            raise DimensionMismatch(
                f"dimension {len(self.nums)} vs {len(other.nums)}")

    def __add__(self, other: "LElement") -> "LElement":
        self._check(other)
        return LElement._raw(*_k.vadd(self.nums, self.dens, other.nums, other.dens))

    def __sub__(self, other: "LElement") -> "LElement":
        self._check(other)
        return LElement._raw(*_k.vsub(self.nums, self.dens, other.nums, other.dens))

    def __mul__(self, other: "LElement") -> "LElement":
        self._check(other)
        return LElement._raw(*_k.vmul(self.nums, self.dens, other.nums, other.dens))

    def __neg__(self) -> "LElement":
        return LElement._raw(*_k.vneg(self.nums, self.dens))

    def __abs__(self) -> "LElement":
        return LElement._raw(*_k.vabs(self.nums, self.dens))

    def __le__(self, other: "LElement") -> bool:
        # componentwise partial order: a <= b and b <= a may both be False
        self._check(other)
        return _k.vleq(self.nums, self.dens, other.nums, other.dens)

    def __ge__(self, other: "LElement") -> bool:
        return other.__le__(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LElement):
            return NotImplemented
        return self.nums == other.nums and self.dens == other.dens

    def __hash__(self) -> int:
        return hash((self.nums, self.dens))

    def __repr__(self) -> str:
        return "LElement(%s)" % ", ".join(str(q) for q in self.coords)

    def scale(self, c: RationalLike) -> "LElement":
        q = as_rational(c)
        return LElement._raw(*_k.vscale(self.nums, self.dens, q.numerator, q.denominator))

    def is_zero(self) -> bool:
        return all(n == 0 for n in self.nums)

    def is_nonnegative(self) -> bool:
        return all(n >= 0 for n in self.nums)

    def is_strictly_positive(self) -> bool:
        return all(n > 0 for n in self.nums)

    def intervals(self) -> List[Interval]:
        return [certified.exact(q) for q in self.coords]


def add(a: LElement, b: LElement) -> LElement:
    return a + b


def sub(a: LElement, b: LElement) -> LElement:
    return a - b


def mul(a: LElement, b: LElement) -> LElement:
    return a * b


def neg(a: LElement) -> LElement:
    return -a


def abs_(a: LElement) -> LElement:
    return abs(a)


def sup(a: LElement, b: LElement) -> LElement:
    a._check(b)
    return LElement._raw(*_k.vsup(a.nums, a.dens, b.nums, b.dens))


def inf(a: LElement, b: LElement) -> LElement:
    a._check(b)
    return LElement._raw(*_k.vinf(a.nums, a.dens, b.nums, b.dens))


def leq(a: LElement, b: LElement) -> bool:
    return a <= b


def sgn(a: LElement) -> LElement:
    nums = tuple((n > 0) - (n < 0) for n in a.nums)
    return LElement._raw(nums, (1,) * len(nums))


def pow_int(a: LElement, n: int) -> LElement:
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    return LElement._raw(*_k.vpow(a.nums, a.dens, n))


def recip(a: LElement) -> LElement:
    try:
        return LElement._raw(*_k.vrecip(a.nums, a.dens))
    except ZeroDivisionError as exc:
        raise ZeroDivisor(str(exc)) from None


def axpy(a: LElement, c: RationalLike, b: LElement) -> LElement:
    """a + c*b for a rational scalar c (fused hot path for integrals)."""
    a._check(b)
    q = as_rational(c)
    return LElement._raw(*_k.vaxpy(a.nums, a.dens, q.numerator, q.denominator,
                                   b.nums, b.dens))


@dataclass(frozen=True)
class ToleranceConfig:
    """Error budget: root brackets are tightened to root_tol, comparisons
    involving approximations use compare_tol."""

    root_tol: Fraction = Fraction(1, 2 ** 40)
    compare_tol: Fraction = Fraction(1, 2 ** 30)

    def __post_init__(self):
        if not (0 < self.root_tol < self.compare_tol):
            raise ValueError("need 0 < root_tol < compare_tol")

    @property
    def root_bits(self) -> int:
        return max(2, (self.root_tol.denominator - 1).bit_length())


DEFAULT_TOLERANCES = ToleranceConfig()


@dataclass(frozen=True)
class ApproxReal:
    """A real known to lie within value +- abs_error_bound (both rational)."""

    value: Fraction
    abs_error_bound: Fraction

    @classmethod
    def exact(cls, q: RationalLike) -> "ApproxReal":
        return cls(as_rational(q), Fraction(0))

    @classmethod
    def from_interval(cls, iv: Interval) -> "ApproxReal":
        lo, hi = iv
        return cls((lo + hi) / 2, (hi - lo) / 2)

    @property
    def lo(self) -> Fraction:
        return self.value - self.abs_error_bound

    @property
    def hi(self) -> Fraction:
        return self.value + self.abs_error_bound

    @property
    def is_exact(self) -> bool:
        return self.abs_error_bound == 0

    def interval(self) -> Interval:
        return (self.lo, self.hi)

    def __repr__(self) -> str:
        if self.is_exact:
            return f"ApproxReal({self.value})"
        return f"ApproxReal({self.value} +- {self.abs_error_bound})"


def root(a: LElement, r: RationalLike,
         cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> Tuple[ApproxReal, ...]:
    """Componentwise a**r for a >= 0 and rational r > 0, bracketed to
    root_tol; coordinates that are perfect powers come back exact."""
    if not a.is_nonnegative():
        raise ValueError("root requires nonnegative coordinates")
    rr = as_rational(r)
    if rr <= 0:
        raise ValueError("exponent must be positive")
    bits = cfg.root_bits + 2
    out = []
    for q in a.coords:
        iv = certified.pow_bracket(q, rr, bits)
        out.append(ApproxReal.from_interval(iv))
    return tuple(out)


Envelope = Sequence[Tuple[LElement, int]]


@dataclass
class ConvergenceCertificate:
    """Outcome of an envelope-certified convergence or Cauchy check."""

    envelope: Tuple[Tuple[LElement, int], ...]
    passed: bool
    first_violation: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.passed


def _validate_envelope(envelope: Envelope, d: int) -> None:
    if not envelope:
        raise ValueError("envelope must be nonempty")
    prev = None
    for eps, idx in envelope:
        if eps.dim != d:
            raise DimensionMismatch("envelope epsilon has wrong dimension")
        if not eps.is_nonnegative():
            raise ValueError("envelope epsilons must be nonnegative")
        if idx < 0:
            raise ValueError("index thresholds must be nonnegative")
        if prev is not None and not (eps <= prev):
            raise ValueError("envelope epsilons must be componentwise nonincreasing")
        prev = eps


def _first_exceeding(diff: LElement, eps: LElement) -> Optional[int]:
    for j in range(diff.dim):
        if diff.nums[j] * eps.dens[j] > eps.nums[j] * diff.dens[j]:
            return j
    return None


def check_order_convergence(seq: Sequence[LElement], limit: LElement,
                            envelope: Envelope) -> ConvergenceCertificate:
    """Pass iff |seq[n] - limit| <= eps for every n >= threshold, for every
    (eps, threshold) in the envelope.  Thresholds index the supplied list."""
    if not seq:
        raise ValueError("empty sequence")
    d = limit.dim
    _validate_envelope(envelope, d)
    env = tuple((eps, idx) for eps, idx in envelope)
    for eps, idx in env:
        for n in range(idx, len(seq)):
            j = _first_exceeding(abs(seq[n] - limit), eps)
            if j is not None:
                return ConvergenceCertificate(env, False, (n, j))
    return ConvergenceCertificate(env, True)


def check_cauchy(seq: Sequence[LElement],
                 envelope: Envelope) -> ConvergenceCertificate:
    """As check_order_convergence, over all pairs n, m >= threshold; a
    violation reports the larger index of the offending pair."""
    if not seq:
        raise ValueError("empty sequence")
    d = seq[0].dim
    _validate_envelope(envelope, d)
    env = tuple((eps, idx) for eps, idx in envelope)
    for eps, idx in env:
        for n in range(idx, len(seq)):
            for m in range(n + 1, len(seq)):
                j = _first_exceeding(abs(seq[n] - seq[m]), eps)
                if j is not None:
                    return ConvergenceCertificate(env, False, (m, j))
    return ConvergenceCertificate(env, True)
