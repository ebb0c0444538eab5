"""Exact rational interval arithmetic and certified root extraction.

Everything here works on pairs ``(lo, hi)`` of :class:`~fractions.Fraction`
with the contract that the true real value lies in ``[lo, hi]``.  Roots and
rational powers are bracketed with integer Newton iteration (``math.isqrt``
for square roots), so no binary floating point ever enters a result.

Comparison semantics used by all checkers:

* ``leq_with_slack(a, b, tol)`` passes iff ``lo(a) <= hi(b) + tol``.  A true
  inequality always passes (the bracket contains the true value); a false one
  fails once its margin exceeds the bracket widths plus ``tol``.
* ``eq_within(a, b, tol)`` compares midpoints, reporting the gap.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Tuple

Interval = Tuple[Fraction, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def exact(q: Fraction) -> Interval:
    return (q, q)


def mid(iv: Interval) -> Fraction:
    return (iv[0] + iv[1]) / 2


def width(iv: Interval) -> Fraction:
    return iv[1] - iv[0]


def is_exact(iv: Interval) -> bool:
    return iv[0] == iv[1]


def iadd(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def isub(a: Interval, b: Interval) -> Interval:
    return (a[0] - b[1], a[1] - b[0])


def ineg(a: Interval) -> Interval:
    return (-a[1], -a[0])


def imul(a: Interval, b: Interval) -> Interval:
    # general sign handling; most callers pass nonnegative intervals
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def iscale(a: Interval, c: Fraction) -> Interval:
    if c >= 0:
        return (a[0] * c, a[1] * c)
    return (a[1] * c, a[0] * c)


def idiv(a: Interval, b: Interval) -> Interval:
    if b[0] <= 0 <= b[1]:
        raise ZeroDivisionError("interval divisor straddles zero")
    quotients = (a[0] / b[0], a[0] / b[1], a[1] / b[0], a[1] / b[1])
    return (min(quotients), max(quotients))


def iabs(a: Interval) -> Interval:
    if a[0] >= 0:
        return a
    if a[1] <= 0:
        return (-a[1], -a[0])
    return (_ZERO, max(-a[0], a[1]))


def imax(a: Interval, b: Interval) -> Interval:
    return (max(a[0], b[0]), max(a[1], b[1]))


def ipow_int(a: Interval, k: int) -> Interval:
    if k < 0:
        raise ValueError("negative integer exponent not supported")
    if k == 0:
        return (_ONE, _ONE)
    if a[0] >= 0:
        return (a[0] ** k, a[1] ** k)
    lo, hi = a[0] ** k, a[1] ** k
    if k % 2 == 1:
        return (lo, hi)
    if a[1] <= 0:
        return (hi, lo)
    return (_ZERO, max(lo, hi))


def int_nth_root(x: int, n: int) -> int:
    """floor(x ** (1/n)) for x >= 0, n >= 1, by Newton iteration on integers."""
    if x < 0:
        raise ValueError("negative radicand")
    if n <= 0:
        raise ValueError("root order must be positive")
    if x in (0, 1) or n == 1:
        return x
    if n == 2:
        return isqrt(x)
    if x.bit_length() <= n:  # x < 2**n  =>  root is 1
        return 1
    r = 1 << -(-x.bit_length() // n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    return r


def _perfect_root(q: Fraction, n: int):
    """Exact n-th root of q >= 0 if q is a perfect n-th power, else None."""
    rn = int_nth_root(q.numerator, n)
    if rn ** n != q.numerator:
        return None
    rd = int_nth_root(q.denominator, n)
    if rd ** n != q.denominator:
        return None
    return Fraction(rn, rd)


def root_bracket(q: Fraction, n: int, bits: int) -> Interval:
    """Certified bracket of q ** (1/n) for q >= 0; exact for perfect powers."""
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0 or q == 1 or n == 1:
        return (q, q)
    ex = _perfect_root(q, n)
    if ex is not None:
        return (ex, ex)
    scale = 1 << bits
    num, den = q.numerator, q.denominator
    scaled = num * scale ** n
    t_lo = int_nth_root(scaled // den, n)
    t_hi = int_nth_root(-(-scaled // den), n) + 1
    return (Fraction(t_lo, scale), Fraction(t_hi, scale))


def sqrt_bracket(q: Fraction, bits: int) -> Interval:
    return root_bracket(q, 2, bits)


_SMALL_ROOT_ORDER = 64
_EXACT_POW_BIT_CAP = 1 << 16


def _pow_via_chain(q: Fraction, frac_exp: Fraction, bits: int) -> Interval:
    """Bracket q ** frac_exp, 0 < frac_exp < 1, via nested certified square
    roots along the binary expansion of the exponent.

    Works for any exponent denominator: the expansion is truncated at m bits
    and the residual factor q**delta, delta in [0, 2**-m), is absorbed by
    widening with the bracket of q**(2**-m).
    """
    work_bits = bits + 24
    levels = bits + 8
    target = Fraction(1, 1 << bits)
    while True:
        scaled = frac_exp * (1 << levels)
        k = int(scaled)
        residual_exact = scaled == k
        chain: list[Interval] = []
        cur = (q, q)
        for _ in range(levels):
            cur = (root_bracket(cur[0], 2, work_bits)[0],
                   root_bracket(cur[1], 2, work_bits)[1])
            chain.append(cur)
        prod: Interval = (_ONE, _ONE)
        for i in range(levels):
            if (k >> (levels - 1 - i)) & 1:
                prod = imul(prod, chain[i])
        if not residual_exact:
            last = chain[-1]
            prod = imul(prod, (min(_ONE, last[0]), max(_ONE, last[1])))
        if width(prod) <= target:
            return prod
        work_bits += 32
        levels += 16


def pow_bracket(q: Fraction, r: Fraction, bits: int) -> Interval:
    """Certified bracket of q ** r for q >= 0, r >= 0; exact when detectable."""
    if q < 0:
        raise ValueError("negative base")
    if r < 0:
        raise ValueError("negative exponent not supported")
    if r == 0:
        return (_ONE, _ONE)
    if q == 0 or q == 1:
        return (q, q)
    int_part, frac_num = divmod(r.numerator, r.denominator)
    base = q ** int_part
    if frac_num == 0:
        return (base, base)
    eff_bits = bits
    if base > 1:
        # the exact integer-power factor magnifies the fractional bracket
        eff_bits += max(0, base.numerator.bit_length()
                        - base.denominator.bit_length()) + 2
    frac_exp = Fraction(frac_num, r.denominator)
    u, v = frac_exp.numerator, frac_exp.denominator
    if v <= _SMALL_ROOT_ORDER:
        size = (q.numerator.bit_length() + q.denominator.bit_length()) * u
        if size <= _EXACT_POW_BIT_CAP:
            iv = root_bracket(q ** u, v, eff_bits + 4)
            return iscale(iv, base) if base != 1 else iv
    iv = _pow_via_chain(q, frac_exp, eff_bits + 2)
    return iscale(iv, base) if base != 1 else iv


def ipow_frac(a: Interval, r: Fraction, bits: int) -> Interval:
    """Bracket of x ** r over x in a, a nonnegative, r >= 0 (monotone)."""
    if a[0] < 0:
        raise ValueError("interval must be nonnegative")
    return (pow_bracket(a[0], r, bits)[0], pow_bracket(a[1], r, bits)[1])


def leq_with_slack(lhs: Interval, rhs: Interval, tol: Fraction) -> Tuple[bool, Fraction]:
    """Toleranced <= on intervals; slack is hi(rhs) - lo(lhs) (>= -tol passes)."""
    slack = rhs[1] - lhs[0]
    return (slack >= -tol, slack)


def eq_within(lhs: Interval, rhs: Interval, tol: Fraction) -> Tuple[bool, Fraction]:
    """Midpoint equality within tol; returns (verdict, |gap|)."""
    gap = abs(mid(lhs) - mid(rhs))
    return (gap <= tol, gap)
