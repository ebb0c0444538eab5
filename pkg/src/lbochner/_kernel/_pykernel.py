"""Pure-Python rational vector kernel.

Reference implementation of the hot inner loops; the compiled twin in
``_ckernel.pyx`` must match it value-for-value.  Vectors are passed as two
parallel tuples of ints ``(nums, dens)`` with every coordinate reduced and
every denominator positive.
"""

from math import gcd


def vadd(an, ad, bn, bd):
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        num = an[i] * bd[i] + bn[i] * ad[i]
        den = ad[i] * bd[i]
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vsub(an, ad, bn, bd):
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        num = an[i] * bd[i] - bn[i] * ad[i]
        den = ad[i] * bd[i]
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vmul(an, ad, bn, bd):
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        num = an[i] * bn[i]
        den = ad[i] * bd[i]
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vneg(an, ad):
    return tuple(-n for n in an), ad


def vabs(an, ad):
    return tuple(-n if n < 0 else n for n in an), ad


def vsup(an, ad, bn, bd):
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        if an[i] * bd[i] >= bn[i] * ad[i]:
            rn[i] = an[i]
            rd[i] = ad[i]
        else:
            rn[i] = bn[i]
            rd[i] = bd[i]
    return tuple(rn), tuple(rd)


def vinf(an, ad, bn, bd):
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        if an[i] * bd[i] <= bn[i] * ad[i]:
            rn[i] = an[i]
            rd[i] = ad[i]
        else:
            rn[i] = bn[i]
            rd[i] = bd[i]
    return tuple(rn), tuple(rd)


def vleq(an, ad, bn, bd):
    m = len(an)
    for i in range(m):
        if an[i] * bd[i] > bn[i] * ad[i]:
            return False
    return True


def vpow(an, ad, k):
    # reduced fractions stay reduced under powers; no gcd needed
    if k == 0:
        return (1,) * len(an), (1,) * len(an)
    return tuple(n ** k for n in an), tuple(d ** k for d in ad)


def vrecip(an, ad):
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        n = an[i]
        if n == 0:
            raise ZeroDivisionError(f"zero coordinate at index {i}")
        if n < 0:
            rn[i] = -ad[i]
            rd[i] = -n
        else:
            rn[i] = ad[i]
            rd[i] = n
    return tuple(rn), tuple(rd)


def vscale(an, ad, cn, cd):
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        num = an[i] * cn
        den = ad[i] * cd
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vaxpy(an, ad, cn, cd, bn, bd):
    # a + c * b, with c a rational scalar
    m = len(an)
    rn = [0] * m
    rd = [0] * m
    for i in range(m):
        pn = cn * bn[i]
        pd = cd * bd[i]
        num = an[i] * pd + pn * ad[i]
        den = ad[i] * pd
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)
