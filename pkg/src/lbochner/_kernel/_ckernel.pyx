# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled rational vector kernel.

Semantics are defined by ``_pykernel.py``; this module only removes the
interpreter overhead of the per-coordinate loops.  Coordinates are Python
ints (arbitrary precision), so all arithmetic stays exact.
"""

from math import gcd


def vadd(tuple an, tuple ad, tuple bn, tuple bd):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    cdef object num, den, g
    for i in range(m):
        num = an[i] * bd[i] + bn[i] * ad[i]
        den = ad[i] * bd[i]
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vsub(tuple an, tuple ad, tuple bn, tuple bd):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    cdef object num, den, g
    for i in range(m):
        num = an[i] * bd[i] - bn[i] * ad[i]
        den = ad[i] * bd[i]
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vmul(tuple an, tuple ad, tuple bn, tuple bd):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    cdef object num, den, g
    for i in range(m):
        num = an[i] * bn[i]
        den = ad[i] * bd[i]
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vneg(tuple an, tuple ad):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    for i in range(m):
        rn[i] = -an[i]
    return tuple(rn), ad


def vabs(tuple an, tuple ad):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef object n
    for i in range(m):
        n = an[i]
        rn[i] = -n if n < 0 else n
    return tuple(rn), ad


def vsup(tuple an, tuple ad, tuple bn, tuple bd):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    for i in range(m):
        if an[i] * bd[i] >= bn[i] * ad[i]:
            rn[i] = an[i]
            rd[i] = ad[i]
        else:
            rn[i] = bn[i]
            rd[i] = bd[i]
    return tuple(rn), tuple(rd)


def vinf(tuple an, tuple ad, tuple bn, tuple bd):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    for i in range(m):
        if an[i] * bd[i] <= bn[i] * ad[i]:
            rn[i] = an[i]
            rd[i] = ad[i]
        else:
            rn[i] = bn[i]
            rd[i] = bd[i]
    return tuple(rn), tuple(rd)


def vleq(tuple an, tuple ad, tuple bn, tuple bd):
    cdef Py_ssize_t i, m = len(an)
    for i in range(m):
        if an[i] * bd[i] > bn[i] * ad[i]:
            return False
    return True


def vpow(tuple an, tuple ad, k):
    cdef Py_ssize_t i, m = len(an)
    if k == 0:
        return (1,) * m, (1,) * m
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    for i in range(m):
        rn[i] = an[i] ** k
        rd[i] = ad[i] ** k
    return tuple(rn), tuple(rd)


def vrecip(tuple an, tuple ad):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    cdef object n
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


def vscale(tuple an, tuple ad, cn, cd):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    cdef object num, den, g
    for i in range(m):
        num = an[i] * cn
        den = ad[i] * cd
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)


def vaxpy(tuple an, tuple ad, cn, cd, tuple bn, tuple bd):
    cdef Py_ssize_t i, m = len(an)
    cdef list rn = [0] * m
    cdef list rd = [0] * m
    cdef object pn, pd, num, den, g
    for i in range(m):
        pn = cn * bn[i]
        pd = cd * bd[i]
        num = an[i] * pd + pn * ad[i]
        den = ad[i] * pd
        g = gcd(num, den)
        rn[i] = num // g
        rd[i] = den // g
    return tuple(rn), tuple(rd)
