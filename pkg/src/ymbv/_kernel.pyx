# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scalar kernel: Gaussian rationals and sparse exact RREF.

Mirrors ``_purekernel`` exactly; the integers stay Python objects (the
values are unbounded), the win comes from skipping interpreter dispatch
in the normalisation and elimination loops.
"""
from fractions import Fraction
from math import gcd

BACKEND = "cython"


cdef inline tuple _norm(object a, object b, object q):
    cdef object g
    if q < 0:
        a = -a
        b = -b
        q = -q
    g = gcd(a, b, q)
    if g != 1:
        a = a // g
        b = b // g
        q = q // g
    return (a, b, q)


cdef inline GaussianRational _make(object a, object b, object q):
    cdef GaussianRational r = GaussianRational.__new__(GaussianRational)
    r.a = a
    r.b = b
    r.q = q
    return r


cdef inline GaussianRational _make_norm(object a, object b, object q):
    cdef tuple t = _norm(a, b, q)
    return _make(t[0], t[1], t[2])


cdef GaussianRational _coerce(object x):
    if isinstance(x, GaussianRational):
        return <GaussianRational>x
    if isinstance(x, int):
        return _make(x, 0, 1)
    if isinstance(x, Fraction):
        return _make(x.numerator, 0, x.denominator)
    return None


cdef class GaussianRational:
    """An element (a + b*i)/q of Q(i), stored with q > 0 and gcd(a, b, q) = 1."""

    cdef public object a
    cdef public object b
    cdef public object q

    def __init__(self, re=0, im=0):
        cdef GaussianRational o
        if isinstance(re, GaussianRational):
            o = <GaussianRational>re
            self.a = o.a
            self.b = o.b
            self.q = o.q
            return
        re = Fraction(re)
        im = Fraction(im)
        q = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        t = _norm(re.numerator * (q // re.denominator), im.numerator * (q // im.denominator), q)
        self.a, self.b, self.q = t

    @classmethod
    def _raw(cls, a, b, q):
        return _make(a, b, q)

    @classmethod
    def from_parts(cls, a, b, q):
        return _make_norm(a, b, q)

    @property
    def re(self):
        return Fraction(self.a, self.q)

    @property
    def im(self):
        return Fraction(self.b, self.q)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def is_real(self):
        return self.b == 0

    def __eq__(self, other):
        cdef GaussianRational o
        if isinstance(other, GaussianRational):
            o = <GaussianRational>other
            return self.a == o.a and self.b == o.b and self.q == o.q
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and Fraction(self.a, self.q) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.q))
        return hash((self.a, self.b, self.q))

    def __neg__(self):
        return _make(-self.a, -self.b, self.q)

    def __pos__(self):
        return self

    def __add__(self, other):
        cdef GaussianRational o = _coerce(other)
        if o is None:
            return NotImplemented
        if self.q == o.q:
            return _make_norm(self.a + o.a, self.b + o.b, self.q)
        return _make_norm(self.a * o.q + o.a * self.q, self.b * o.q + o.b * self.q, self.q * o.q)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        cdef GaussianRational o = _coerce(other)
        if o is None:
            return NotImplemented
        if self.q == o.q:
            return _make_norm(self.a - o.a, self.b - o.b, self.q)
        return _make_norm(self.a * o.q - o.a * self.q, self.b * o.q - o.b * self.q, self.q * o.q)

    def __rsub__(self, other):
        cdef GaussianRational o = _coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        cdef GaussianRational o = _coerce(other)
        if o is None:
            return NotImplemented
        return _make_norm(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a, self.q * o.q)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self):
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return _make_norm(self.q * self.a, -self.q * self.b, n)

    def __truediv__(self, other):
        cdef GaussianRational o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.__mul__(o.inverse())

    def __rtruediv__(self, other):
        cdef GaussianRational o = _coerce(other)
        if o is None:
            return NotImplemented
        return o.__mul__(self.inverse())

    def __pow__(self, n, mod):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = _make(1, 0, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return _make(self.a, -self.b, self.q)

    def __reduce__(self):
        return (GaussianRational.from_parts, (self.a, self.b, self.q))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return {1: "I", -1: "-I"}.get(im, f"{im}*I")
        sign = "+" if im > 0 else "-"
        mag = abs(im)
        return f"{re}{sign}{mag}*I" if mag != 1 else f"{re}{sign}I"


def sparse_rref(rows, Py_ssize_t ncols):
    """Reduced row echelon form of sparse augmented rows over Q(i).

    Same contract as ``_purekernel.sparse_rref``.
    """
    cdef dict pivots = {}
    cdef dict r, prow
    bad = None
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            cols = [c for c in r if c in pivots]
            if not cols:
                break
            c = min(cols)
            f = r[c]
            for cc, vv in (<dict>pivots[c]).items():
                nv = r.get(cc)
                nv = -(f * vv) if nv is None else nv - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        p = min(r)
        if p == ncols:
            if bad is None:
                bad = r
            continue
        inv = r[p].inverse()
        r = {c: v * inv for c, v in r.items()}
        for pc in pivots:
            prow = <dict>pivots[pc]
            f = prow.get(p)
            if f is None:
                continue
            for cc, vv in r.items():
                nv = prow.get(cc)
                nv = -(f * vv) if nv is None else nv - f * vv
                if nv:
                    prow[cc] = nv
                else:
                    prow.pop(cc, None)
        pivots[p] = r
    return pivots, bad


def axpy(dict target, source, scale):
    """target += scale * source for sparse dicts of ring elements; drops zeros."""
    for k, v in source.items():
        cur = target.get(k)
        nv = v * scale if cur is None else cur + v * scale
        if nv:
            target[k] = nv
        elif cur is not None:
            del target[k]
    return target
