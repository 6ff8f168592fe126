"""Pure-Python scalar kernel: Gaussian rationals and sparse exact RREF.

This module and the compiled ``_kernel`` extension expose the same API;
``ymbv.kernel`` picks one at import time.
"""
from fractions import Fraction
from math import gcd

BACKEND = "python"


def _norm(a, b, q):
    if q < 0:
        a, b, q = -a, -b, -q
    g = gcd(a, b, q)
    if g != 1:
        a //= g
        b //= g
        q //= g
    return a, b, q


class GaussianRational:
    """An element (a + b*i)/q of Q(i), stored with q > 0 and gcd(a, b, q) = 1."""

    __slots__ = ("a", "b", "q")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            self.a, self.b, self.q = re.a, re.b, re.q
            return
        re = Fraction(re)
        im = Fraction(im)
        q = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self.a, self.b, self.q = _norm(re.numerator * (q // re.denominator),
                                       im.numerator * (q // im.denominator), q)

    @classmethod
    def _raw(cls, a, b, q):
        r = cls.__new__(cls)
        r.a, r.b, r.q = a, b, q
        return r

    @classmethod
    def from_parts(cls, a, b, q):
        return cls._raw(*_norm(a, b, q))

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
        if isinstance(other, GaussianRational):
            return self.a == other.a and self.b == other.b and self.q == other.q
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and Fraction(self.a, self.q) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.q))
        return hash((self.a, self.b, self.q))

    def __neg__(self):
        return GaussianRational._raw(-self.a, -self.b, self.q)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, int):
                return GaussianRational._raw(self.a + other * self.q, self.b, self.q)
            if isinstance(other, Fraction):
                other = GaussianRational(other)
            else:
                return NotImplemented
        if self.q == other.q:
            return GaussianRational._raw(*_norm(self.a + other.a, self.b + other.b, self.q))
        return GaussianRational._raw(*_norm(self.a * other.q + other.a * self.q,
                                            self.b * other.q + other.b * self.q,
                                            self.q * other.q))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                other = GaussianRational(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, int):
                return GaussianRational._raw(*_norm(self.a * other, self.b * other, self.q))
            if isinstance(other, Fraction):
                other = GaussianRational(other)
            else:
                return NotImplemented
        a, b, q = self.a, self.b, self.q
        c, e, r = other.a, other.b, other.q
        return GaussianRational._raw(*_norm(a * c - b * e, a * e + b * c, q * r))

    __rmul__ = __mul__

    def inverse(self):
        a, b, q = self.a, self.b, self.q
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        # q / (a + bi) = q (a - bi) / n
        return GaussianRational._raw(*_norm(q * a, -q * b, n))

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                other = GaussianRational(other)
            else:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational._raw(1, 0, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussianRational._raw(self.a, -self.b, self.q)

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


def sparse_rref(rows, ncols):
    """Reduced row echelon form of sparse augmented rows over Q(i).

    ``rows`` is an iterable of dicts ``col -> GaussianRational``; column
    ``ncols`` holds the constant term. Pivots are always the first nonzero
    column, so the result is the unique RREF. Returns ``(pivots, bad)``
    where ``pivots`` maps pivot column -> normalized row (sorted by column)
    and ``bad`` is the first row reduced to ``0 = c`` with ``c != 0``
    (or ``None``).
    """
    pivots = {}
    bad = None
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        # forward-reduce against the pivots present in r, smallest column first
        while r:
            cols = [c for c in r if c in pivots]
            if not cols:
                break
            c = min(cols)
            f = r[c]
            for cc, vv in pivots[c].items():
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
        for pc, prow in pivots.items():
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


def axpy(target, source, scale):
    """target += scale * source for sparse dicts of ring elements; drops zeros."""
    for k, v in source.items():
        cur = target.get(k)
        nv = v * scale if cur is None else cur + v * scale
        if nv:
            target[k] = nv
        elif cur is not None:
            del target[k]
    return target
