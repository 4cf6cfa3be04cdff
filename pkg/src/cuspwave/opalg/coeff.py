"""Exact coefficient arithmetic for degenerate-operator identities.

Coefficients live in the fraction field QQ(h, x1..xn, r) subject to the
algebraic relation r**2 = x1**2 + ... + xn**2, where h = t**(1/2) carries
the half-integer time powers.  Every element is kept in a normal form:
the radical r appears to degree at most one in the numerator, the
denominator is r-free (rationalized by the r-conjugate), and the leading
denominator coefficient is positive.  In one space dimension the radical
generator is omitted, since adjoining r with r**2 = x1**2 would create
zero divisors.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ParameterError

from sympy import QQ
from sympy.polys.fields import field

__all__ = ["CoeffContext", "CoeffExpr"]


class CoeffContext:
    """Coefficient field for a fixed number of space dimensions."""

    def __init__(self, n):
        if n not in (1, 2, 3):
            raise ParameterError("space dimension must be 1, 2 or 3")
        self.n = n
        names = ["h"] + ["x%d" % i for i in range(1, n + 1)]
        if n >= 2:
            names.append("r")
        unpacked = field(",".join(names), QQ)
        self.field = unpacked[0]
        gens = unpacked[1:]
        self._h = gens[0]
        self._x = gens[1:1 + n]
        self._r = gens[1 + n] if n >= 2 else None
        self.poly_ring = self._h.numer.ring
        self.r_index = 1 + n if n >= 2 else None
        if self.r_index is not None:
            self._r_poly = self.poly_ring.gens[self.r_index]
            self._sum_x2_poly = sum(
                self.poly_ring.gens[1 + i] ** 2 for i in range(n))
        else:
            self._r_poly = None
            self._sum_x2_poly = None

    # -- constructors ----------------------------------------------------

    def zero(self):
        return CoeffExpr(self, self.field.zero)

    def one(self):
        return CoeffExpr(self, self.field.one)

    def rational(self, p, q=1):
        value = Fraction(p, q)
        elem = self.field.one * QQ(value.numerator, value.denominator)
        return CoeffExpr(self, elem)

    def t_pow(self, half_exponent):
        """t raised to half_exponent/2, encoded as a power of h."""
        return CoeffExpr(self, self._h ** half_exponent, reduce=False)

    def t(self):
        return self.t_pow(2)

    def h(self):
        return self.t_pow(1)

    def x(self, i):
        if not 1 <= i <= self.n:
            raise ParameterError("coordinate index %d out of range" % i)
        return CoeffExpr(self, self._x[i - 1], reduce=False)

    def r(self):
        if self._r is None:
            raise ParameterError(
                "the radial generator is not available in one dimension")
        return CoeffExpr(self, self._r, reduce=False)

    # -- normal form helpers ---------------------------------------------

    def _reduce_poly(self, p):
        """Rewrite powers of r via r**2 -> sum of x_i**2."""
        if self.r_index is None:
            return p
        ring = self.poly_ring
        out = ring.zero
        idx = self.r_index
        for monom, coeff in p.terms():
            e = monom[idx]
            if e < 2:
                out = out + ring.from_dict({monom: coeff})
                continue
            base = list(monom)
            base[idx] = e % 2
            out = out + ring.from_dict({tuple(base): coeff}) \
                * self._sum_x2_poly ** (e // 2)
        return out

    def _split_r(self, p):
        """Decompose p = a + b*r with a, b free of r."""
        ring = self.poly_ring
        idx = self.r_index
        a = ring.zero
        b = ring.zero
        for monom, coeff in p.terms():
            if monom[idx] == 0:
                a = a + ring.from_dict({monom: coeff})
            else:
                base = list(monom)
                base[idx] = 0
                b = b + ring.from_dict({tuple(base): coeff})
        return a, b

    def normalize(self, frac):
        """Return the normal form of a raw fraction-field element."""
        num = self._reduce_poly(frac.numer)
        den = self._reduce_poly(frac.denom)
        if self.r_index is not None:
            a, b = self._split_r(den)
            if b:
                conj = a - b * self._r_poly
                num = self._reduce_poly(num * conj)
                den = self._reduce_poly(den * conj)
        num, den = num.cancel(den)
        if den.LC < 0:
            num, den = -num, -den
        return self.field.new(num, den)


class CoeffExpr:
    """One element of the coefficient field, in normal form."""

    __slots__ = ("ctx", "frac")

    def __init__(self, ctx, frac, reduce=True):
        self.ctx = ctx
        self.frac = ctx.normalize(frac) if reduce else frac

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CoeffExpr):
            if other.ctx is not self.ctx:
                raise ValueError("mixed coefficient contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CoeffExpr(self.ctx, self.frac + other.frac)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CoeffExpr(self.ctx, self.frac - other.frac)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CoeffExpr(self.ctx, other.frac - self.frac)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CoeffExpr(self.ctx, self.frac * other.frac)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero coefficient")
        return CoeffExpr(self.ctx, self.frac / other.frac)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return CoeffExpr(self.ctx, -self.frac, reduce=False)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise TypeError("coefficient exponents must be integers")
        return CoeffExpr(self.ctx, self.frac ** exponent)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.frac - other.frac).numer == 0 or \
            self.ctx.normalize(self.frac - other.frac).numer == 0

    def __hash__(self):
        return hash((id(self.ctx), self.frac))

    def is_zero(self):
        return self.frac.numer == 0

    # -- derivations -----------------------------------------------------

    def dt(self):
        """Derivative in t, via d/dt = (2h)**-1 d/dh."""
        ctx = self.ctx
        raw = self.frac.diff(ctx._h) / (2 * ctx._h)
        return CoeffExpr(ctx, raw)

    def dx(self, i):
        """Derivative in x_i, with the chain rule through r = |x|."""
        ctx = self.ctx
        if not 1 <= i <= ctx.n:
            raise ParameterError("coordinate index %d out of range" % i)
        raw = self.frac.diff(ctx._x[i - 1])
        if ctx._r is not None:
            # x_i / r equals x_i * r / (x1**2 + ... + xn**2)
            sum_x2 = sum(xj ** 2 for xj in ctx._x)
            raw = raw + self.frac.diff(ctx._r) * ctx._x[i - 1] \
                * ctx._r / sum_x2
        return CoeffExpr(ctx, raw)

    def __repr__(self):
        return "CoeffExpr(%s)" % (self.frac,)
