"""Element arithmetic in a rational quaternion symbol algebra (a,b).

Elements are x0 + x1*i + x2*j + x3*ij with exact rational coefficients and
the relations i^2=a, j^2=b, ij=-ji.  This is the brute-force side of the
classifier cross-checks: finite projective orders are realized by explicit
elements and their coboundaries are multiplied out directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .qarith import QuaternionSymbol, Rational


@dataclass(frozen=True)
class QuaternionElement:
    algebra: QuaternionSymbol
    x0: Fraction
    x1: Fraction
    x2: Fraction
    x3: Fraction

    @staticmethod
    def of(algebra: QuaternionSymbol, x0: Rational, x1: Rational = 0,
           x2: Rational = 0, x3: Rational = 0) -> "QuaternionElement":
        return QuaternionElement(algebra, Fraction(x0), Fraction(x1),
                                 Fraction(x2), Fraction(x3))

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.x0, self.x1, self.x2, self.x3)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __add__(self, other: "QuaternionElement") -> "QuaternionElement":
        _check_same(self, other)
        return QuaternionElement(self.algebra, self.x0 + other.x0,
                                 self.x1 + other.x1, self.x2 + other.x2,
                                 self.x3 + other.x3)

    def __neg__(self) -> "QuaternionElement":
        return QuaternionElement(self.algebra, -self.x0, -self.x1, -self.x2, -self.x3)

    def __sub__(self, other: "QuaternionElement") -> "QuaternionElement":
        return self + (-other)

    def __mul__(self, other: "QuaternionElement") -> "QuaternionElement":
        return qmul(self, other)

    def scale(self, r: Rational) -> "QuaternionElement":
        r = Fraction(r)
        return QuaternionElement(self.algebra, r * self.x0, r * self.x1,
                                 r * self.x2, r * self.x3)

    def conjugate(self) -> "QuaternionElement":
        return QuaternionElement(self.algebra, self.x0, -self.x1, -self.x2, -self.x3)

    def __pow__(self, n: int) -> "QuaternionElement":
        if n < 0:
            return qinv(self) ** (-n)
        out = one(self.algebra)
        base = self
        while n:
            if n & 1:
                out = qmul(out, base)
            base = qmul(base, base)
            n >>= 1
        return out

    def __repr__(self):
        return f"({self.x0} + {self.x1}*i + {self.x2}*j + {self.x3}*ij in {self.algebra})"


def one(algebra: QuaternionSymbol) -> QuaternionElement:
    return QuaternionElement.of(algebra, 1)


def _check_same(x: QuaternionElement, y: QuaternionElement) -> None:
    if x.algebra != y.algebra:
        raise ValueError(f"elements of different algebras: {x.algebra} vs {y.algebra}")


def qmul(x: QuaternionElement, y: QuaternionElement) -> QuaternionElement:
    """Product under i^2=a, j^2=b, ij=-ji (and (ij)^2 = -ab)."""
    _check_same(x, y)
    a = Fraction(x.algebra.a.value)
    b = Fraction(x.algebra.b.value)
    x0, x1, x2, x3 = x.coefficients
    y0, y1, y2, y3 = y.coefficients
    return QuaternionElement(
        x.algebra,
        x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
        x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
        x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    )


def nrd(x: QuaternionElement) -> Fraction:
    """Reduced norm x0^2 - a*x1^2 - b*x2^2 + ab*x3^2; multiplicative."""
    a = Fraction(x.algebra.a.value)
    b = Fraction(x.algebra.b.value)
    x0, x1, x2, x3 = x.coefficients
    return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3


def qinv(x: QuaternionElement) -> QuaternionElement:
    """Inverse, conjugate over reduced norm.  Rejects zero norm."""
    n = nrd(x)
    if n == 0:
        raise ZeroDivisionError("element has reduced norm 0, not invertible")
    return x.conjugate().scale(Fraction(1, 1) / n)


def is_central(x: QuaternionElement) -> bool:
    """Whether x lies in the center Q of the algebra."""
    return x.x1 == 0 and x.x2 == 0 and x.x3 == 0


def pure(B: QuaternionSymbol, x1: Rational, x2: Rational, x3: Rational) -> QuaternionElement:
    return QuaternionElement.of(B, 0, x1, x2, x3)


def find_element_with_square(B: QuaternionSymbol, b, height: int = 14):
    """A pure quaternion y in B with y^2 = b exactly, or None.

    Searches integer coordinate triples up to the given height; a hit with
    y^2 = b * k^2 is rescaled by 1/k.  The square of a pure element is the
    scalar a*x1^2 + b*x2^2 - a*b*x3^2, so existence is exactly
    representability of b's square class by that form.
    """
    from fractions import Fraction as F

    from .qarith import squarefree_reduce

    target = squarefree_reduce(b)
    a0 = B.a.value
    b0 = B.b.value
    ab = a0 * b0
    for h in range(1, height + 1):
        for x1 in range(-h, h + 1):
            for x2 in range(-h, h + 1):
                for x3 in range(0, h + 1):
                    if max(abs(x1), abs(x2), x3) != h:
                        continue
                    val = a0 * x1 * x1 + b0 * x2 * x2 - ab * x3 * x3
                    if val == 0 or val % target.value:
                        continue
                    q = val // target.value
                    if q <= 0:
                        continue
                    k = math.isqrt(q)
                    if k * k != q:
                        continue
                    return pure(B, F(x1, k), F(x2, k), F(x3, k))
    return None


def _fraction_sqrt(q):
    from fractions import Fraction as F
    import math

    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ValueError(f"{q} is not a rational square")
    return F(num, den)


def anticommutes(x: QuaternionElement, y: QuaternionElement) -> bool:
    return qmul(x, y) == -qmul(y, x)


def find_anticommuting_with(x: QuaternionElement, b, height: int = 14):
    """A pure y with y^2 = b anticommuting with the pure element x, or None.

    Pure elements anticommute exactly when orthogonal for the norm form
    diag(a, b0, -a*b0) on the trace-zero part.
    """
    from fractions import Fraction as F

    from .qarith import squarefree_reduce

    B = x.algebra
    target = squarefree_reduce(b)
    a0 = B.a.value
    b0 = B.b.value
    ab = a0 * b0
    g1, g2, g3 = a0 * x.x1, b0 * x.x2, -ab * x.x3
    for h in range(1, height + 1):
        for y1 in range(-h, h + 1):
            for y2 in range(-h, h + 1):
                for y3 in range(-h, h + 1):
                    if max(abs(y1), abs(y2), abs(y3)) != h:
                        continue
                    if g1 * y1 + g2 * y2 + g3 * y3 != 0:
                        continue
                    val = a0 * y1 * y1 + b0 * y2 * y2 - ab * y3 * y3
                    if val == 0 or val % target.value:
                        continue
                    q = val // target.value
                    if q <= 0:
                        continue
                    k = math.isqrt(q)
                    if k * k != q:
                        continue
                    return pure(B, F(y1, k), F(y2, k), F(y3, k))
    return None


def make_zeta(n: int, B: QuaternionSymbol) -> QuaternionElement:
    """An element of multiplicative order exactly n in (a,b), for n in {3,4,6}.

    Supported presentations only: a=-1 gives zeta_4=i; a=-3 gives
    zeta_3=(-1+i)/2 and zeta_6=(1+i)/2.  Other presentations must supply an
    explicit element instead.
    """
    a = B.a.value
    if n == 4:
        if a != -1:
            raise ValueError(f"zeta_4 constructor needs a presentation with a=-1, got a={a}")
        return QuaternionElement.of(B, 0, 1)
    if n == 3:
        if a != -3:
            raise ValueError(f"zeta_3 constructor needs a presentation with a=-3, got a={a}")
        return QuaternionElement.of(B, Fraction(-1, 2), Fraction(1, 2))
    if n == 6:
        if a != -3:
            raise ValueError(f"zeta_6 constructor needs a presentation with a=-3, got a={a}")
        return QuaternionElement.of(B, Fraction(1, 2), Fraction(1, 2))
    raise ValueError(f"no projectively finite element of order {n} over Q (n must be 3, 4 or 6)")
