"""Exact arithmetic of rational square classes, Hilbert symbols and quaternion
algebras over Q given by their ramification sets, and multiquadratic fields.

Everything here is plain integer arithmetic: a square class is a signed
squarefree integer, a quaternion algebra over Q is identified with the even
finite set of places where it ramifies, and a multiquadratic field is a span
of square classes.  All operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

Rational = Union[int, Fraction]

# Inputs are table data; trial division is plenty below this bound.
FACTOR_BOUND = 2**63 - 1


def factor(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division (n != 0)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    if n > FACTOR_BOUND:
        raise ValueError(f"input {n} exceeds factorization bound {FACTOR_BOUND}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factor(n) == {n: 1}


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p and a prime to p."""
    a %= p
    if a == 0:
        raise ValueError(f"{a} not a unit mod {p}")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True, order=True)
class SquareClass:
    """A nonzero rational modulo squares, stored as a signed squarefree integer."""

    value: int

    def __post_init__(self):
        if self.value == 0:
            raise ValueError("square class of 0 is undefined")
        if any(e > 1 for e in factor(self.value).values()):
            raise ValueError(f"{self.value} is not squarefree")

    @property
    def sign(self) -> int:
        return 1 if self.value > 0 else -1

    @property
    def abs(self) -> "AbsSquareClass":
        return AbsSquareClass(abs(self.value))

    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(factor(self.value)))

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return squarefree_reduce(self.value * other.value)

    def is_one(self) -> bool:
        return self.value == 1

    def __repr__(self):
        return f"SquareClass({self.value})"


@dataclass(frozen=True, order=True)
class AbsSquareClass:
    """A positive squarefree integer: a class of Q*/{+-1}Q*^2."""

    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("absolute square class must be positive")
        if any(e > 1 for e in factor(self.value).values()):
            raise ValueError(f"{self.value} is not squarefree")

    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(factor(self.value))) if self.value > 1 else ()

    def __mul__(self, other: "AbsSquareClass") -> "AbsSquareClass":
        return AbsSquareClass(abs(squarefree_reduce(self.value * other.value).value))

    def is_one(self) -> bool:
        return self.value == 1

    def __repr__(self):
        return f"AbsSquareClass({self.value})"


def squarefree_reduce(r: Rational) -> SquareClass:
    """Canonical representative of a nonzero rational in Q*/Q*^2.

    r / result is always a rational square: r = num/den ~ num*den mod squares,
    and stripping even prime exponents leaves the signed squarefree part.
    """
    r = Fraction(r)
    if r == 0:
        raise ValueError("square class of 0 is undefined")
    n = r.numerator * r.denominator
    out = -1 if n < 0 else 1
    for p, e in factor(n).items():
        if e % 2:
            out *= p
    return SquareClass(out)


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime, or p=None for the real place."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    def sort_key(self):
        return (0, 0) if self.p is None else (1, self.p)

    def __repr__(self):
        return "oo" if self.p is None else str(self.p)


INFINITY = Place(None)


def place(v) -> Place:
    if isinstance(v, Place):
        return v
    if v is None:
        return INFINITY
    return Place(int(v))


@dataclass(frozen=True)
class QuaternionClass:
    """An element of the 2-torsion of the Brauer group of Q, as its even set
    of ramified places.  The empty set is the split (trivial) class."""

    ramified: frozenset[Place]

    def __post_init__(self):
        if len(self.ramified) % 2:
            raise ValueError("ramification set must have even cardinality")

    @staticmethod
    def of(places: Iterable) -> "QuaternionClass":
        return QuaternionClass(frozenset(place(v) for v in places))

    def is_trivial(self) -> bool:
        return not self.ramified

    def __mul__(self, other: "QuaternionClass") -> "QuaternionClass":
        # Brauer product of 2-torsion classes: symmetric difference.
        return QuaternionClass(self.ramified ^ other.ramified)

    def sorted_places(self) -> list[Place]:
        return sorted(self.ramified, key=Place.sort_key)

    def __repr__(self):
        return "ram{%s}" % ",".join(str(v) for v in self.sorted_places())


TRIVIAL_CLASS = QuaternionClass(frozenset())


@dataclass(frozen=True)
class QuaternionSymbol:
    """The quaternion algebra (a,b) over Q: i^2=a, j^2=b, ij=-ji."""

    a: SquareClass
    b: SquareClass

    @staticmethod
    def of(a: Rational, b: Rational) -> "QuaternionSymbol":
        return QuaternionSymbol(squarefree_reduce(a), squarefree_reduce(b))

    def __repr__(self):
        return f"({self.a.value},{self.b.value})"


def is_local_square(a: SquareClass, v: Place) -> bool:
    """Whether a is a square in the completion Q_v.

    At the real place this is positivity.  At an odd p the valuation must be
    even with the unit part a residue; at 2 the unit part must be 1 mod 8.
    """
    n = a.value
    if v.is_infinite:
        return n > 0
    p = v.p
    e = factor(n).get(p, 0)
    if e % 2:
        return False
    unit = n // (p**e)
    if p == 2:
        return unit % 8 == 1
    return legendre(unit, p) == 1


def _eps(u: int) -> int:
    # (u - 1)/2 mod 2 for odd u
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    # (u^2 - 1)/8 mod 2 for odd u
    return ((u * u - 1) // 8) % 2


@lru_cache(maxsize=None)
def _hilbert(a: int, b: int, vp: int | None) -> int:
    if vp is None:
        return -1 if (a < 0 and b < 0) else 1
    p = vp
    fa, fb = factor(a), factor(b)
    alpha, beta = fa.get(p, 0), fb.get(p, 0)
    ua = a // (p**alpha) if a > 0 else -((-a) // (p**alpha))
    ub = b // (p**beta) if b > 0 else -((-b) // (p**beta))
    if p == 2:
        exp = _eps(ua) * _eps(ub) + alpha * _omega(ub) + beta * _omega(ua)
        return -1 if exp % 2 else 1
    exp = alpha * beta * _eps(p)
    sym = (-1) ** exp
    if beta % 2:
        sym *= legendre(ua % p, p)
    if alpha % 2:
        sym *= legendre(ub % p, p)
    return sym


def hilbert_symbol(a: SquareClass, b: SquareClass, v: Place) -> int:
    """Hilbert symbol (a,b)_v: -1 exactly when (a,b) is ramified at v."""
    return _hilbert(a.value, b.value, v.p)


def ramification_set(s: QuaternionSymbol) -> QuaternionClass:
    """All places where the symbol algebra (a,b) is division.

    Only infinity, 2 and the odd primes dividing a or b can ramify.
    """
    candidates = [INFINITY, Place(2)]
    for p in sorted(set(s.a.primes()) | set(s.b.primes())):
        if p != 2:
            candidates.append(Place(p))
    ram = frozenset(v for v in candidates if hilbert_symbol(s.a, s.b, v) == -1)
    cls = QuaternionClass(ram)  # even cardinality is the product formula
    return cls


def _class_vector(n: int, coords: list[int]) -> int:
    """F2 vector of a signed squarefree integer as a bitmask over coords.

    coords lists -1 first and then the primes in use, in a fixed order.
    """
    mask = 0
    if n < 0:
        mask |= 1
    for p in factor(n):
        mask |= 1 << coords.index(p)
    return mask


def _mask_to_int(mask: int, coords: list[int]) -> int:
    out = 1
    for k, c in enumerate(coords):
        if mask >> k & 1:
            out *= c
    return out


def _coords_for(values: list[int]) -> list[int]:
    primes: set[int] = set()
    for v in values:
        primes |= set(factor(v))
    return [-1] + sorted(primes)


def _echelon(values: list[int]) -> list[int]:
    """Canonical echelon basis of the span of square classes, as integers."""
    coords = _coords_for(values)
    basis: list[int] = []
    for v in values:
        m = _class_vector(v, coords)
        for b in basis:
            m = min(m, m ^ b)
        if m:
            basis.append(m)
            basis.sort(reverse=True)
    # back-reduce for uniqueness
    for idx in range(len(basis)):
        for other in basis[idx + 1 :]:
            if basis[idx] ^ other < basis[idx]:
                basis[idx] ^= other
    return sorted(_mask_to_int(b, coords) for b in basis)


def _reduce_mod(value: int, basis_ints: tuple[int, ...]) -> int:
    coords = _coords_for([value, *basis_ints])
    basis = sorted((_class_vector(b, coords) for b in basis_ints), reverse=True)
    m = _class_vector(value, coords)
    for b in basis:
        m = min(m, m ^ b)
    return _mask_to_int(m, coords)


class PolyquadraticField:
    """A compositum Q(sqrt t_1, ..., sqrt t_k) with independent generators.

    Semantically the field is the span of its generators inside Q*/Q*^2;
    equality and hashing go through a canonical echelon basis of that span.
    """

    def __init__(self, generators: Iterable[Rational | SquareClass] = ()):
        gens = []
        for g in generators:
            c = g if isinstance(g, SquareClass) else squarefree_reduce(g)
            if c.is_one():
                raise ValueError("generator 1 is a square, not allowed")
            gens.append(c)
        self.generators: tuple[SquareClass, ...] = tuple(
            sorted(set(gens), key=lambda c: (abs(c.value), c.value < 0))
        )
        basis = _echelon([g.value for g in self.generators])
        if len(basis) != len(self.generators):
            raise ValueError("generators are dependent modulo squares")
        self._basis = tuple(basis)

    @property
    def is_rational(self) -> bool:
        return not self.generators

    def canonical_basis(self) -> tuple[SquareClass, ...]:
        return tuple(SquareClass(v) for v in self._basis)

    def is_square(self, t: SquareClass) -> bool:
        """Whether sqrt(t) lies in the field, i.e. t is trivial in K*/K*^2."""
        return _reduce_mod(t.value, self._basis) == 1

    def reduce(self, t: SquareClass) -> SquareClass:
        """Canonical representative of t modulo squares of the field."""
        return SquareClass(_reduce_mod(t.value, self._basis))

    def square_class_group(self) -> list[SquareClass]:
        """All 2^k products of generators (the classes of Q* killed in K)."""
        out = [SquareClass(1)]
        for g in self.generators:
            out += [c * g for c in out]
        return sorted(set(out), key=lambda c: (abs(c.value), c.value < 0))

    def contains(self, other: "PolyquadraticField") -> bool:
        return all(self.is_square(g) for g in other.generators)

    def adjoin(self, t: SquareClass) -> "PolyquadraticField":
        if self.is_square(t):
            return self
        return PolyquadraticField(self.generators + (t,))

    def __eq__(self, other):
        return isinstance(other, PolyquadraticField) and self._basis == other._basis

    def __hash__(self):
        return hash(self._basis)

    def __repr__(self):
        if self.is_rational:
            return "Q"
        return "Q(%s)" % ", ".join(f"sqrt {g.value}" for g in self.generators)


QQ = PolyquadraticField()


def span_basis(values: Iterable[SquareClass]) -> list[SquareClass]:
    """Canonical independent generating set of the span of the given classes."""
    ints = [v.value for v in values if v.value != 1]
    return [SquareClass(v) for v in _echelon(ints)]


def field_is_local_point(K: PolyquadraticField, v: Place) -> bool:
    """Whether K embeds into Q_v, i.e. every generator is a local square."""
    return all(is_local_square(g, v) for g in K.generators)


def splits_over(q: QuaternionClass, K: PolyquadraticField) -> bool:
    """Whether the class q becomes trivial over the multiquadratic field K.

    Completions of K have 2-power degree, so any completion that is not Q_v
    itself splits the local division algebra; K must fail to embed into Q_v
    at every ramified place.
    """
    return all(not field_is_local_point(K, v) for v in q.ramified)


def classes_equal_over(
    q1: QuaternionClass, q2: QuaternionClass, K: PolyquadraticField
) -> bool:
    """Whether two rational classes have the same restriction to K."""
    return splits_over(q1 * q2, K)


def embeds_as_maximal_subfield(b: SquareClass, B: QuaternionSymbol) -> bool:
    """Whether Q(sqrt b) embeds as a maximal subfield of the division algebra B.

    Equivalent to Q(sqrt b) splitting B: b must be a local nonsquare at every
    ramified place.  Raises if B is split, since then there is no such notion.
    """
    ram = ramification_set(B)
    if ram.is_trivial():
        raise ValueError("B is split; it has no quaternionic subfield structure")
    if b.is_one():
        return False
    return all(not is_local_square(b, v) for v in ram.ramified)
