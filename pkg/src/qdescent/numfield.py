"""Exact arithmetic in explicit number fields Q[x]/(f) with named
automorphisms, for checking extension certificates (lambda maps and norm
witnesses).

Fields are presented by a monic irreducible polynomial of degree at most 8;
elements are coordinate vectors in the power basis.  Irreducibility is
verified at construction: rational root test plus a bounded search for monic
integer factors of degree up to deg/2 (values-and-interpolation style), which
is exhaustive for the degrees in range.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .groups import FiniteGroup
from .qarith import Rational, factor

DEGREE_CAP = 8


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = [1]
    for p, e in factor(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def _poly_trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _poly_trim(out)


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] * inv_lead
        q[shift] = coef
        for k, cb in enumerate(b):
            a[shift + k] -= coef * cb
        a.pop()
    return _poly_trim(q), _poly_trim(a)


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _has_rational_root(coeffs: Sequence[int]) -> bool:
    # rational root theorem for an integer polynomial
    a0, an = coeffs[0], coeffs[-1]
    if a0 == 0:
        return True
    for num in _divisors(a0):
        for den in _divisors(an):
            for s in (1, -1):
                if _poly_eval([Fraction(c) for c in coeffs], Fraction(s * num, den)) == 0:
                    return True
    return False


def _monic_integer_factor_exists(coeffs: Sequence[int], d: int) -> bool:
    """Whether the monic integer polynomial has a monic integer factor of
    degree exactly d.

    A factor g satisfies g(k) | f(k) at integer points, and the divided
    differences of an integer polynomial at integer nodes are integers, so
    candidate value tuples are walked with a Newton tableau and pruned as
    soon as a difference fails to be integral; the d-th difference must be 1
    for a monic degree-d interpolant.  This keeps the search exhaustive while
    discarding almost all divisor combinations early.
    """
    fq = [Fraction(c) for c in coeffs]
    pool = []
    for x in [0, 1, -1, 2, -2, 3, -3, 4, -4]:
        v = _poly_eval(fq, Fraction(x))
        if v == 0:
            return True  # rational root; callers test those first
        pool.append((x, [s * t for t in _divisors(int(v)) for s in (1, -1)]))
    # fewer divisor choices first: the walk prunes hardest that way
    pool.sort(key=lambda it: (len(it[1]), abs(it[0])))
    pts = [x for x, _ in pool[: d + 1]]
    options = [opts for _, opts in pool[: d + 1]]

    deg = len(coeffs) - 1

    def walk(level: int, tableau: list[list[int]]) -> bool:
        if level == d + 1:
            if tableau[-1][0] != 1:
                return False
            # expand the Newton form and trial divide
            g = [Fraction(1)]
            for k in range(d - 1, -1, -1):
                g = list(_poly_mul(g, (Fraction(-pts[k]), Fraction(1))))
                g[0] += tableau[k][0]
            q, r = _poly_divmod(fq, _poly_trim(list(g)))
            return not r and len(q) == deg - d + 1
        for v in options[level]:
            col = [v]
            ok = True
            for k in range(level):
                delta = col[k] - tableau[k][level - 1 - k]
                span = pts[level] - pts[level - 1 - k]
                if delta % span:
                    ok = False
                    break
                col.append(delta // span)
            if not ok:
                continue
            new_tab = [tableau[k] + [col[k]] for k in range(level)] + [[col[level]]]
            if walk(level + 1, new_tab):
                return True
        return False

    return walk(0, [])


@lru_cache(maxsize=None)
def _irreducible_cached(ints: tuple[int, ...]) -> bool:
    deg = len(ints) - 1
    if _has_rational_root(ints):
        return False
    for d in range(2, deg // 2 + 1):
        if _monic_integer_factor_exists(ints, d):
            return False
    return True


def _is_irreducible(coeffs: Sequence[Fraction]) -> bool:
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    # clear denominators; irreducibility over Q is invariant
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return _irreducible_cached(tuple(int(c * den) for c in coeffs))


class NumberField:
    """Q[x]/(minpoly) for a monic irreducible polynomial of degree <= 8."""

    def __init__(self, minpoly: Sequence[Rational], name: str = ""):
        coeffs = tuple(Fraction(c) for c in minpoly)
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have positive degree")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        if len(coeffs) - 1 > DEGREE_CAP:
            raise ValueError(f"degree {len(coeffs)-1} exceeds the supported cap {DEGREE_CAP}")
        if not _is_irreducible(coeffs):
            raise ValueError("minimal polynomial is reducible over Q")
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        self.name = name or f"Q[x]/(deg {self.degree})"

    def element(self, coords: Iterable[Rational]) -> "FieldElement":
        vec = tuple(Fraction(c) for c in coords)
        if len(vec) != self.degree:
            raise ValueError(f"need {self.degree} coordinates, got {len(vec)}")
        return FieldElement(self, vec)

    def rational(self, r: Rational) -> "FieldElement":
        return self.element([r] + [0] * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return self.rational(0)

    def one(self) -> "FieldElement":
        return self.rational(1)

    def generator(self) -> "FieldElement":
        return self.element([0, 1] + [0] * (self.degree - 2))

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coords: tuple[Fraction, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def __add__(self, other: "FieldElement") -> "FieldElement":
        _same_field(self, other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return nf_mul(self, other)

    def scale(self, r: Rational) -> "FieldElement":
        r = Fraction(r)
        return FieldElement(self.field, tuple(r * a for a in self.coords))

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return nf_inv(self) ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self):
        return f"FieldElement{self.coords}"


def _same_field(x: FieldElement, y: FieldElement) -> None:
    if x.field != y.field:
        raise ValueError("elements of different fields")


def nf_add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def nf_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    _same_field(x, y)
    prod = _poly_mul(x.coords, y.coords)
    _, rem = _poly_divmod(prod, x.field.minpoly)
    rem = list(rem) + [Fraction(0)] * (x.field.degree - len(rem))
    return FieldElement(x.field, tuple(rem))


def nf_inv(x: FieldElement) -> FieldElement:
    """Inverse by extended gcd with the minimal polynomial."""
    if x.is_zero():
        raise ZeroDivisionError("inverting 0 in a number field")
    f = x.field.minpoly
    r0, r1 = f, _poly_trim(list(x.coords))
    s0, s1 = (), (Fraction(1),)
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([a - b for a, b in itertools.zip_longest(s0, _poly_mul(q, s1), fillvalue=Fraction(0))])
    # r0 is a nonzero constant gcd
    c = r0[0]
    inv = [s / c for s in s0]
    _, rem = _poly_divmod(inv, f)
    rem = list(rem) + [Fraction(0)] * (x.field.degree - len(rem))
    return FieldElement(x.field, tuple(rem))


class FieldAutomorphism:
    """An automorphism given by the image of the power-basis generator."""

    def __init__(self, field: NumberField, image: FieldElement, name: str = ""):
        if image.field != field:
            raise ValueError("image must lie in the same field")
        if not _evaluates_to_zero(field.minpoly, image):
            raise ValueError("generator image is not a root of the minimal polynomial")
        self.field = field
        self.image = image
        self.name = name
        self._powers = [field.one()]
        for _ in range(field.degree - 1):
            self._powers.append(self._powers[-1] * image)
        # a root-preserving substitution on a field is automatically bijective

    def apply(self, e: FieldElement) -> FieldElement:
        if e.field != self.field:
            raise ValueError("element of a different field")
        out = self.field.zero()
        for c, p in zip(e.coords, self._powers):
            if c:
                out = out + p.scale(c)
        return out

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """self after other: x -> self(other(x))."""
        return FieldAutomorphism(self.field, self.apply(other.image),
                                 name=f"{self.name}*{other.name}")

    def is_identity(self) -> bool:
        return self.image == self.field.generator()

    def __eq__(self, other):
        return (isinstance(other, FieldAutomorphism)
                and self.field == other.field and self.image == other.image)

    def __hash__(self):
        return hash((self.field, self.image.coords))

    def __repr__(self):
        return self.name or f"automorphism {self.image!r}"


def _evaluates_to_zero(coeffs: Sequence[Fraction], e: FieldElement) -> bool:
    out = e.field.zero()
    for c in reversed(coeffs):
        out = out * e + e.field.rational(c)
    return out.is_zero()


def identity_automorphism(field: NumberField) -> FieldAutomorphism:
    return FieldAutomorphism(field, field.generator(), name="id")


def apply_automorphism(phi: FieldAutomorphism, e: FieldElement) -> FieldElement:
    return phi.apply(e)


def action_homomorphism(G: FiniteGroup, images: dict[int, FieldAutomorphism]) -> tuple[FieldAutomorphism, ...]:
    """Extend generator images to a left action of the whole group.

    Walks the group along its generators, then verifies the homomorphism
    property on all pairs; a relation violation is reported with the
    offending pair of elements.
    """
    field = next(iter(images.values())).field
    act: dict[int, FieldAutomorphism] = {0: identity_automorphism(field)}
    for g, phi in images.items():
        act[g] = phi
    frontier = list(act)
    while frontier:
        g = frontier.pop()
        for s, phi in images.items():
            gs = G.mul(g, s)
            if gs not in act:
                act[gs] = act[g].compose(phi)
                frontier.append(gs)
    if len(act) != G.order:
        raise ValueError("generator images do not reach the whole group")
    for g in G.elements():
        for h in G.elements():
            if act[g].compose(act[h]) != act[G.mul(g, h)]:
                raise ValueError(
                    f"generator automorphisms violate the relations at "
                    f"({G.label(g)}, {G.label(h)})"
                )
    return tuple(act[g] for g in G.elements())


def relative_norm(e: FieldElement, autos: Sequence[FieldAutomorphism]) -> FieldElement:
    """Product of phi(e) over a set of automorphisms closed under composition."""
    autos = list(autos)
    for a in autos:
        for b in autos:
            if a.compose(b) not in autos:
                raise ValueError("automorphism set is not closed under composition")
    out = e.field.one()
    for phi in autos:
        out = out * phi.apply(e)
    for phi in autos:
        if phi.apply(out) != out:
            raise AssertionError("norm is not fixed by the subgroup")
    return out
