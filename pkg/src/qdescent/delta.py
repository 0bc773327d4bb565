"""Closed-form components of the coboundary classes delta(psi) attached to
morphisms with finite image in B*/Q*, one constructor per image type, plus
the brute-force oracle that recomputes them from explicit quaternion lifts.

Image types over Q are C2, C2xC2, C_n and D_2n for n in {3,4,6} only: a
projectively finite element of order n needs zeta_n + zeta_n^{-1} rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cocycle import TwoCocycle, from_function, verify_cocycle
from .groups import FiniteGroup, cyclic_group, dihedral_group, klein_group
from .qalg import QuaternionElement, is_central, one, qinv, qmul
from .qarith import (
    AbsSquareClass,
    PolyquadraticField,
    QuaternionClass,
    QuaternionSymbol,
    SquareClass,
    TRIVIAL_CLASS,
    embeds_as_maximal_subfield,
    ramification_set,
    squarefree_reduce,
)

SHAPE_ORDER = ("C2", "C2xC2", "C3", "C4", "C6", "D6", "D8", "D12")


class PMorphism:
    """A homomorphism from an absolute Galois group to P/P^2 presented as
    pairs (t, d): the product of the maps sending the nontrivial automorphism
    of K(sqrt t)/K to the class of d.

    Such presentations are far from unique, so equality, triviality and shape
    extraction all go through a canonical form: for each prime q on the value
    side, the product of the t's attached to q, reduced modulo squares of the
    base field.  The canonical form is the graph of the morphism.
    """

    def __init__(self, pairs, base: PolyquadraticField):
        norm_pairs = []
        for t, d in pairs:
            t = t if isinstance(t, SquareClass) else squarefree_reduce(t)
            if isinstance(d, SquareClass):
                d = d.abs
            elif not isinstance(d, AbsSquareClass):
                d = squarefree_reduce(d).abs
            norm_pairs.append((t, d))
        self.pairs: tuple[tuple[SquareClass, AbsSquareClass], ...] = tuple(norm_pairs)
        self.base = base

    def canonical(self) -> tuple[tuple[SquareClass, AbsSquareClass], ...]:
        """Pairs (character class, value class) with distinct nontrivial
        characters, the complete invariant of the morphism over the base."""
        per_prime: dict[int, SquareClass] = {}
        for t, d in self.pairs:
            for q in d.primes():
                per_prime[q] = per_prime.get(q, SquareClass(1)) * t
        grouped: dict[SquareClass, int] = {}
        for q, t in per_prime.items():
            t = self.base.reduce(t)
            if t.is_one():
                continue
            grouped[t] = grouped.get(t, 1) * q
        return tuple(
            (t, AbsSquareClass(v))
            for t, v in sorted(grouped.items(), key=lambda kv: (abs(kv[0].value), kv[0].value < 0))
        )

    def character_classes(self) -> tuple[SquareClass, ...]:
        return tuple(t for t, _ in self.canonical())

    def is_trivial(self) -> bool:
        return not self.canonical()

    def rebase(self, K: PolyquadraticField) -> "PMorphism":
        return PMorphism(self.pairs, K)

    def product(self, other: "PMorphism") -> "PMorphism":
        if self.base != other.base:
            raise ValueError("morphisms over different base fields")
        return PMorphism(self.pairs + other.pairs, self.base)

    def value_at(self, chi) -> AbsSquareClass:
        """Evaluate at an automorphism given as chi: SquareClass -> {0,1}."""
        out = AbsSquareClass(1)
        for t, d in self.pairs:
            if chi(t):
                out = out * d
        return out

    def __eq__(self, other):
        return (isinstance(other, PMorphism) and self.base == other.base
                and self.canonical() == other.canonical())

    def __hash__(self):
        return hash((self.base, self.canonical()))

    def __repr__(self):
        if self.is_trivial():
            return "(trivial)_P"
        return "".join(f"({t.value},{d.value})_P" for t, d in self.canonical())


@dataclass(frozen=True)
class SymbolicSign:
    """A sign component known as a rational quaternion class, to be read over
    the base field by restriction."""

    ram: QuaternionClass
    symbols: tuple[QuaternionSymbol, ...] = ()

    @property
    def is_symbolic(self) -> bool:
        return True


@dataclass(frozen=True)
class CocycleSign:
    """A sign component exhibited only as an explicit {+-1} cocycle on a
    finite Galois group; identifying it with a Brauer class needs extension
    data (a certificate naming the field M)."""

    cocycle: TwoCocycle
    extension: str = "extension-dependent"

    @property
    def is_symbolic(self) -> bool:
        return False


SignComponent = Union[SymbolicSign, CocycleSign]


@dataclass(frozen=True)
class GammaClass:
    """A 2-torsion class over a base field, split into its P/P^2 morphism
    part and its sign part."""

    pbar: PMorphism
    sign: SignComponent
    base: PolyquadraticField

    def __post_init__(self):
        if self.pbar.base != self.base:
            raise ValueError("pbar is read over a different base field")


def trivial_gamma(K: PolyquadraticField) -> GammaClass:
    return GammaClass(PMorphism((), K), SymbolicSign(TRIVIAL_CLASS), K)


@dataclass(frozen=True)
class Admissibility:
    """Which finite subgroup shapes of B*/Q* exist for a division algebra B."""

    B: QuaternionSymbol
    flags: tuple[tuple[str, bool], ...]

    def admits(self, shape: str) -> bool:
        return dict(self.flags)[shape]

    def shapes(self) -> tuple[str, ...]:
        return tuple(s for s, ok in self.flags if ok)


def admissible_subgroups(B: QuaternionSymbol) -> Admissibility:
    """Admissible images over F = Q: C2 and C2xC2 always exist; C_n (and then
    D_2n) for n in {3,4,6} exactly when Q(zeta_n) is a maximal subfield,
    i.e. when -3 (n = 3, 6) resp. -1 (n = 4) embeds."""
    if ramification_set(B).is_trivial():
        raise ValueError("B is split: it is not a building-block endomorphism algebra")
    c3 = embeds_as_maximal_subfield(SquareClass(-3), B)
    c4 = embeds_as_maximal_subfield(SquareClass(-1), B)
    flags = (
        ("C2", True),
        ("C2xC2", True),
        ("C3", c3),
        ("C4", c4),
        ("C6", c3),
        ("D6", c3),
        ("D8", c4),
        ("D12", c3),
    )
    return Admissibility(B, flags)


def cn_alpha(n: int) -> SquareClass:
    """alpha = 2 + zeta_n + zeta_n^{-1} as a rational square class."""
    table = {3: 1, 4: 2, 6: 3}
    if n not in table:
        raise ValueError(f"n = {n} has irrational zeta_n + zeta_n^{{-1}}, not supported over Q")
    return SquareClass(table[n])


def d2n_d(n: int) -> SquareClass:
    """d = (zeta_n + zeta_n^{-1})^2 - 4 as a rational square class."""
    table = {3: -3, 4: -1, 6: -3}
    if n not in table:
        raise ValueError(f"n = {n} has irrational zeta_n + zeta_n^{{-1}}, not supported over Q")
    return SquareClass(table[n])


def _require_nonsquare(t: SquareClass, K: PolyquadraticField, role: str) -> None:
    if K.is_square(t):
        raise ValueError(f"{role} = {t.value} is a square in {K}, the morphism would collapse")


def delta_C2(t: SquareClass, b: SquareClass, B: QuaternionSymbol,
             K: PolyquadraticField) -> GammaClass:
    """Components for an image C2 = <y> with y^2 = b, cut out by K(sqrt t)."""
    _require_nonsquare(t, K, "t")
    if not embeds_as_maximal_subfield(b, B):
        raise ValueError(f"Q(sqrt {b.value}) is not a maximal subfield of B = {B}")
    pbar = PMorphism([(t, b.abs)], K)
    if b.value > 0:
        sign = SymbolicSign(TRIVIAL_CLASS, (QuaternionSymbol(t, SquareClass(1)),))
    else:
        sym = QuaternionSymbol(t, SquareClass(-1))
        sign = SymbolicSign(ramification_set(sym), (sym,))
    return GammaClass(pbar, sign, K)


def delta_C2xC2(s: SquareClass, t: SquareClass, a: SquareClass, b: SquareClass,
                B: QuaternionSymbol, K: PolyquadraticField) -> GammaClass:
    """Components for an image C2xC2 generated by x, y with x^2 = a (positive),
    y^2 = b, xy = -yx, cut out by K(sqrt s, sqrt t)."""
    if a.value <= 0:
        raise ValueError("the presentation requires a positive a")
    if ramification_set(QuaternionSymbol(a, b)) != ramification_set(B):
        raise ValueError(f"(a,b) = ({a.value},{b.value}) is not isomorphic to B = {B}")
    _require_nonsquare(s, K, "s")
    _require_nonsquare(t, K, "t")
    _require_nonsquare(s * t, K, "s*t")
    pbar = PMorphism([(s, a.abs), (t, b.abs)], K)
    lead = s if b.value > 0 else SquareClass(-1) * s
    sym = QuaternionSymbol(lead, t)
    sign = SymbolicSign(ramification_set(sym), (sym,))
    return GammaClass(pbar, sign, K)


def build_cn_sign_cocycle(n: int) -> TwoCocycle:
    """The {+-1} table on C_n: -1 exactly when the exponents wrap past n."""
    return from_function(cyclic_group(n), lambda g, h: -1 if g + h >= n else 1)


def delta_Cn(n: int, t: SquareClass, K: PolyquadraticField,
             M: Optional[str] = None) -> GammaClass:
    """Components for a cyclic image C_n, n in {3,4,6}.

    Odd n gives the trivial class.  For even n the sign part is only known as
    the wrap-around cocycle on Gal(M/K); its Brauer class depends on the
    cyclic extension M, so it stays in cocycle form here.
    """
    if n == 3:
        return trivial_gamma(K)
    if n not in (4, 6):
        raise ValueError(f"unsupported cyclic order {n} over Q")
    _require_nonsquare(t, K, "t")
    pbar = PMorphism([(t, cn_alpha(n).abs)], K)
    sign = CocycleSign(build_cn_sign_cocycle(n), M or "extension-dependent")
    return GammaClass(pbar, sign, K)


def _exact_sqrt(x: int) -> int:
    r = math.isqrt(x)
    if r * r != x:
        raise ValueError(f"{x} is not a perfect square")
    return r


def build_d2n_cocycles(n: int, b: SquareClass | int, a: Optional[Fraction] = None,
                       alpha: Optional[int] = None):
    """The three tables gamma_b, e, c_pm on D_2n (n in {3,4,6}).

    The rotation lift satisfies x^n = a with a^2 = alpha^n; a is negative
    (the positive root would force a commutative subfield of dimension 4),
    so a defaults to -sqrt(alpha^n).
    """
    if n not in (3, 4, 6):
        raise ValueError(f"unsupported dihedral order 2*{n} over Q")
    alpha = alpha if alpha is not None else cn_alpha(n).value
    a = Fraction(a) if a is not None else Fraction(-_exact_sqrt(alpha**n))
    bval = Fraction(b.value if isinstance(b, SquareClass) else b)
    G = dihedral_group(n)

    def split(g):
        return g % n, g // n

    def gamma_b(g, h):
        _, j1 = split(g)
        _, j2 = split(h)
        return bval if j1 + j2 == 2 else Fraction(1)

    def e(g, h):
        i1, j1 = split(g)
        i2, _ = split(h)
        if j1 == 1:
            val = Fraction(alpha) ** i2
            return val if i1 - i2 >= 0 else val / a
        return Fraction(1) if i1 + i2 < n else a

    def c_pm(g, h):
        i1, j1 = split(g)
        i2, _ = split(h)
        if j1 == 1:
            return 1 if i1 - i2 >= 0 else -1
        return 1 if i1 + i2 < n else -1

    return from_function(G, gamma_b), from_function(G, e), from_function(G, c_pm)


def delta_D2n(n: int, s: SquareClass, t: SquareClass, b: SquareClass,
              B: QuaternionSymbol, K: PolyquadraticField,
              M: Optional[str] = None) -> GammaClass:
    """Components for a dihedral image D_2n, n in {3,4,6}.

    b must present B together with d = (zeta+zeta^{-1})^2 - 4.  For odd n the
    sign part is trivial and s drops out; for even n it is the c_pm cocycle,
    identified with a Brauer class only through an extension certificate.
    """
    if ramification_set(QuaternionSymbol(d2n_d(n), b)) != ramification_set(B):
        raise ValueError(
            f"(d,b) = ({d2n_d(n).value},{b.value}) is not isomorphic to B = {B}"
        )
    _require_nonsquare(t, K, "t")
    if n == 3:
        pbar = PMorphism([(t, b.abs)], K)
        return GammaClass(pbar, SymbolicSign(TRIVIAL_CLASS), K)
    if n not in (4, 6):
        raise ValueError(f"unsupported dihedral order 2*{n} over Q")
    _require_nonsquare(s, K, "s")
    _require_nonsquare(s * t, K, "s*t")
    pbar = PMorphism([(s, cn_alpha(n).abs), (t, b.abs)], K)
    _, _, c_pm = build_d2n_cocycles(n, b)
    return GammaClass(pbar, CocycleSign(c_pm, M or "extension-dependent"), K)


def klein_cocycles(a, b):
    """The three Klein-group tables gamma_{s,a}, gamma_{t,b}, gamma_{s,t}.

    chi_s, chi_t are the coordinate characters; the first two are inflations
    of the one-relation C2 tables and the third is the pairing table
    (-1)^(chi_s(h) chi_t(g)) representing the symbol (s,t)."""
    V = klein_group()
    a, b = Fraction(a), Fraction(b)

    def chi_s(g):
        return g & 1

    def chi_t(g):
        return (g >> 1) & 1

    gamma_sa = from_function(V, lambda g, h: a if chi_s(g) and chi_s(h) else Fraction(1))
    gamma_tb = from_function(V, lambda g, h: b if chi_t(g) and chi_t(h) else Fraction(1))
    gamma_st = from_function(V, lambda g, h: -1 if chi_s(h) and chi_t(g) else 1)
    return gamma_sa, gamma_tb, gamma_st


def cyclic_lifts(G: FiniteGroup, x: QuaternionElement) -> list[QuaternionElement]:
    return [x**i for i in G.elements()]


def klein_lifts(G: FiniteGroup, x: QuaternionElement, y: QuaternionElement) -> list[QuaternionElement]:
    return [one(x.algebra), x, y, qmul(x, y)]


def dihedral_lifts(G: FiniteGroup, x: QuaternionElement, y: QuaternionElement) -> list[QuaternionElement]:
    n = G.order // 2
    return [qmul(x**(g % n), y**(g // n)) for g in G.elements()]


def delta_bruteforce(G: FiniteGroup, lifts: Sequence[QuaternionElement]) -> TwoCocycle:
    """The cocycle lift(g) lift(h) lift(gh)^{-1}, verified central throughout.

    A non-central value means the lifts do not define a homomorphism into
    B*/Q* on the given group.
    """
    if len(lifts) != G.order:
        raise ValueError("need one lift per group element")
    if lifts[0] != one(lifts[0].algebra):
        raise ValueError("the identity must lift to 1")
    inverses = [qinv(x) for x in lifts]
    values = []
    for g in G.elements():
        row = []
        for h in G.elements():
            c = qmul(qmul(lifts[g], lifts[h]), inverses[G.mul(g, h)])
            if not is_central(c):
                raise ValueError(
                    f"lifts are not projectively multiplicative at "
                    f"({G.label(g)}, {G.label(h)}): value {c}"
                )
            row.append(c.x0)
        values.append(tuple(row))
    cocycle = TwoCocycle(G, tuple(values))
    if not verify_cocycle(cocycle):
        raise AssertionError("brute-force table fails the cocycle identity")
    return cocycle
