"""Top-level decision procedures: restriction of an obstruction class to a
number field, the mandatory polyquadratic core K_P, minimal fields carrying
the endomorphisms, Brauer-class identification of cocycle-form sign parts by
certificate-driven elimination, and the search over admissible image shapes
that decides fields of definition up to isogeny.

A verdict is Defined with a re-verified witness, NotDefined with one
refutation record per admissible shape, or Undecided with machine-readable
obligations (norm questions and extension-existence questions).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cocycle import (
    TwoCocycle,
    decompose_two_torsion,
    pm_coboundary_witness,
    restrict as restrict_cocycle,
    verify_unit_coboundary,
)
from .delta import (
    Admissibility,
    CocycleSign,
    GammaClass,
    PMorphism,
    SHAPE_ORDER,
    SymbolicSign,
    admissible_subgroups,
    build_cn_sign_cocycle,
    build_d2n_cocycles,
    cn_alpha,
    cyclic_lifts,
    d2n_d,
    delta_bruteforce,
    dihedral_lifts,
    klein_lifts,
    trivial_gamma,
)
from .groups import FiniteGroup, subgroup
from .numfield import FieldAutomorphism, FieldElement, NumberField, relative_norm
from .qalg import find_anticommuting_with, find_element_with_square, make_zeta, one, pure
from .qarith import (
    INFINITY,
    Place,
    PolyquadraticField,
    QQ,
    QuaternionClass,
    QuaternionSymbol,
    SquareClass,
    TRIVIAL_CLASS,
    classes_equal_over,
    embeds_as_maximal_subfield,
    field_is_local_point,
    is_local_square,
    ramification_set,
    span_basis,
    splits_over,
    squarefree_reduce,
)


class CertificateError(ValueError):
    """A supplied extension certificate is malformed or inconsistent."""


# ---------------------------------------------------------------------------
# certificates


@dataclass
class LambdaWitness:
    subgroup: tuple[int, ...]  # generating element indices in the certificate group
    values: tuple[FieldElement, ...]  # one per subgroup element, parent-index order


@dataclass
class NormFact:
    subgroup: tuple[int, ...]
    element: FieldElement
    is_norm: bool
    provenance: str  # "witness" or "oracle"
    witness: Optional[FieldElement] = None
    note: str = ""


@dataclass
class ExtensionCertificate:
    """Explicit data for a finite Galois extension M/Q: the field, the group,
    a validated action, named embedded elements, the declared prime support
    of the field discriminant, and optional lambda / norm facts."""

    name: str
    nf: NumberField
    group: FiniteGroup
    action: tuple[FieldAutomorphism, ...]
    embeddings: dict[str, FieldElement]
    ram_support: tuple[int, ...]
    lambda_witnesses: list[LambdaWitness] = field(default_factory=list)
    norm_facts: list[NormFact] = field(default_factory=list)

    def subgroup_of(self, gens: Sequence[int]):
        return subgroup(self.group, tuple(gens))

    def index_two_subgroups(self) -> list[tuple[int, ...]]:
        """Element tuples of the index-2 subgroups, via the sign characters."""
        G = self.group
        out = []
        for assignment in itertools.product((1, -1), repeat=len(G.generators)):
            if all(v == 1 for v in assignment):
                continue
            chi = {0: 1}
            ok = True
            frontier = [0]
            images = dict(zip(G.generators, assignment))
            while frontier and ok:
                g = frontier.pop()
                for s, val in images.items():
                    gs = G.mul(g, s)
                    want = chi[g] * val
                    if gs in chi:
                        if chi[gs] != want:
                            ok = False
                            break
                    else:
                        chi[gs] = want
                        frontier.append(gs)
            if not ok or len(chi) != G.order:
                continue
            if not all(chi[G.mul(g, h)] == chi[g] * chi[h] for g in G.elements() for h in G.elements()):
                continue
            kernel = tuple(sorted(g for g in G.elements() if chi[g] == 1))
            if len(kernel) == G.order // 2 and kernel not in out:
                out.append(kernel)
        return sorted(out)

    def quadratic_subfield_labels(self) -> dict[tuple[int, ...], SquareClass]:
        """For each index-2 subgroup H, a rational t with M^H = Q(sqrt t),
        found as an H-fixed monomial in the embedded elements whose square is
        a rational nonsquare."""
        labels: dict[tuple[int, ...], SquareClass] = {}
        monomials = self._monomials()
        for kernel in self.index_two_subgroups():
            for e in monomials:
                if e.is_rational():
                    continue
                sq = e * e
                if not sq.is_rational():
                    continue
                if any(self.action[g].apply(e) != e for g in kernel):
                    continue
                val = sq.rational_value()
                if val == 0:
                    continue
                cls = squarefree_reduce(val)
                if cls.is_one():
                    continue
                labels[kernel] = cls
                break
        return labels

    def _monomials(self) -> list[FieldElement]:
        base = [self.nf.one()]
        for e in self.embeddings.values():
            powers = []
            p = self.nf.one()
            for _ in range(self.nf.degree):
                powers.append(p)
                p = p * e
            base = [x * q for x in base for q in powers]
        # deterministic order, smallest supports first
        return base

    def validate(self) -> list[dict]:
        """Structural validation report; raises CertificateError on hard
        failures (a witness-provenance norm fact that does not recompute)."""
        report = []
        for emb_name, e in self.embeddings.items():
            if e.is_zero():
                raise CertificateError(f"certificate {self.name}: embedding {emb_name} is zero")
        for fact in self.norm_facts:
            H, emb = self.subgroup_of(fact.subgroup)
            autos = [self.action[emb[h]] for h in H.elements()]
            desc = f"normfact on <{','.join(self.group.label(g) for g in fact.subgroup)}>"
            if fact.provenance == "witness":
                if fact.witness is None:
                    raise CertificateError(f"certificate {self.name}: {desc} lacks its witness")
                if not fact.is_norm:
                    raise CertificateError(
                        f"certificate {self.name}: {desc} has a witness but claims non-norm"
                    )
                if relative_norm(fact.witness, autos) != fact.element:
                    raise CertificateError(
                        f"certificate {self.name}: {desc} witness does not recompute"
                    )
                report.append({"fact": desc, "status": "verified-witness"})
            else:
                report.append({"fact": desc, "status": "oracle", "note": fact.note})
        for lam in self.lambda_witnesses:
            desc = f"lambda on <{','.join(self.group.label(g) for g in lam.subgroup)}>"
            report.append({"fact": desc, "status": "provided"})
        return report


def search_norm_witness(cert: ExtensionCertificate, fact: NormFact,
                        height: int = 3) -> Optional[FieldElement]:
    """Bounded search for w with relative norm equal to fact.element.

    Candidates are small rational multiples of monomials in the embedded
    elements, plus vectors supported on at most two power-basis coordinates
    with numerators and denominators up to the height.  Only isNorm facts can
    be upgraded; non-norm facts have no finite witness."""
    if not fact.is_norm:
        return None
    H, emb = cert.subgroup_of(fact.subgroup)
    autos = [cert.action[emb[h]] for h in H.elements()]

    def norm(w):
        out = cert.nf.one()
        for phi in autos:
            out = out * phi.apply(w)
        return out

    scalars = sorted(
        {Fraction(n, d) for n in range(-height, height + 1) if n
         for d in range(1, height + 1)},
        key=lambda f: (abs(f), f < 0),
    )
    candidates = []
    for m in cert._monomials():
        if not m.is_zero():
            candidates.append(m)
    deg = cert.nf.degree
    for i in range(deg):
        for j in range(i + 1, deg):
            for ci in scalars:
                for cj in scalars:
                    coords = [Fraction(0)] * deg
                    coords[i], coords[j] = ci, cj
                    candidates.append(cert.nf.element(coords))
    for cand in candidates:
        for c in scalars:
            w = cand.scale(c)
            if norm(w) == fact.element:
                return w
    return None


def upgrade_norm_facts(cert: ExtensionCertificate, height: int = 3) -> ExtensionCertificate:
    """Replace oracle isNorm=true facts by witness-provenance facts when the
    bounded search finds an explicit element; everything else is kept."""
    upgraded = []
    for fact in cert.norm_facts:
        if fact.provenance == "oracle" and fact.is_norm:
            w = search_norm_witness(cert, fact, height)
            if w is not None:
                upgraded.append(NormFact(fact.subgroup, fact.element, True,
                                         "witness", witness=w, note=fact.note))
                continue
        upgraded.append(fact)
    return ExtensionCertificate(cert.name, cert.nf, cert.group, cert.action,
                                cert.embeddings, cert.ram_support,
                                cert.lambda_witnesses, upgraded)


# ---------------------------------------------------------------------------
# obligations and verdicts


@dataclass(frozen=True)
class NormQuestion:
    """Is `element` a norm of M over the quadratic subfield K(sqrt(subfield))?
    subfield None means the base field K itself."""

    extension: str
    subfield: Optional[SquareClass]
    element: Fraction

    def describe(self) -> str:
        where = "the base field" if self.subfield is None else f"Q(sqrt {self.subfield.value})"
        return f"NormQuestion({self.extension}, {where}, {self.element})"


@dataclass(frozen=True)
class ExtensionExistenceQuestion:
    shape: str
    constraints: tuple[tuple[str, str], ...]

    def describe(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self.constraints)
        return f"ExtensionExistenceQuestion({self.shape}: {inner})"


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class Candidate:
    shape: str
    params: dict
    checks: list[Check]
    outcome: str  # "witness" | "refuted" | "needs-certificate"
    obligations: list = field(default_factory=list)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


@dataclass
class ShapeCase:
    shape: str
    outcome: str  # "witness" | "refuted" | "undecided"
    reason: str
    candidates: list[Candidate] = field(default_factory=list)


@dataclass
class Witness:
    shape: str
    params: dict
    gamma: GammaClass
    certificate: Optional[str] = None
    verification: str = "recomputed-closed-form"


@dataclass
class Verdict:
    outcome: str  # "defined" | "not-defined" | "undecided"
    witness: Optional[Witness]
    case_log: list[ShapeCase]
    obligations: list
    certificate_reports: list[dict] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {"defined": 0, "not-defined": 1, "undecided": 2}[self.outcome]


# ---------------------------------------------------------------------------
# restriction, K_P, minimal fields


def restrict_gamma(gamma: GammaClass, K: PolyquadraticField) -> GammaClass:
    """Read a rational class over K: characters collapse modulo K's squares
    and the sign part trivializes exactly when K splits it."""
    if not isinstance(gamma.sign, SymbolicSign):
        raise TypeError("restriction needs a symbolic sign component")
    pbar = gamma.pbar.rebase(K)
    if splits_over(gamma.sign.ram, K):
        sign = SymbolicSign(TRIVIAL_CLASS, gamma.sign.symbols)
    else:
        sign = SymbolicSign(gamma.sign.ram, gamma.sign.symbols)
    return GammaClass(pbar, sign, K)


def kp_field(pbar: PMorphism) -> PolyquadraticField:
    """The fixed field of the kernel: the multiquadratic span of the
    canonical characters.  Restriction over it trivializes the morphism and
    over no subfield spanned by a proper subset of the basis."""
    gens = span_basis(pbar.character_classes())
    K = PolyquadraticField(gens)
    if not pbar.rebase(K).is_trivial():
        raise AssertionError("K_P does not trivialize its own morphism")
    for cut in range(len(gens)):
        sub = PolyquadraticField(gens[:cut] + gens[cut + 1 :])
        if pbar.rebase(sub).is_trivial():
            raise AssertionError("K_P is not minimal")
    return K


@dataclass
class MinimalFieldsReport:
    kp: PolyquadraticField
    kp_splits_sign: bool
    minimum: Optional[PolyquadraticField]
    fields: tuple[PolyquadraticField, ...]


def minimal_fields_with_endos(gamma: GammaClass) -> MinimalFieldsReport:
    """K_P, and the minimal polyquadratic fields of definition of the variety
    together with its endomorphisms: K_P itself when it splits the sign part,
    else the fields K_P(sqrt u) over quadratic splitters u supported on the
    ramified places."""
    if gamma.base != QQ:
        raise ValueError("minimal-field analysis applies to classes over Q")
    kp = kp_field(gamma.pbar)
    ram = gamma.sign.ram
    if splits_over(ram, kp):
        return MinimalFieldsReport(kp, True, kp, (kp,))
    finite = sorted(v.p for v in ram.ramified if not v.is_infinite)
    fields = []
    for signbit in (1, -1):
        for r in range(len(finite) + 1):
            for combo in itertools.combinations(finite, r):
                u = signbit
                for p in combo:
                    u *= p
                cls = SquareClass(u) if u != 1 else None
                if cls is None or cls.is_one():
                    continue
                if all(not is_local_square(cls, v) for v in ram.ramified):
                    extended = kp.adjoin(cls)
                    if extended != kp and extended not in fields:
                        fields.append(extended)
    fields.sort(key=lambda f: (len(f.generators), tuple(g.value for g in f.generators)))
    return MinimalFieldsReport(kp, False, None, tuple(fields))


# ---------------------------------------------------------------------------
# identification of cocycle-form sign components


@dataclass
class IdentifyResult:
    outcome: str  # "identified" | "undecided"
    ram: Optional[QuaternionClass]
    obligations: list
    facts: list[dict]


def _subfield_of(K: PolyquadraticField, label: SquareClass) -> PolyquadraticField:
    return K.adjoin(label)


def identify_brauer_class(c: TwoCocycle, cert: ExtensionCertificate,
                          K: PolyquadraticField) -> IdentifyResult:
    """Pin down the Brauer class over K of a {+-1} cocycle on Gal(M/K) by
    eliminating candidate ramification sets.

    Candidates are the even subsets of {oo} + the declared discriminant
    support of M.  Quadratic subfields K' of M eliminate candidates through
    a verified lambda witness (the restriction is then trivial over K'),
    through a trivial finite-level restriction, or through a norm fact
    answering the cyclic-algebra criterion for -1.  Exactly one survivor is
    an identification; several survivors come back as norm questions on the
    discriminating subfields.
    """
    if c.group != cert.group:
        raise CertificateError("cocycle and certificate live on different groups")
    facts: list[dict] = []
    places = [INFINITY] + [Place(p) for p in cert.ram_support]
    candidates = []
    for r in range(0, len(places) + 1, 2):
        for combo in itertools.combinations(places, r):
            candidates.append(QuaternionClass(frozenset(combo)))

    labels = cert.quadratic_subfield_labels()
    restrictions: list[tuple[Optional[SquareClass], tuple[int, ...], TwoCocycle, FiniteGroup, tuple[int, ...]]] = []
    for kernel in cert.index_two_subgroups():
        if kernel not in labels:
            facts.append({"fact": f"subgroup {kernel}", "status": "no-quadratic-label"})
            continue
        H, emb = cert.subgroup_of(kernel)
        restrictions.append((labels[kernel], kernel, restrict_cocycle(c, H, emb), H, emb))
    # the whole group, for norm facts about M/K itself
    Gall, emball = cert.subgroup_of(cert.group.generators)
    restrictions.append((None, tuple(cert.group.elements()), restrict_cocycle(c, Gall, emball), Gall, emball))

    def kprime(label: Optional[SquareClass]) -> PolyquadraticField:
        return K if label is None else _subfield_of(K, label)

    surviving = list(candidates)

    def eliminate(keep_split: bool, label, why: str):
        nonlocal surviving
        field_ = kprime(label)
        surviving = [q for q in surviving if splits_over(q, field_) == keep_split]
        facts.append({"fact": why, "status": "used",
                      "subfield": "K" if label is None else f"K(sqrt {label.value})"})

    for label, kernel, rcoc, H, emb in restrictions:
        # decidable finite-level triviality
        if label is not None and pm_coboundary_witness(rcoc) is not None:
            eliminate(True, label, "restriction is a finite-level coboundary")
            continue
        for lam in cert.lambda_witnesses:
            Hl, embl = cert.subgroup_of(lam.subgroup)
            if tuple(embl) != tuple(emb):
                continue
            act = tuple(cert.action[embl[h]] for h in Hl.elements())
            if verify_unit_coboundary(rcoc, lam.values, act):
                facts.append({"fact": f"lambda witness on {kernel}", "status": "verified"})
                eliminate(True, label, "lambda witness trivializes the restriction")
            else:
                facts.append({"fact": f"lambda witness on {kernel}", "status": "failed-verification"})
        is_cyclic = any(H.element_order(h) == H.order for h in H.elements())
        if not is_cyclic:
            continue
        nontrivial = pm_coboundary_witness(rcoc) is None
        if not nontrivial:
            continue
        # the restriction is the nontrivial class of H^2(cyclic, {+-1}):
        # the cyclic algebra criterion applies with element -1
        for fact in cert.norm_facts:
            Hf, embf = cert.subgroup_of(fact.subgroup)
            if tuple(embf) != tuple(emb):
                continue
            if not (fact.element.is_rational() and fact.element.rational_value() == -1):
                facts.append({"fact": f"norm fact on {kernel}", "status": "ignored-element"})
                continue
            eliminate(fact.is_norm, label,
                      f"norm fact: -1 {'is' if fact.is_norm else 'is not'} a norm")

    if not surviving:
        raise CertificateError("certificate facts eliminated every candidate class")
    if len(surviving) == 1:
        return IdentifyResult("identified", surviving[0], [], facts)

    obligations = []
    answered = set()
    for fact in cert.norm_facts:
        _, embf = cert.subgroup_of(fact.subgroup)
        answered.add(tuple(embf))
    for label, kernel, rcoc, H, emb in restrictions:
        if tuple(emb) in answered:
            continue
        is_cyclic = any(H.element_order(h) == H.order for h in H.elements())
        if not is_cyclic or pm_coboundary_witness(rcoc) is not None:
            continue
        fld = kprime(label)
        outcomes = {splits_over(q, fld) for q in surviving}
        if len(outcomes) == 2:
            obligations.append(NormQuestion(cert.name, label, Fraction(-1)))
    return IdentifyResult("undecided", None, obligations, facts)


# ---------------------------------------------------------------------------
# the solvability helper for symbols with one free slot


@dataclass
class SymbolSolve:
    solutions: list[SquareClass]
    refuted: bool
    reason: str


def _aux_place(K: PolyquadraticField, u: SquareClass, avoid: set[Place], bound: int = 1000) -> Optional[Place]:
    # a place killed by K where u is also a nonsquare, outside `avoid`
    from .qarith import is_prime

    candidates = [INFINITY] + [Place(p) for p in range(2, bound) if is_prime(p)]
    for v in candidates:
        if v in avoid:
            continue
        if field_is_local_point(K, v):
            continue
        if is_local_square(u, v):
            continue
        return v
    return None


def solve_symbol_equation(u: SquareClass, target: QuaternionClass,
                          K: PolyquadraticField,
                          forbidden: Sequence[SquareClass] = ()) -> SymbolSolve:
    """Find rational t with (u,t) equal to `target` over K, t a nonsquare in
    K and not congruent to any forbidden class.

    The refutation branch is sound: a place of the target not killed by K
    must be cancelled by (u,t), which ramifies only where u is a local
    nonsquare, and over Q the cancellation must be exact.
    """
    must_cancel = [v for v in target.sorted_places() if field_is_local_point(K, v)]
    for v in must_cancel:
        if is_local_square(u, v):
            return SymbolSolve([], True,
                               f"place {v} of the target is not killed by the field and "
                               f"(u,t) with u={u.value} is always split there")
    ram_wanted = set(must_cancel)
    if len(ram_wanted) % 2:
        aux = _aux_place(K, u, avoid=set(target.sorted_places()))
        if aux is None:
            if K.is_rational:
                return SymbolSolve([], True,
                                   "odd number of places to cancel and Q kills nothing")
            return SymbolSolve([], True, "no auxiliary place found for parity")
        ram_wanted.add(aux)
    R = QuaternionClass(frozenset(ram_wanted))

    support = {2}
    support |= {p for p in u.primes() if p != 2}
    support |= {v.p for v in R.ramified if not v.is_infinite}
    extras = [None] + [p for p in (3, 5, 7, 11, 13) if p not in support][:3]
    solutions: list[SquareClass] = []
    for extra in extras:
        primes = sorted(support | ({extra} if extra else set()))
        cands = []
        for r in range(len(primes) + 1):
            for combo in itertools.combinations(primes, r):
                val = 1
                for p in combo:
                    val *= p
                for s in (1, -1):
                    if s * val != 1:
                        cands.append(SquareClass(s * val))
        cands.sort(key=lambda c: (abs(c.value), c.value < 0))
        for t in cands:
            if K.is_square(t):
                continue
            if any(K.reduce(t) == K.reduce(f) for f in forbidden):
                continue
            if ramification_set(QuaternionSymbol(u, t)) == R:
                solutions.append(t)
        if solutions:
            return SymbolSolve(solutions, False, "")
    raise RuntimeError(
        f"symbol equation (u={u.value}, target={target}) is solvable but the bounded "
        f"search found no representative; widen the support"
    )


# ---------------------------------------------------------------------------
# shape searches


def _sign_product(*symbols: QuaternionSymbol) -> QuaternionClass:
    out = TRIVIAL_CLASS
    for s in symbols:
        out = out * ramification_set(s)
    return out


def _v4_sign_class(s: SquareClass, t: SquareClass, a: SquareClass, b: SquareClass) -> QuaternionClass:
    """delta(psi)_pm for a Klein image: (s,t) * (s, sign a) * (t, sign b).

    This is the closed form before the positive-a normalization, so it makes
    sense for every sign pattern."""
    parts = [QuaternionSymbol(s, t)]
    if a.value < 0:
        parts.append(QuaternionSymbol(s, SquareClass(-1)))
    if b.value < 0:
        parts.append(QuaternionSymbol(t, SquareClass(-1)))
    return _sign_product(*parts)


def _distinct_nonsquares(K: PolyquadraticField, *classes: SquareClass) -> Optional[str]:
    for c in classes:
        if K.is_square(c):
            return f"{c.value} is a square in {K}"
    reduced = [K.reduce(c) for c in classes]
    if len(set(reduced)) != len(reduced):
        return "character classes coincide over the base field"
    return None


def _smallest_nonsquare(K: PolyquadraticField, forbidden: Sequence[SquareClass] = ()) -> SquareClass:
    for n in (2, 3, 5, -1, 7, -2, 11, 13, -3, 17, 19, 23):
        c = SquareClass(n)
        if K.is_square(c):
            continue
        if any(K.reduce(c) == K.reduce(f) for f in forbidden):
            continue
        return c
    raise RuntimeError("no small nonsquare found")


def _shape_case_C2(gamma: GammaClass, gK: GammaClass, B: QuaternionSymbol,
                   K: PolyquadraticField, forced_t: Optional[SquareClass] = None):
    """The C2 search: the canonical pbar pins (t, |b|); with a trivial pbar
    only b = -1 remains and t is solved from the sign equation (or is the
    forced relative generator in the endomorphism-preserving variant)."""
    from .delta import delta_C2

    target = gamma.sign.ram
    canon = gK.pbar.canonical()
    cands: list[Candidate] = []

    def finish():
        for cand in cands:
            if cand.outcome == "witness":
                t = SquareClass(cand.params["t"])
                b = SquareClass(cand.params["b"])
                g = delta_C2(t, b, B, K)
                assert g.pbar == gK.pbar
                assert classes_equal_over(g.sign.ram, target, K)
                w = Witness("C2", cand.params, g)
                return ShapeCase("C2", "witness",
                                 f"t={t.value}, b={b.value}", cands), w
        reasons = "; ".join(
            f"({cand.params}): " + ", ".join(c.detail for c in cand.failures())
            for cand in cands
        ) or "pbar shape mismatch"
        return ShapeCase("C2", "refuted", reasons, cands), None

    if len(canon) > 1:
        cands.append(Candidate("C2", {},
                               [Check("pbar-shape", False,
                                      f"pbar has {len(canon)} independent characters, C2 allows one")],
                               "refuted"))
        return finish()

    if len(canon) == 1:
        t, absb = canon[0]
        if forced_t is not None and K.reduce(t) != K.reduce(forced_t):
            cands.append(Candidate("C2", {"t": t.value},
                                   [Check("relative-generator", False,
                                          f"pbar character {t.value} differs from the forced "
                                          f"relative generator {forced_t.value}")],
                                   "refuted"))
            return finish()
        for bsign in (1, -1):
            b = SquareClass(bsign * absb.value)
            checks = []
            emb = embeds_as_maximal_subfield(b, B)
            checks.append(Check("maximal-subfield", emb,
                                f"Q(sqrt {b.value}) {'is' if emb else 'is not'} a maximal subfield of B"))
            cls = TRIVIAL_CLASS if b.value > 0 else _sign_product(QuaternionSymbol(t, SquareClass(-1)))
            ok = classes_equal_over(cls, target, K)
            checks.append(Check("sign-class", ok,
                                f"delta_pm = (t,{'1' if b.value > 0 else '-1'}) = {cls} vs gamma_pm {target}"
                                + ("" if ok else ": sign class mismatch")))
            cands.append(Candidate("C2", {"t": t.value, "b": b.value}, checks,
                                   "witness" if (emb and ok) else "refuted"))
        return finish()

    # trivial pbar over K: |b| = 1
    cands.append(Candidate("C2", {"b": 1},
                           [Check("maximal-subfield", False,
                                  "b = 1 spans no quadratic subfield")], "refuted"))
    b = SquareClass(-1)
    checks = []
    emb = embeds_as_maximal_subfield(b, B)
    checks.append(Check("maximal-subfield", emb,
                        f"Q(i) {'is' if emb else 'is not'} a maximal subfield of B"))
    if not emb:
        cands.append(Candidate("C2", {"b": -1}, checks, "refuted"))
        return finish()
    if forced_t is not None:
        cls = _sign_product(QuaternionSymbol(forced_t, SquareClass(-1)))
        ok = classes_equal_over(cls, target, K)
        checks.append(Check("sign-class", ok,
                            f"delta_pm = (t,-1) = {cls} vs gamma_pm {target}"
                            + ("" if ok else ": sign class mismatch")))
        cands.append(Candidate("C2", {"t": forced_t.value, "b": -1}, checks,
                               "witness" if ok else "refuted"))
        return finish()
    solve = solve_symbol_equation(SquareClass(-1), target, K)
    if solve.refuted:
        checks.append(Check("sign-class", False,
                            f"no rational t gives (t,-1) = gamma_pm over {K}: {solve.reason}"))
        cands.append(Candidate("C2", {"b": -1}, checks, "refuted"))
    else:
        t = solve.solutions[0]
        checks.append(Check("sign-class", True,
                            f"t = {t.value} solves (t,-1) = gamma_pm over {K}"))
        cands.append(Candidate("C2", {"t": t.value, "b": -1}, checks, "witness"))
    return finish()


def _v4_plans(canon, K: PolyquadraticField):
    """Slot assignments of the canonical characters to (s, t, st).

    Yields ("concrete", s, t, |a|, |b|), ("family-t-free", s, |a|) with
    |b| = 1, ("family-st", c, Q) with s free and t = s*c, or
    ("invalid", why)."""
    chars = [(t, d.value) for t, d in canon]
    k = len(chars)
    if k == 0:
        yield ("invalid", "trivial pbar forces a = 1, which is a square")
        return
    if k > 3:
        yield ("invalid", f"{k} independent characters exceed the rank of a Klein image")
        return
    if k == 1:
        (c, Q) = chars[0]
        yield ("family-t-free", c, Q)
        yield ("invalid", "assignment with |a| = 1: a must be a positive nonsquare")
        yield ("family-st", c, Q)
        return
    if k == 2:
        (c1, Q1), (c2, Q2) = chars
        yield ("concrete", c1, c2, Q1, Q2)
        yield ("concrete", c2, c1, Q2, Q1)
        yield ("concrete", c1, c1 * c2, Q1 * Q2, Q2)
        yield ("concrete", c2, c1 * c2, Q1 * Q2, Q1)
        yield ("concrete", c1 * c2, c1, Q2, Q1 * Q2)
        yield ("concrete", c1 * c2, c2, Q1, Q1 * Q2)
        return
    (c1, Q1), (c2, Q2), (c3, Q3) = chars
    prod = c1 * c2 * c3
    if not K.is_square(prod):
        yield ("invalid", "three characters that do not multiply to 1: rank exceeds 2")
        return
    for s_idx, t_idx, st_idx in itertools.permutations(range(3)):
        cs, Qs = chars[s_idx]
        ct, Qt = chars[t_idx]
        _, Qst = chars[st_idx]
        yield ("concrete", cs, ct, Qs * Qst, Qt * Qst)


def _shape_case_C2xC2(gamma: GammaClass, gK: GammaClass, B: QuaternionSymbol,
                      K: PolyquadraticField):
    from .delta import delta_C2xC2

    target = gamma.sign.ram
    canon = gK.pbar.canonical()
    cands: list[Candidate] = []
    witness = None
    seen = set()

    def eval_concrete(s, t, amag, bmag):
        nonlocal witness
        key = (K.reduce(s), K.reduce(t), amag, bmag)
        if key in seen:
            return
        seen.add(key)
        reason = _distinct_nonsquares(K, s, t, s * t)
        if reason:
            cands.append(Candidate("C2xC2", {"s": s.value, "t": t.value},
                                   [Check("characters", False, reason)], "refuted"))
            return
        for asign, bsign in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            a = SquareClass(asign * amag)
            b = SquareClass(bsign * bmag)
            checks = []
            compat = ramification_set(QuaternionSymbol(a, b)) == ramification_set(B)
            checks.append(Check("algebra", compat,
                                f"(a,b) = ({a.value},{b.value}) is {'isomorphic' if compat else 'not isomorphic'} to B"))
            cls = _v4_sign_class(s, t, a, b)
            ok = classes_equal_over(cls, target, K)
            checks.append(Check("sign-class", ok,
                                f"delta_pm = {cls} vs gamma_pm {target}"
                                + ("" if ok else ": sign class mismatch")))
            state = "witness" if (compat and ok) else "refuted"
            cands.append(Candidate("C2xC2",
                                   {"s": s.value, "t": t.value, "a": a.value, "b": b.value},
                                   checks, state))
            if state == "witness" and witness is None:
                if a.value > 0:
                    g = delta_C2xC2(s, t, a, b, B, K)
                else:
                    g = GammaClass(PMorphism([(s, a.abs), (t, b.abs)], K),
                                   SymbolicSign(cls), K)
                assert g.pbar == gK.pbar
                assert classes_equal_over(g.sign.ram, target, K)
                witness = Witness("C2xC2",
                                  {"s": s.value, "t": t.value, "a": a.value, "b": b.value}, g)

    for plan in _v4_plans(canon, K):
        if witness is not None:
            break
        kind = plan[0]
        if kind == "invalid":
            cands.append(Candidate("C2xC2", {}, [Check("pbar-shape", False, plan[1])], "refuted"))
        elif kind == "concrete":
            _, s, t, amag, bmag = plan
            eval_concrete(s, t, amag, bmag)
        elif kind == "family-t-free":
            _, s, amag = plan
            if K.is_square(s):
                cands.append(Candidate("C2xC2", {"s": s.value},
                                       [Check("characters", False, "s is a square over the base")],
                                       "refuted"))
                continue
            a = SquareClass(amag)
            for b in (SquareClass(1), SquareClass(-1)):
                checks = []
                if b.is_one():
                    checks.append(Check("algebra", False, "(a,1) is split, B is division"))
                    cands.append(Candidate("C2xC2", {"s": s.value, "a": a.value, "b": 1},
                                           checks, "refuted"))
                    continue
                compat = ramification_set(QuaternionSymbol(a, b)) == ramification_set(B)
                checks.append(Check("algebra", compat,
                                    f"(a,b) = ({a.value},-1) is {'isomorphic' if compat else 'not isomorphic'} to B"))
                if not compat:
                    cands.append(Candidate("C2xC2", {"s": s.value, "a": a.value, "b": -1},
                                           checks, "refuted"))
                    continue
                # delta_pm = (s,t)(t,-1) = (t,-s): solve for t
                solve = solve_symbol_equation(SquareClass(-1) * s, target, K, forbidden=[s])
                if solve.refuted:
                    checks.append(Check("sign-class", False,
                                        f"no t with (t,-s) = gamma_pm over {K}: {solve.reason}"))
                    cands.append(Candidate("C2xC2", {"s": s.value, "a": a.value, "b": -1},
                                           checks, "refuted"))
                else:
                    t = solve.solutions[0]
                    checks.append(Check("sign-class", True,
                                        f"t = {t.value} solves (t,-s) = gamma_pm over {K}"))
                    eval_concrete(s, t, amag, 1)
        elif kind == "family-st":
            _, c, Q = plan
            a = SquareClass(Q)
            for bsign in (1, -1):
                b = SquareClass(bsign * Q)
                compat = ramification_set(QuaternionSymbol(a, b)) == ramification_set(B)
                checks = [Check("algebra", compat,
                                f"(a,b) = ({a.value},{b.value}) is {'isomorphic' if compat else 'not isomorphic'} to B")]
                if not compat:
                    cands.append(Candidate("C2xC2", {"st": c.value, "a": a.value, "b": b.value},
                                           checks, "refuted"))
                    continue
                # delta_pm = (s, -c sign b) * (c, sign b): solve for s
                u = c * SquareClass(-bsign)
                rhs = target
                if bsign < 0:
                    rhs = rhs * _sign_product(QuaternionSymbol(c, SquareClass(-1)))
                solve = solve_symbol_equation(u, rhs, K, forbidden=[c])
                if solve.refuted:
                    checks.append(Check("sign-class", False,
                                        f"no s with (s,{u.value}) matching gamma_pm over {K}: {solve.reason}"))
                    cands.append(Candidate("C2xC2", {"st": c.value, "a": a.value, "b": b.value},
                                           checks, "refuted"))
                else:
                    for s in solve.solutions[:4]:
                        eval_concrete(s, s * c, Q, Q)
                        if witness is not None:
                            break

    if witness is not None:
        return ShapeCase("C2xC2", "witness",
                         f"s={witness.params['s']}, t={witness.params['t']}, "
                         f"a={witness.params['a']}, b={witness.params['b']}", cands), witness
    return ShapeCase("C2xC2", "refuted",
                     "all Klein-image candidates refuted", cands), None


def _shape_case_C3(gamma: GammaClass, gK: GammaClass, K: PolyquadraticField):
    cand = Candidate("C3", {},
                     [Check("class", False,
                            "odd cyclic images give only the trivial class, but the "
                            "restriction of gamma to the base field is nontrivial")],
                     "refuted")
    return ShapeCase("C3", "refuted", cand.checks[0].detail, [cand]), None


def _cyclic_even_kernel(n: int) -> tuple[int, ...]:
    return tuple(range(0, n, 2))


def _dihedral_sigma_kernel(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def _dihedral_s2t_kernel(n: int) -> tuple[int, ...]:
    return tuple(sorted([i for i in range(0, n, 2)] + [n + i for i in range(0, n, 2)]))


def _label_matches(cert_label: Optional[SquareClass], cls: SquareClass,
                   K: PolyquadraticField) -> bool:
    return cert_label is not None and K.is_square(cert_label * cls)


def _shape_case_Cn(n: int, gamma: GammaClass, gK: GammaClass, B: QuaternionSymbol,
                   K: PolyquadraticField, certs: Sequence[ExtensionCertificate]):
    from .groups import cyclic_group

    shape = f"C{n}"
    target = gamma.sign.ram
    alpha = cn_alpha(n)
    canon = gK.pbar.canonical()
    cands: list[Candidate] = []
    obligations: list = []

    if len(canon) != 1:
        why = ("pbar is trivial but a surjective cyclic image forces the value alpha"
               if not canon else f"pbar has {len(canon)} characters, the cyclic shape allows one")
        cands.append(Candidate(shape, {}, [Check("pbar-shape", False, why)], "refuted"))
        return ShapeCase(shape, "refuted", why, cands), None

    t, val = canon[0]
    if val.value != alpha.value:
        why = (f"pbar value {val.value} is not congruent to alpha = {alpha.value} "
               f"(mod squares) for {shape}")
        cands.append(Candidate(shape, {"t": t.value},
                               [Check("alpha", False, why)], "refuted"))
        return ShapeCase(shape, "refuted", why, cands), None

    checks = [Check("alpha", True, f"pbar = (t,{alpha.value}) with t = {t.value}")]
    if n == 6:
        # the restriction to K(sqrt t) has image C3 with trivial class
        Kt = K.adjoin(t)
        ok = splits_over(target, Kt)
        checks.append(Check("odd-part", ok,
                            f"gamma_pm {'dies' if ok else 'survives'} over K(sqrt {t.value}), "
                            f"where the image restricts to C3"))
        if not ok:
            cands.append(Candidate(shape, {"t": t.value}, checks, "refuted"))
            return ShapeCase(shape, "refuted", checks[-1].detail, cands), None

    matching = []
    for cert in certs:
        if cert.group != cyclic_group(n):
            continue
        label = cert.quadratic_subfield_labels().get(_cyclic_even_kernel(n))
        if _label_matches(label, t, K):
            matching.append(cert)
    if not matching:
        ob = ExtensionExistenceQuestion(shape, (
            ("base", str(K)), ("t", str(t.value)), ("alpha", str(alpha.value)),
            ("required_sign_class", str(target)),
        ))
        cands.append(Candidate(shape, {"t": t.value}, checks, "needs-certificate", [ob]))
        return ShapeCase(shape, "undecided",
                         f"no cyclic degree-{n} certificate over K(sqrt {t.value})",
                         cands), None

    for cert in matching:
        res = identify_brauer_class(build_cn_sign_cocycle(n), cert, K)
        local = list(checks)
        if res.outcome == "identified":
            ok = classes_equal_over(res.ram, target, K)
            local.append(Check("sign-class", ok,
                               f"certificate {cert.name}: sign class {res.ram} vs gamma_pm {target}"
                               + ("" if ok else ": sign class mismatch")))
            state = "witness" if ok else "refuted"
            cands.append(Candidate(shape, {"t": t.value, "certificate": cert.name}, local, state))
            if ok:
                from .delta import delta_Cn

                g = delta_Cn(n, t, K, M=cert.name)
                w = Witness(shape, {"t": t.value}, g, certificate=cert.name)
                return ShapeCase(shape, "witness",
                                 f"t={t.value} via certificate {cert.name}", cands), w
        else:
            local.append(Check("sign-class", False,
                               f"certificate {cert.name} does not pin the sign class"))
            cands.append(Candidate(shape, {"t": t.value, "certificate": cert.name},
                                   local, "needs-certificate", res.obligations))
            obligations.extend(res.obligations)

    if obligations:
        return ShapeCase(shape, "undecided", "certificate elimination incomplete", cands), None
    return ShapeCase(shape, "refuted", "all certified candidates mismatch the sign class",
                     cands), None


def _shape_case_D6(gamma: GammaClass, gK: GammaClass, B: QuaternionSymbol,
                   K: PolyquadraticField):
    from .delta import delta_D2n

    shape = "D6"
    target = gamma.sign.ram
    d = d2n_d(3)
    canon = gK.pbar.canonical()
    cands: list[Candidate] = []

    def try_candidate(t: Optional[SquareClass], b: SquareClass):
        checks = []
        compat = ramification_set(QuaternionSymbol(d, b)) == ramification_set(B)
        checks.append(Check("algebra", compat,
                            f"(d,b) = ({d.value},{b.value}) is {'isomorphic' if compat else 'not isomorphic'} to B"))
        ok = splits_over(target, K)
        checks.append(Check("sign-class", ok,
                            "odd dihedral images have trivial sign part; gamma_pm "
                            + ("dies over the base" if ok else f"= {target} survives: sign class mismatch")))
        params = {"b": b.value}
        if t is not None:
            params["t"] = t.value
        state = "witness" if (compat and ok and t is not None) else "refuted"
        cands.append(Candidate(shape, params, checks, state))
        return state == "witness"

    if len(canon) > 1:
        why = f"pbar has {len(canon)} characters, the odd dihedral shape allows one"
        cands.append(Candidate(shape, {}, [Check("pbar-shape", False, why)], "refuted"))
        return ShapeCase(shape, "refuted", why, cands), None

    if len(canon) == 1:
        t, absb = canon[0]
        for bsign in (1, -1):
            if try_candidate(t, SquareClass(bsign * absb.value)):
                b = SquareClass(bsign * absb.value)
                g = delta_D2n(3, None, t, b, B, K)
                assert g.pbar == gK.pbar
                return (ShapeCase(shape, "witness", f"t={t.value}, b={b.value}", cands),
                        Witness(shape, {"t": t.value, "b": b.value}, g))
    else:
        cands.append(Candidate(shape, {"b": 1},
                               [Check("algebra", False, "(d,1) is split, B is division")],
                               "refuted"))
        b = SquareClass(-1)
        compat = ramification_set(QuaternionSymbol(d, b)) == ramification_set(B)
        if compat and splits_over(target, K):
            t = _smallest_nonsquare(K)
            try_candidate(t, b)
            g = delta_D2n(3, None, t, b, B, K)
            return (ShapeCase(shape, "witness", f"t={t.value}, b=-1", cands),
                    Witness(shape, {"t": t.value, "b": -1}, g))
        try_candidate(None, b)

    return ShapeCase(shape, "refuted", "all odd dihedral candidates refuted", cands), None


def _d2n_plans(canon, alpha: int, K: PolyquadraticField):
    """Assignments for the even dihedral pbar (s, alpha)(t, b): like the Klein
    case but the a-side value is pinned to alpha."""
    chars = [(t, d.value) for t, d in canon]
    k = len(chars)
    if k == 0:
        yield ("invalid", f"pbar is trivial but the rotation part contributes the "
                          f"nontrivial value alpha = {alpha}")
        return
    if k > 3:
        yield ("invalid", f"{k} independent characters exceed the rank of a dihedral image")
        return
    if k == 1:
        (c, Q) = chars[0]
        if Q == alpha:
            yield ("family-t-free", c, Q)
            yield ("family-st", c, Q)
        else:
            yield ("invalid", f"alpha-side value would be {Q}, not congruent to alpha = {alpha}")
        yield ("invalid", "assignment with |a| = 1 contradicts the alpha value")
        return
    if k == 2:
        (c1, Q1), (c2, Q2) = chars
        for s, t, amag, bmag in (
            (c1, c2, Q1, Q2),
            (c2, c1, Q2, Q1),
            (c1, c1 * c2, Q1 * Q2, Q2),
            (c2, c1 * c2, Q1 * Q2, Q1),
            (c1 * c2, c1, Q2, Q1 * Q2),
            (c1 * c2, c2, Q1, Q1 * Q2),
        ):
            if amag == alpha:
                yield ("concrete", s, t, amag, bmag)
            else:
                yield ("invalid", f"alpha-side value {amag} is not congruent to alpha = {alpha}")
        return
    (c1, Q1), (c2, Q2), (c3, Q3) = chars
    prod = c1 * c2 * c3
    if not K.is_square(prod):
        yield ("invalid", "three characters that do not multiply to 1: rank exceeds 2")
        return
    for s_idx, t_idx, st_idx in itertools.permutations(range(3)):
        cs, Qs = chars[s_idx]
        ct, Qt = chars[t_idx]
        _, Qst = chars[st_idx]
        if Qs * Qst == alpha:
            yield ("concrete", cs, ct, Qs * Qst, Qt * Qst)
        else:
            yield ("invalid", f"alpha-side value {Qs * Qst} is not congruent to alpha = {alpha}")


def _shape_case_D2n(n: int, gamma: GammaClass, gK: GammaClass, B: QuaternionSymbol,
                    K: PolyquadraticField, certs: Sequence[ExtensionCertificate]):
    from .groups import dihedral_group

    shape = f"D{2*n}"
    target = gamma.sign.ram
    alpha = cn_alpha(n).value
    d = d2n_d(n)
    canon = gK.pbar.canonical()
    cands: list[Candidate] = []
    obligations: list = []
    witness = None

    def matching_certs(s: Optional[SquareClass], t: Optional[SquareClass]):
        out = []
        for cert in certs:
            if cert.group != dihedral_group(n):
                continue
            labels = cert.quadratic_subfield_labels()
            s_label = labels.get(_dihedral_s2t_kernel(n))
            t_label = labels.get(_dihedral_sigma_kernel(n))
            if s is not None and not _label_matches(s_label, s, K):
                continue
            if t is not None and not _label_matches(t_label, t, K):
                continue
            out.append((cert, s_label, t_label))
        return out

    def eval_concrete(s: SquareClass, t: SquareClass, b: SquareClass):
        nonlocal witness
        checks = []
        reason = _distinct_nonsquares(K, s, t, s * t)
        if reason:
            cands.append(Candidate(shape, {"s": s.value, "t": t.value},
                                   [Check("characters", False, reason)], "refuted"))
            return
        compat = ramification_set(QuaternionSymbol(d, b)) == ramification_set(B)
        checks.append(Check("algebra", compat,
                            f"(d,b) = ({d.value},{b.value}) is {'isomorphic' if compat else 'not isomorphic'} to B"))
        if not compat:
            cands.append(Candidate(shape, {"s": s.value, "t": t.value, "b": b.value},
                                   checks, "refuted"))
            return
        if n == 6:
            Ks = K.adjoin(s)
            ok = splits_over(target, Ks)
            checks.append(Check("odd-part", ok,
                                f"gamma_pm {'dies' if ok else 'survives'} over K(sqrt {s.value}), "
                                f"where the image restricts to the odd dihedral D6"))
            if not ok:
                cands.append(Candidate(shape, {"s": s.value, "t": t.value, "b": b.value},
                                       checks, "refuted"))
                return
        found = matching_certs(s, t)
        if not found:
            ob = ExtensionExistenceQuestion(shape, (
                ("base", str(K)), ("s", str(s.value)), ("t", str(t.value)),
                ("b", str(b.value)), ("required_sign_class", str(target)),
            ))
            cands.append(Candidate(shape, {"s": s.value, "t": t.value, "b": b.value},
                                   checks, "needs-certificate", [ob]))
            obligations.append(ob)
            return
        for cert, _, _ in found:
            local = list(checks)
            _, _, c_pm = build_d2n_cocycles(n, b)
            res = identify_brauer_class(c_pm, cert, K)
            if res.outcome == "identified":
                ok = classes_equal_over(res.ram, target, K)
                local.append(Check("sign-class", ok,
                                   f"certificate {cert.name}: sign class {res.ram} vs gamma_pm {target}"
                                   + ("" if ok else ": sign class mismatch")))
                state = "witness" if ok else "refuted"
                cands.append(Candidate(shape,
                                       {"s": s.value, "t": t.value, "b": b.value,
                                        "certificate": cert.name}, local, state))
                if ok and witness is None:
                    from .delta import delta_D2n

                    g = delta_D2n(n, s, t, b, B, K, M=cert.name)
                    assert g.pbar == gK.pbar
                    witness = Witness(shape,
                                      {"s": s.value, "t": t.value, "b": b.value}, g,
                                      certificate=cert.name)
                    return
            else:
                local.append(Check("sign-class", False,
                                   f"certificate {cert.name} does not pin the sign class"))
                cands.append(Candidate(shape,
                                       {"s": s.value, "t": t.value, "b": b.value,
                                        "certificate": cert.name}, local,
                                       "needs-certificate", res.obligations))
                obligations.extend(res.obligations)

    for plan in _d2n_plans(canon, alpha, K):
        if witness is not None:
            break
        kind = plan[0]
        if kind == "invalid":
            cands.append(Candidate(shape, {}, [Check("pbar-shape", False, plan[1])], "refuted"))
        elif kind == "concrete":
            _, s, t, _, bmag = plan
            for bsign in (1, -1):
                eval_concrete(s, t, SquareClass(bsign * bmag))
                if witness is not None:
                    break
        elif kind == "family-t-free":
            _, s, _ = plan
            for bsign in (1, -1):
                b = SquareClass(bsign)
                if b.is_one():
                    cands.append(Candidate(shape, {"s": s.value, "b": 1},
                                           [Check("algebra", False, "(d,1) is split, B is division")],
                                           "refuted"))
                    continue
                compat = ramification_set(QuaternionSymbol(d, b)) == ramification_set(B)
                if not compat:
                    cands.append(Candidate(shape, {"s": s.value, "b": b.value},
                                           [Check("algebra", False,
                                                  f"(d,b) = ({d.value},{b.value}) is not isomorphic to B")],
                                           "refuted"))
                    continue
                found = matching_certs(s, None)
                if not found:
                    ob = ExtensionExistenceQuestion(shape, (
                        ("base", str(K)), ("s", str(s.value)), ("b", str(b.value)),
                        ("t", "free"), ("required_sign_class", str(target)),
                    ))
                    cands.append(Candidate(shape, {"s": s.value, "b": b.value},
                                           [Check("algebra", True, "algebra matches")],
                                           "needs-certificate", [ob]))
                    obligations.append(ob)
                    continue
                for cert, _, t_label in found:
                    if t_label is None or K.is_square(t_label) or K.is_square(t_label * s):
                        continue
                    eval_concrete(s, t_label, b)
                    if witness is not None:
                        break
        elif kind == "family-st":
            _, c, Q = plan
            for bsign in (1, -1):
                b = SquareClass(bsign * Q)
                compat = ramification_set(QuaternionSymbol(d, b)) == ramification_set(B)
                if not compat:
                    cands.append(Candidate(shape, {"st": c.value, "b": b.value},
                                           [Check("algebra", False,
                                                  f"(d,b) = ({d.value},{b.value}) is not isomorphic to B")],
                                           "refuted"))
                    continue
                found = []
                for cert in certs:
                    if cert.group != dihedral_group(n):
                        continue
                    labels = cert.quadratic_subfield_labels()
                    s_label = labels.get(_dihedral_s2t_kernel(n))
                    t_label = labels.get(_dihedral_sigma_kernel(n))
                    if s_label is None or t_label is None:
                        continue
                    if K.is_square(s_label * t_label * c):
                        found.append((cert, s_label, t_label))
                if not found:
                    ob = ExtensionExistenceQuestion(shape, (
                        ("base", str(K)), ("st", str(c.value)), ("b", str(b.value)),
                        ("s", "free"), ("required_sign_class", str(target)),
                    ))
                    cands.append(Candidate(shape, {"st": c.value, "b": b.value},
                                           [Check("algebra", True, "algebra matches")],
                                           "needs-certificate", [ob]))
                    obligations.append(ob)
                    continue
                for cert, s_label, _ in found:
                    eval_concrete(s_label, s_label * c, b)
                    if witness is not None:
                        break

    if witness is not None:
        return ShapeCase(shape, "witness",
                         f"s={witness.params['s']}, t={witness.params['t']}, "
                         f"b={witness.params['b']} via certificate {witness.certificate}",
                         cands), witness
    if obligations:
        return ShapeCase(shape, "undecided",
                         "surviving candidates need extension certificates", cands), None
    return ShapeCase(shape, "refuted", "all dihedral candidates refuted", cands), None


# ---------------------------------------------------------------------------
# the decision procedures


def decide(gamma: GammaClass, B: QuaternionSymbol, K: PolyquadraticField,
           certs: Sequence[ExtensionCertificate] = (),
           verify_witness: bool = False) -> Verdict:
    """Decide whether K is a field of definition up to isogeny for a building
    block with obstruction class gamma and endomorphism algebra B.

    Both components trivial over K is the endomorphism-preserving descent.
    Otherwise the admissible image shapes are searched in a fixed order;
    certificates feed the even cyclic and dihedral sign identifications.
    """
    if gamma.base != QQ:
        raise ValueError("decide expects an obstruction class over Q")
    if not isinstance(gamma.sign, SymbolicSign):
        raise TypeError("table classes carry symbolic sign components")
    if ramification_set(B).is_trivial():
        raise ValueError("B is split: not a quaternionic building block")

    cert_reports = []
    for cert in certs:
        cert_reports.extend(cert.validate())

    gK = restrict_gamma(gamma, K)
    target = gamma.sign.ram
    if gK.pbar.is_trivial() and splits_over(target, K):
        w = Witness("trivial", {}, trivial_gamma(K),
                    verification="restriction of gamma is trivial")
        return Verdict("defined", w, [], [], cert_reports)

    adm = admissible_subgroups(B)
    case_log: list[ShapeCase] = []
    obligations: list = []
    witness: Optional[Witness] = None
    for shape in adm.shapes():
        if shape == "C2":
            case, w = _shape_case_C2(gamma, gK, B, K)
        elif shape == "C2xC2":
            case, w = _shape_case_C2xC2(gamma, gK, B, K)
        elif shape == "C3":
            case, w = _shape_case_C3(gamma, gK, K)
        elif shape in ("C4", "C6"):
            case, w = _shape_case_Cn(int(shape[1]), gamma, gK, B, K, certs)
        elif shape == "D6":
            case, w = _shape_case_D6(gamma, gK, B, K)
        else:
            case, w = _shape_case_D2n(int(shape[1:]) // 2, gamma, gK, B, K, certs)
        case_log.append(case)
        if w is not None:
            witness = w
            break
        if case.outcome == "undecided":
            for cand in case.candidates:
                obligations.extend(cand.obligations)

    if witness is not None:
        if verify_witness:
            witness.verification = bruteforce_verify_witness(witness, B, K)
        return Verdict("defined", witness, case_log, [], cert_reports)
    if obligations:
        uniq = []
        for ob in obligations:
            if ob not in uniq:
                uniq.append(ob)
        return Verdict("undecided", None, case_log, uniq, cert_reports)
    return Verdict("not-defined", None, case_log, [], cert_reports)


def _relative_classes(Kmin: PolyquadraticField, L: PolyquadraticField) -> list[SquareClass]:
    rel = set()
    for w in Kmin.square_class_group():
        r = L.reduce(w)
        if not r.is_one():
            rel.add(r)
    return sorted(rel, key=lambda c: (c.value < 0, abs(c.value)))


def decide_with_endos(gamma: GammaClass, B: QuaternionSymbol,
                      Kmin: PolyquadraticField, L: PolyquadraticField,
                      verify_witness: bool = False) -> Verdict:
    """Decide whether the variety descends to L while all endomorphisms stay
    defined over the minimal field Kmin.

    The morphism must factor exactly through Gal(Kmin/L), which is C2 or
    C2xC2; both cases reduce to finitely many symbol comparisons.
    """
    if gamma.base != QQ:
        raise ValueError("decide expects an obstruction class over Q")
    if not Kmin.contains(L):
        raise ValueError("L is not a subfield of Kmin")
    report = minimal_fields_with_endos(gamma)
    if report.minimum is not None:
        if Kmin != report.minimum:
            raise ValueError(
                f"Kmin = {Kmin} is not the minimal endomorphism field {report.minimum}")
    elif Kmin not in report.fields:
        raise ValueError(f"Kmin = {Kmin} is not a minimal endomorphism field")

    rel = _relative_classes(Kmin, L)
    target = gamma.sign.ram
    gL = restrict_gamma(gamma, L)

    if len(rel) == 0:
        if not (gL.pbar.is_trivial() and splits_over(target, L)):
            raise AssertionError("Kmin fails to trivialize gamma despite minimality")
        w = Witness("trivial", {}, trivial_gamma(L),
                    verification="L equals the minimal endomorphism field")
        return Verdict("defined", w, [], [])
    if len(rel) == 1:
        case, w = _shape_case_C2(gamma, gL, B, L, forced_t=rel[0])
        if w is not None:
            if verify_witness:
                w.verification = bruteforce_verify_witness(w, B, L)
            return Verdict("defined", w, [case], [])
        return Verdict("not-defined", None, [case], [])
    if len(rel) != 3:
        raise ValueError("Gal(Kmin/L) must be C2 or C2xC2 for endomorphism-preserving descent")

    s, t = rel[0], rel[1]
    canon = gL.pbar.canonical()
    for char, _ in canon:
        if all(not L.is_square(char * c) for c in rel):
            raise AssertionError("pbar does not factor through Gal(Kmin/L)")
    a_mag = 1
    b_mag = 1
    for char, val in canon:
        if not L.is_square(char * t):  # sigma (fixing sqrt t) moves sqrt(char)
            a_mag *= val.value
        if not L.is_square(char * s):  # tau (fixing sqrt s) moves sqrt(char)
            b_mag *= val.value

    cands: list[Candidate] = []
    witness = None
    for asign, bsign in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        a = SquareClass(asign * a_mag)
        b = SquareClass(bsign * b_mag)
        checks = []
        if a.is_one() or b.is_one():
            checks.append(Check("algebra", False,
                                f"(a,b) = ({a.value},{b.value}) has a square entry, the algebra splits"))
            cands.append(Candidate("C2xC2", {"s": s.value, "t": t.value,
                                             "a": a.value, "b": b.value}, checks, "refuted"))
            continue
        compat = ramification_set(QuaternionSymbol(a, b)) == ramification_set(B)
        checks.append(Check("algebra", compat,
                            f"(a,b) = ({a.value},{b.value}) is {'isomorphic' if compat else 'not isomorphic'} to B"))
        cls = _v4_sign_class(s, t, a, b)
        ok = classes_equal_over(cls, target, L)
        checks.append(Check("sign-class", ok,
                            f"delta_pm = {cls} vs gamma_pm {target}"
                            + ("" if ok else ": sign class mismatch")))
        state = "witness" if (compat and ok) else "refuted"
        cands.append(Candidate("C2xC2", {"s": s.value, "t": t.value,
                                         "a": a.value, "b": b.value}, checks, state))
        if state == "witness" and witness is None:
            if a.value > 0:
                from .delta import delta_C2xC2

                g = delta_C2xC2(s, t, a, b, B, L)
            else:
                g = GammaClass(PMorphism([(s, a.abs), (t, b.abs)], L),
                               SymbolicSign(cls), L)
            witness = Witness("C2xC2", {"s": s.value, "t": t.value,
                                        "a": a.value, "b": b.value}, g)

    case = ShapeCase("C2xC2",
                     "witness" if witness else "refuted",
                     "endomorphism-preserving Klein search over Gal(Kmin/L)",
                     cands)
    if witness is not None:
        if verify_witness:
            witness.verification = bruteforce_verify_witness(witness, B, L)
        return Verdict("defined", witness, [case], [])
    return Verdict("not-defined", None, [case], [])


# ---------------------------------------------------------------------------
# brute-force witness verification


def _presentation_with(a_req: int, B: QuaternionSymbol) -> Optional[QuaternionSymbol]:
    ramB = ramification_set(B)
    candidates = sorted((n for n in range(-40, 41) if n), key=lambda n: (abs(n), n < 0))
    for w in candidates:
        cls = squarefree_reduce(w)
        if cls.is_one() and w != 1:
            continue
        sym = QuaternionSymbol(SquareClass(a_req), cls)
        if ramification_set(sym) == ramB:
            return sym
    return None


def bruteforce_verify_witness(witness: Witness, B: QuaternionSymbol,
                              K: PolyquadraticField) -> str:
    """Recompute delta(psi) for a Defined witness from explicit quaternion
    elements and compare with the closed-form components.

    Returns a short status string; raises on a genuine mismatch."""
    from .groups import cyclic_group, dihedral_group, klein_group

    shape = witness.shape
    params = witness.params
    if shape == "trivial":
        return "trivial witness, nothing to recompute"
    if shape == "C2":
        b = SquareClass(params["b"])
        y = find_element_with_square(B, b.value)
        if y is None:
            return "skipped: no explicit square root found at search height"
        C2 = cyclic_group(2)
        brute = delta_bruteforce(C2, [one(B), y])
        sign, p = decompose_two_torsion(brute)
        if p[1] != b.abs:
            raise RuntimeError("brute-force P/P^2 part disagrees with the witness")
        t = SquareClass(params["t"])
        cls = (TRIVIAL_CLASS if pm_coboundary_witness(sign) is not None
               else ramification_set(QuaternionSymbol(t, SquareClass(-1))))
        if not classes_equal_over(cls, witness.gamma.sign.ram, K):
            raise RuntimeError("brute-force sign class disagrees with the witness")
        return "verified-bruteforce"
    if shape == "C2xC2":
        from .delta import klein_cocycles
        from .cocycle import cocycle_product

        a = SquareClass(params["a"])
        b = SquareClass(params["b"])
        x = find_element_with_square(B, a.value)
        if x is None:
            return "skipped: no explicit square root found at search height"
        y = find_anticommuting_with(x, b.value)
        if y is None:
            return "skipped: no anticommuting partner found at search height"
        V = klein_group()
        brute = delta_bruteforce(V, klein_lifts(V, x, y))
        gsa, gtb, gst = klein_cocycles(a.value, b.value)
        expected = cocycle_product(cocycle_product(gst, gsa), gtb)
        if brute.values != expected.values:
            raise RuntimeError("brute-force Klein table disagrees with the closed form")
        _, p = decompose_two_torsion(brute)
        if p[1] != a.abs or p[2] != b.abs:
            raise RuntimeError("brute-force P/P^2 part disagrees with the witness")
        return "verified-bruteforce"
    if shape in ("C4", "C6", "C3", "D6", "D8", "D12"):
        n = {"C3": 3, "C4": 4, "C6": 6, "D6": 3, "D8": 4, "D12": 6}[shape]
        pres = _presentation_with(-1 if n == 4 else -3, B)
        if pres is None:
            return "skipped: no presentation with a in {-1,-3} at search height"
        zeta = make_zeta(n, pres)
        x = one(pres) + zeta
        if shape.startswith("C"):
            G = cyclic_group(n)
            brute = delta_bruteforce(G, cyclic_lifts(G, x))
            sign, p = decompose_two_torsion(brute)
            if shape != "C3" and sign.values != build_cn_sign_cocycle(n).values:
                raise RuntimeError("brute-force sign table disagrees with the cyclic form")
            alpha = cn_alpha(n)
            if p[1] != alpha.abs:
                raise RuntimeError("brute-force P/P^2 part disagrees with alpha")
            return "verified-bruteforce"
        b = SquareClass(params["b"])
        y = find_anticommuting_with(pure(pres, 1, 0, 0), b.value)
        if y is None:
            return "skipped: no dihedral reflection lift found at search height"
        G = dihedral_group(n)
        brute = delta_bruteforce(G, dihedral_lifts(G, x, y))
        from .cocycle import cocycle_product

        gamma_b, e, c_pm = build_d2n_cocycles(n, b)
        expected = cocycle_product(gamma_b, e)
        if brute.values != expected.values:
            raise RuntimeError("brute-force dihedral table disagrees with gamma_b * e")
        sign, _ = decompose_two_torsion(brute)
        if n != 3 and sign.values != c_pm.values:
            raise RuntimeError("brute-force sign table disagrees with c_pm")
        return "verified-bruteforce"
    return f"skipped: no brute-force route for shape {shape}"
