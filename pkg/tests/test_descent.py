import random
from fractions import Fraction

import pytest

from qdescent.cli import bundled_example, parse_problem
from qdescent.cocycle import from_function
from qdescent.delta import (
    GammaClass,
    PMorphism,
    SymbolicSign,
    admissible_subgroups,
    build_cn_sign_cocycle,
    build_d2n_cocycles,
    delta_C2,
    delta_C2xC2,
)
from qdescent.descent import (
    CertificateError,
    ExtensionCertificate,
    NormFact,
    NormQuestion,
    bruteforce_verify_witness,
    decide,
    decide_with_endos,
    identify_brauer_class,
    kp_field,
    minimal_fields_with_endos,
    restrict_gamma,
    solve_symbol_equation,
)
from qdescent.qarith import (
    PolyquadraticField,
    QQ,
    QuaternionClass,
    QuaternionSymbol,
    SquareClass,
    classes_equal_over,
    ramification_set,
    squarefree_reduce,
)

B23 = QuaternionSymbol.of(-1, 3)
B25 = QuaternionSymbol.of(-2, 5)


def sc(n):
    return squarefree_reduce(n)


def gam(pairs, ram):
    pbar = PMorphism([(sc(t), sc(d)) for t, d in pairs], QQ)
    return GammaClass(pbar, SymbolicSign(QuaternionClass.of(ram)), QQ)


G243 = gam([(-3, 6)], [])
G60 = gam([(5, 2), (-3, 5)], [3, 5])
G80 = gam([(5, 2), (-1, 3)], [2, 5])
G336 = gam([(-3, 11)], [2, 3])


def cert80():
    return parse_problem(bundled_example("ex80")).certificates[0]


def test_restrict_gamma():
    K = PolyquadraticField([-3])
    r = restrict_gamma(G336, K)
    assert r.pbar.is_trivial()
    assert r.sign.ram.is_trivial()  # {2,3} splits over Q(sqrt -3)
    unchanged = restrict_gamma(G336, QQ)
    assert unchanged.pbar == G336.pbar
    assert unchanged.sign.ram == G336.sign.ram


def test_kp_field_examples():
    assert kp_field(G336.pbar) == PolyquadraticField([-3])
    assert kp_field(G60.pbar) == PolyquadraticField([5, -3])
    assert kp_field(PMorphism((), QQ)) == QQ


def test_kp_minimality_randomized():
    rng = random.Random(83)
    pool = [-1, 2, 3, 5, -3, 7, -7, 6, 10]
    for _ in range(40):
        pairs = [(sc(rng.choice(pool)), sc(rng.choice([2, 3, 5, 6, 7])))
                 for _ in range(rng.randint(0, 3))]
        pbar = PMorphism(pairs, QQ)
        kp = kp_field(pbar)
        assert pbar.rebase(kp).is_trivial()
        # any field trivializing pbar contains kp
        for gens in ([2], [5, -3], [-1, 2], [-3]):
            K = PolyquadraticField(gens)
            if pbar.rebase(K).is_trivial():
                assert K.contains(kp)


def test_minimal_fields():
    rep = minimal_fields_with_endos(G243)
    assert rep.minimum == PolyquadraticField([-3])
    rep80 = minimal_fields_with_endos(G80)
    assert rep80.minimum == PolyquadraticField([5, -1])
    trivial = gam([], [])
    assert minimal_fields_with_endos(trivial).minimum == QQ
    # a class whose kp does not split the sign part: 7 is a square in Q_3
    g = gam([(7, 3)], [3, 5])
    rep2 = minimal_fields_with_endos(g)
    assert not rep2.kp_splits_sign and rep2.minimum is None
    assert rep2.fields
    for f in rep2.fields:
        from qdescent.qarith import splits_over

        assert splits_over(g.sign.ram, f)
        assert f.contains(rep2.kp)


def test_solve_symbol_equation():
    # (t,-1) = class {2,3} over Q: t = 3 works
    res = solve_symbol_equation(sc(-1), QuaternionClass.of([2, 3]), QQ)
    assert not res.refuted
    assert ramification_set(QuaternionSymbol(sc(-1), res.solutions[0])) == QuaternionClass.of([2, 3])
    # {2,5} cannot be hit by (t,-1): -1 is a square in Q_5
    res2 = solve_symbol_equation(sc(-1), QuaternionClass.of([2, 5]), QQ)
    assert res2.refuted
    # and no field helps at 5, where Q(i) has a local point
    res2b = solve_symbol_equation(sc(-1), QuaternionClass.of([2, 5]), PolyquadraticField([-1]))
    assert res2b.refuted
    # over Q(sqrt 2) the {2,3}-class dies, so a trivial (t,-1) does the job
    res3 = solve_symbol_equation(sc(-1), QuaternionClass.of([2, 3]), PolyquadraticField([2]))
    assert not res3.refuted
    t3 = res3.solutions[0]
    assert not PolyquadraticField([2]).is_square(t3)
    assert classes_equal_over(
        ramification_set(QuaternionSymbol(sc(-1), t3)) * QuaternionClass.of([2, 3]),
        QuaternionClass(frozenset()), PolyquadraticField([2]))


def test_identify_brauer_class_ex80():
    cert = cert80()
    _, _, c_pm = build_d2n_cocycles(4, sc(3))
    res = identify_brauer_class(c_pm, cert, QQ)
    assert res.outcome == "identified"
    assert res.ram == QuaternionClass.of([2, 5])

    no_norm = ExtensionCertificate(cert.name, cert.nf, cert.group, cert.action,
                                   cert.embeddings, cert.ram_support,
                                   cert.lambda_witnesses, [])
    res2 = identify_brauer_class(c_pm, no_norm, QQ)
    assert res2.outcome == "undecided"
    assert len(res2.obligations) == 1
    ob = res2.obligations[0]
    assert isinstance(ob, NormQuestion)
    assert ob.subfield == sc(-1) and ob.element == Fraction(-1)

    # constant-1 cocycle identifies as the trivial class
    triv = from_function(cert.group, lambda g, h: 1)
    res3 = identify_brauer_class(triv, cert80(), QQ)
    assert res3.outcome == "identified" and res3.ram.is_trivial()


def test_identify_inconsistent_certificate():
    cert = cert80()
    # two contradictory norm facts on the same subgroup empty the candidates
    bad = ExtensionCertificate(cert.name, cert.nf, cert.group, cert.action,
                               cert.embeddings, cert.ram_support,
                               cert.lambda_witnesses,
                               [NormFact((1,), cert.nf.rational(-1), True, "oracle"),
                                NormFact((1,), cert.nf.rational(-1), False, "oracle")])
    _, _, c_pm = build_d2n_cocycles(4, sc(3))
    with pytest.raises(CertificateError):
        identify_brauer_class(c_pm, bad, QQ)


def test_certificate_validation_rejects_bad_witness():
    cert = cert80()
    bad = ExtensionCertificate(cert.name, cert.nf, cert.group, cert.action,
                               cert.embeddings, cert.ram_support, [],
                               [NormFact((1,), cert.nf.rational(7), True, "witness",
                                         witness=cert.nf.rational(2))])
    with pytest.raises(CertificateError):
        bad.validate()


def test_decide_ex243():
    v = decide(G243, B23, QQ, verify_witness=True)
    assert v.outcome == "defined"
    assert v.witness.shape == "C2"
    assert v.witness.params == {"t": -3, "b": 6}
    assert v.witness.verification == "verified-bruteforce"


def test_decide_ribet_pyle_trivial():
    v = decide(G336, B23, PolyquadraticField([-3]))
    assert v.outcome == "defined" and v.witness.shape == "trivial"


def test_decide_ex336():
    v = decide(G336, B23, QQ)
    assert v.outcome == "not-defined"
    shapes = [case.shape for case in v.case_log]
    assert shapes == list(admissible_subgroups(B23).shapes())
    by_shape = {case.shape: case for case in v.case_log}
    assert "not congruent to alpha = 2" in by_shape["C4"].reason
    assert "not congruent to alpha = 3" in by_shape["C6"].reason
    c2 = by_shape["C2"]
    mismatches = [c for cand in c2.candidates for c in cand.checks
                  if c.name == "sign-class" and not c.passed]
    assert len(mismatches) == 2


def test_decide_ex80_with_certificate():
    v = decide(G80, B23, QQ, certs=[cert80()], verify_witness=True)
    assert v.outcome == "defined"
    assert v.witness.shape == "D8"
    assert v.witness.params == {"s": 5, "t": -1, "b": 3}
    assert v.witness.certificate == "M80"
    assert v.witness.verification == "verified-bruteforce"


def test_decide_ex80_without_certificate():
    v = decide(G80, B23, QQ)
    assert v.outcome == "undecided"
    assert v.obligations
    assert all(ob.shape in ("D8", "D12") for ob in v.obligations)


def test_decide_monotone_under_certificates():
    # adding a certificate resolves undecided and never flips defined verdicts
    assert decide(G80, B23, QQ).outcome == "undecided"
    assert decide(G80, B23, QQ, certs=[cert80()]).outcome == "defined"
    assert decide(G243, B23, QQ, certs=[cert80()]).outcome == "defined"
    v336 = decide(G336, B23, QQ, certs=[cert80()])
    assert v336.outcome == "not-defined"


def test_decide_with_endos_ex60():
    v = decide_with_endos(G60, B25, PolyquadraticField([5, -3]), QQ, verify_witness=True)
    assert v.outcome == "defined"
    assert v.witness.params == {"s": 5, "t": -3, "a": 2, "b": 5}
    assert v.witness.gamma.sign.ram == QuaternionClass.of([3, 5])
    assert v.witness.verification == "verified-bruteforce"


def test_decide_with_endos_ex80():
    v = decide_with_endos(G80, B23, PolyquadraticField([5, -1]), QQ)
    assert v.outcome == "not-defined"
    cands = v.case_log[0].candidates
    assert len(cands) == 4
    pairs = [(c.params["a"], c.params["b"]) for c in cands]
    assert pairs == [(2, 3), (2, -3), (-2, 3), (-2, -3)]
    compatible = [c for c in cands if all(ch.passed for ch in c.checks if ch.name == "algebra")]
    assert len(compatible) == 2
    for c in compatible:
        assert any("sign class mismatch" in ch.detail for ch in c.failures())


def test_decide_with_endos_trivial_and_bad_index():
    v = decide_with_endos(G60, B25, PolyquadraticField([5, -3]), PolyquadraticField([5, -3]))
    assert v.outcome == "defined" and v.witness.shape == "trivial"
    with pytest.raises(ValueError):
        decide_with_endos(G60, B25, PolyquadraticField([5, -3]), PolyquadraticField([7]))
    with pytest.raises(ValueError):
        # Kmin not minimal for the class
        decide_with_endos(G60, B25, PolyquadraticField([5, -3, 7]), QQ)


def test_decide_completeness_on_constructed_classes():
    # classes built by the classifiers must come back Defined
    rng = random.Random(89)
    count = 0
    for _ in range(140):
        B = rng.choice([B23, B25])
        if rng.random() < 0.5:
            b = sc(rng.choice([b for b in range(-20, 21) if b not in (0, 1)]))
            t = sc(rng.choice([t for t in range(-20, 21) if t not in (0,)]))
            if t.is_one():
                continue
            try:
                g = delta_C2(t, b, B, QQ)
            except ValueError:
                continue
        else:
            a = sc(rng.choice([2, 3, 5, 6, 7, 10]))
            b = sc(rng.choice([b for b in range(-20, 21) if b not in (0, 1)]))
            s = sc(rng.choice([5, -3, 7, -1, 2]))
            t = sc(rng.choice([5, -3, 7, -1, 2, -7, 3]))
            try:
                g = delta_C2xC2(s, t, a, b, B, QQ)
            except ValueError:
                continue
        count += 1
        v = decide(g, B, QQ)
        assert v.outcome == "defined", (g.pbar, g.sign)
    assert count >= 25


def test_not_defined_case_log_covers_all_shapes():
    rng = random.Random(97)
    for _ in range(30):
        pairs = [(rng.choice([5, -3, 7, -1]), rng.choice([2, 3, 5, 7, 11]))
                 for _ in range(rng.randint(0, 2))]
        ram = rng.choice([[], [2, 3], [3, 5], [2, 5], [2, 7]])
        g = gam(pairs, ram)
        B = rng.choice([B23, B25])
        v = decide(g, B, QQ)
        if v.outcome == "not-defined":
            assert [c.shape for c in v.case_log] == list(admissible_subgroups(B).shapes())


def test_bruteforce_verify_on_witnesses():
    for g, B, params in [
        (G243, B23, None),
        (gam([(7, 6)], []), B23, None),
    ]:
        v = decide(g, B, QQ)
        if v.outcome == "defined" and v.witness.shape != "trivial":
            status = bruteforce_verify_witness(v.witness, B, QQ)
            assert status == "verified-bruteforce"
