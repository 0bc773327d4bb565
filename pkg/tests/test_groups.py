import pytest

from qdescent.groups import (
    FiniteGroup,
    cyclic_group,
    dihedral_group,
    is_homomorphism,
    klein_group,
    parse_word,
    subgroup,
)


def test_cyclic():
    C1 = cyclic_group(1)
    assert C1.order == 1
    C2 = cyclic_group(2)
    assert C2.mul(1, 1) == 0
    C4 = cyclic_group(4)
    assert C4.mul(2, 3) == 1  # s^2 * s^3 = s
    assert C4.element_order(1) == 4


def test_klein():
    V = klein_group()
    assert V.order == 4
    assert all(V.element_order(g) == 2 for g in range(1, 4))
    s, t = V.generators
    assert V.mul(s, t) == V.mul(t, s)
    assert V.mul(s, s) == 0


def test_dihedral_relations():
    D8 = dihedral_group(4)
    s, t = D8.generators
    st = D8.mul(s, t)
    assert D8.mul(st, st) == 0  # reflections are involutions
    assert D8.mul(s, t) == D8.mul(t, D8.power(s, 3))  # s t = t s^-1
    D6 = dihedral_group(3)
    assert D6.order == 6
    assert not D6.is_abelian()


def test_dihedral_involution_count():
    for n in (3, 4, 5, 6):
        G = dihedral_group(n)
        count = sum(1 for g in G.elements() if g != 0 and G.element_order(g) == 2)
        assert count == (n if n % 2 else n + 1)


def test_subgroup_examples():
    D8 = dihedral_group(4)
    s, t = D8.generators
    H, emb = subgroup(D8, (D8.power(s, 2), t))
    assert H.order == 4
    assert all(H.element_order(g) in (1, 2) for g in H.elements())  # Klein
    # embedding really embeds
    for a in H.elements():
        for b in H.elements():
            assert emb[H.mul(a, b)] == D8.mul(emb[a], emb[b])

    Hs, _ = subgroup(D8, (s,))
    assert Hs.order == 4
    assert Hs.element_order(1) == 4  # C4

    T, embt = subgroup(D8, ())
    assert T.order == 1 and embt == (0,)


def test_subgroup_order_divides():
    D12 = dihedral_group(6)
    for g in D12.elements():
        H, _ = subgroup(D12, (g,))
        assert D12.order % H.order == 0


def test_is_homomorphism():
    C4 = cyclic_group(4)
    C2 = cyclic_group(2)
    assert is_homomorphism(C4, C4, list(range(4)))
    assert is_homomorphism(C4, C2, [0, 0, 0, 0])
    assert is_homomorphism(C4, C2, [g % 2 for g in range(4)])
    assert not is_homomorphism(C4, C2, [0, 1, 1, 0])


def test_constructors_validate():
    # corrupt table caught by the constructor scan
    C3 = cyclic_group(3)
    bad = [list(r) for r in C3.table]
    bad[1][1] = 1
    with pytest.raises(ValueError):
        FiniteGroup(3, tuple(tuple(r) for r in bad), C3.inverse, C3.labels, C3.generators)


def test_parse_word():
    D8 = dihedral_group(4)
    assert parse_word(D8, "1") == 0
    assert parse_word(D8, "s^2") == 2
    assert parse_word(D8, "t") == 4
    assert parse_word(D8, "s^2*t") == 6
    assert parse_word(D8, "s*t") == D8.mul(1, 4)
