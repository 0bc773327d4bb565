"""Finite groups as explicit multiplication tables with named generators.

All Galois groups in scope have order at most 12, so construction-time
associativity scans and brute-force closures are free.  Element 0 is always
the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    labels: tuple[str, ...]
    generators: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        _validate(self)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        n, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            n += 1
        return n

    def power(self, g: int, n: int) -> int:
        if n < 0:
            return self.power(self.inv(g), -n)
        out = 0
        for _ in range(n):
            out = self.mul(out, g)
        return out

    def label(self, g: int) -> str:
        return self.labels[g]

    def generator_index(self, label: str) -> int:
        for idx in self.generators:
            if self.labels[idx] == label:
                return idx
        raise KeyError(f"no generator labelled {label!r}")

    def closure(self, gens: tuple[int, ...]) -> list[int]:
        seen = {0}
        frontier = [0]
        while frontier:
            g = frontier.pop()
            for s in gens:
                for h in (self.mul(g, s), self.mul(s, g)):
                    if h not in seen:
                        seen.add(h)
                        frontier.append(h)
        return sorted(seen)

    def is_abelian(self) -> bool:
        return all(
            self.mul(g, h) == self.mul(h, g)
            for g in self.elements()
            for h in self.elements()
        )

    def __repr__(self):
        return self.name or f"group of order {self.order}"


def _validate(G: FiniteGroup) -> None:
    n = G.order
    if len(G.table) != n or any(len(row) != n for row in G.table):
        raise ValueError("multiplication table has wrong shape")
    for g in range(n):
        if G.table[0][g] != g or G.table[g][0] != g:
            raise ValueError("element 0 is not an identity")
    for g in range(n):
        if G.table[g][G.inverse[g]] != 0 or G.table[G.inverse[g]][g] != 0:
            raise ValueError(f"stated inverse of element {g} is wrong")
    for g in range(n):
        for h in range(n):
            for k in range(n):
                if G.table[G.table[g][h]][k] != G.table[g][G.table[h][k]]:
                    raise ValueError(f"associativity fails at ({g},{h},{k})")
    if G.closure(G.generators) != list(range(n)):
        raise ValueError("stated generators do not generate the group")


def _build(order, mul, labels, generators, name) -> FiniteGroup:
    table = tuple(tuple(mul(g, h) for h in range(order)) for g in range(order))
    inverse = []
    for g in range(order):
        inverse.append(next(h for h in range(order) if table[g][h] == 0))
    return FiniteGroup(order, table, tuple(inverse), tuple(labels),
                       tuple(generators), name)


def cyclic_group(n: int) -> FiniteGroup:
    """C_n with generator s; element k means s^k."""
    if n < 1:
        raise ValueError("order must be positive")
    labels = ["1"] + [f"s^{k}" if k > 1 else "s" for k in range(1, n)]
    gens = (1,) if n > 1 else ()
    return _build(n, lambda g, h: (g + h) % n, labels, gens, f"C{n}")


def klein_group() -> FiniteGroup:
    """C2 x C2 with generators s, t; index is the bit pair (s-bit, t-bit)."""
    labels = ["1", "s", "t", "s*t"]
    return _build(4, lambda g, h: g ^ h, labels, (1, 2), "C2xC2")


def dihedral_group(n: int) -> FiniteGroup:
    """D_2n of order 2n: s^n = t^2 = 1, s*t = t*s^{-1}.

    Element i + n*j encodes s^i t^j with 0 <= i < n, j in {0,1}.
    """
    if n < 3:
        raise ValueError("dihedral constructor needs n >= 3")

    def mul(g, h):
        i, j = g % n, g // n
        i2, j2 = h % n, h // n
        i3 = (i + (i2 if j == 0 else -i2)) % n
        return i3 + n * ((j + j2) % 2)

    labels = []
    for j in (0, 1):
        for i in range(n):
            word = "1" if (i, j) == (0, 0) else ""
            if i:
                word = f"s^{i}" if i > 1 else "s"
            if j:
                word = f"{word}*t" if word and word != "1" else "t"
            labels.append(word)
    return _build(2 * n, mul, labels, (1, n), f"D{2*n}")


def subgroup(G: FiniteGroup, gens) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Closure of gens as a FiniteGroup plus its embedding into G.

    Subgroup elements are ordered by their parent index, identity first.
    """
    gens = tuple(gens)
    elems = G.closure(gens)
    position = {g: idx for idx, g in enumerate(elems)}

    def mul(a, b):
        return position[G.mul(elems[a], elems[b])]

    labels = [G.labels[g] for g in elems]
    sub_gens = tuple(sorted(position[g] for g in set(gens))) or ()
    H = _build(len(elems), mul, labels, sub_gens, name=f"<{','.join(G.labels[g] for g in gens)}>")
    return H, tuple(elems)


def is_homomorphism(G: FiniteGroup, H: FiniteGroup, f) -> bool:
    """Whether the element map f (list or callable G -> H) is multiplicative."""
    fm = f if callable(f) else (lambda g: f[g])
    return all(
        fm(G.mul(g, h)) == H.mul(fm(g), fm(h))
        for g in G.elements()
        for h in G.elements()
    )


def parse_word(G: FiniteGroup, word: str) -> int:
    """Element of G from a word in generator labels, e.g. 's^2*t' or 's*t'."""
    word = word.strip()
    if word in ("1", "e", ""):
        return 0
    out = 0
    for part in word.split("*"):
        part = part.strip()
        if "^" in part:
            base, _, exp = part.partition("^")
            g = G.generator_index(base.strip())
            out = G.mul(out, G.power(g, int(exp)))
        else:
            out = G.mul(out, G.generator_index(part))
    return out
