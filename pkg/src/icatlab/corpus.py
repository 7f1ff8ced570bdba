"""Seeded corpora of structurally valid objects.

Everything is built from constructors that cannot produce invalid data
(order closures, group tables, products, cell attachments, Grothendieck
constructions), so no sample is ever rejected.
"""
from __future__ import annotations

import random
from typing import Iterator

from .categories import FinCat, coproduct
from .cells import CellComplex, random_attachment
from .icat import InternalCat, empty_icat, nerve, times_simplex as icat_times_simplex
from .simpcat import GrData, SimpCat, grothendieck, monoid_interval
from .simplicial import FinSSet, Simplex, ordinary_nerve, standard_simplex
from .sspace import SimpSpace, make_F, times_simplex


def random_poset(rng: random.Random, n: int, p: float = 0.4) -> FinCat:
    """The order closure of random upward edges on ``0..n-1``."""
    up = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p}
    reach = {(a, a) for a in range(n)} | up
    for k in range(n):
        for a in range(n):
            for b in range(n):
                if (a, k) in reach and (k, b) in reach:
                    reach.add((a, b))
    return FinCat.poset(range(n), lambda a, b: (a, b) in reach)


def random_groupoid(rng: random.Random) -> FinCat:
    kind = rng.choice(["chaotic", "cyclic", "sum"])
    if kind == "chaotic":
        return FinCat.chaotic(range(rng.randint(1, 3)))
    if kind == "cyclic":
        return FinCat.cyclic_group(rng.randint(1, 3))
    return coproduct(FinCat.chaotic(range(rng.randint(1, 2))), FinCat.cyclic_group(rng.randint(1, 2)))


def random_category(rng: random.Random) -> tuple[str, FinCat]:
    kind = rng.choice(["poset", "groupoid", "discrete", "product"])
    if kind == "poset":
        return kind, random_poset(rng, rng.randint(1, 4))
    if kind == "groupoid":
        return kind, random_groupoid(rng)
    if kind == "discrete":
        return kind, FinCat.discrete(range(rng.randint(1, 3)))
    return kind, random_poset(rng, 2).product(random_groupoid(rng) if rng.random() < 0.5 else FinCat.chain(1))


def _chains(cat: FinCat, D: int) -> set:
    return {b for d in range(1, D + 1) for b in ordinary_nerve(cat, D).nondeg[d]}


def groupoid_grothendieck(D: int = 2) -> GrData:
    """``Z/2`` acting on the nerve of the chaotic groupoid on two objects by swapping them."""
    group = FinCat.cyclic_group(2, obj="*")
    base = SimpCat.from_category(group, D)
    chaotic = FinCat.chaotic([0, 1])
    fiber = ordinary_nerve(chaotic, D)
    fo = {0: 1, 1: 0}
    fa = {(a, b): (1 - a, 1 - b) for a, b in chaotic.arrows}
    chains = _chains(chaotic, D)

    def swap(u: Simplex) -> Simplex:
        b = u.base
        return Simplex(tuple(fa[a] for a in b) if b in chains else fo[b], u.sigma)

    def act(x, y, u, g):
        return swap(u) if g.base == ("g", 1) else u
    return GrData.from_table(base, {"*": fiber}, act)


def constant_grothendieck(cat: FinCat, K: FinSSet, D: int) -> GrData:
    """The constant functor at ``K``."""
    base = SimpCat.from_category(cat, D)
    return GrData.from_table(base, {x: K for x in base.objects}, lambda x, y, u, g: u)


def random_icat(rng: random.Random, D: int = 2) -> tuple[str, InternalCat]:
    kind = rng.choice(["category", "times-simplex", "cell-complex", "grothendieck"])
    if kind == "category":
        sub, cat = random_category(rng)
        return sub, InternalCat.from_category(cat, D)
    if kind == "times-simplex":
        _, cat = random_category(rng)
        return kind, icat_times_simplex(InternalCat.from_category(cat, D), rng.randint(1, min(2, D)))
    if kind == "cell-complex":
        cc = CellComplex(D=D, M=max(2, D))
        for i in range(rng.randint(1, 3)):
            NC = nerve(cc.icat, max(2, D))
            spec = random_attachment(rng, cc.icat, NC, f"c{i}", max_simplices=4, max_n=2)
            cc.attach(spec)
        return kind, cc.icat
    if rng.random() < 0.5:
        return kind, grothendieck(groupoid_grothendieck(D))
    _, cat = random_category(rng)
    return kind, grothendieck(constant_grothendieck(cat, standard_simplex(1, D), D))


def generate(seed: int, count: int, D: int = 2) -> Iterator[tuple[str, object]]:
    """``count`` named objects; the same seed gives the same sequence."""
    rng = random.Random(seed)
    for i in range(count):
        kind, C = random_icat(rng, D)
        yield f"{i:03d}-{kind}", C


# --- the fixed adjunction corpus -----------------------------------------------------------

def _cell(n: int, q: int, M: int, D: int) -> tuple[SimpSpace, InternalCat]:
    X = make_F(n, M, D)
    C = InternalCat.from_category(FinCat.chain(n), D)
    if q:
        return times_simplex(X, standard_simplex(q, D)), icat_times_simplex(C, q)
    return X, C


def adjunction_corpus(M: int = 3, D: int = 2) -> list[tuple[str, SimpSpace, InternalCat]]:
    """Twenty objects, each as a space ``X`` and as an internal category ``C``.

    The cells ``F(n) x Delta[q]`` keep their space form so ``S`` is exercised
    on inputs that are not built as nerves; the rest are nerves.
    """
    out = []
    for n, q in ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)):
        X, C = _cell(n, q, M, D)
        out.append((f"F({n})xD[{q}]", X, C))
    cats = [
        ("empty", None),
        ("discrete2", FinCat.discrete([0, 1])),
        ("discrete3", FinCat.discrete([0, 1, 2])),
        ("vee", FinCat.poset(range(3), lambda a, b: a == b or a == 0)),
        ("wedge", FinCat.poset(range(3), lambda a, b: a == b or b == 0)),
        ("square", FinCat.chain(1).product(FinCat.chain(1))),
        ("zigzag", FinCat.poset(range(4), lambda a, b: a == b or (a % 2 == 0 and abs(a - b) == 1))),
        ("chain1+chain0", coproduct(FinCat.chain(1), FinCat.chain(0))),
        ("I[1]", FinCat.chaotic([0, 1])),
        ("I[2]", FinCat.chaotic([0, 1, 2])),
        ("Z2", FinCat.cyclic_group(2)),
        ("Z3", FinCat.cyclic_group(3)),
        ("Z2+pt", coproduct(FinCat.cyclic_group(2), FinCat.chain(0))),
        ("I[1]xZ2", FinCat.chaotic([0, 1]).product(FinCat.cyclic_group(2))),
    ]
    for name, cat in cats:
        C = empty_icat(D) if cat is None else InternalCat.from_category(cat, D)
        out.append((name, nerve(C, M), C))
    return out


def simpcat_corpus(D: int = 2) -> list[tuple[str, SimpCat]]:
    return [
        ("[0]", SimpCat.from_category(FinCat.chain(0), D)),
        ("[1]", SimpCat.from_category(FinCat.chain(1), D)),
        ("I[1]", SimpCat.from_category(FinCat.chaotic([0, 1]), D)),
        ("Z2", SimpCat.from_category(FinCat.cyclic_group(2), D)),
        ("delta1-monoid", monoid_interval(D)),
    ]
