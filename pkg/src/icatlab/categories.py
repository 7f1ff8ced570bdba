"""Finite ordinary categories (used as degreewise data and as test shapes)."""
from __future__ import annotations

from typing import Hashable, Iterable, Iterator

from .simplicial import skey


class FinCat:
    """A finite category; ``comp[(f, g)]`` is ``f`` followed by ``g``."""

    def __init__(self, objects, arrows, src: dict, tgt: dict, ident: dict, comp: dict):
        self.objects = list(objects)
        self.arrows = list(arrows)
        self.src = src
        self.tgt = tgt
        self.ident = ident
        self.comp = comp
        self._ids = set(ident.values())
        self._hom: dict = {}
        for a in self.arrows:
            self._hom.setdefault((src[a], tgt[a]), []).append(a)
        self._out: dict = {}
        for a in self.arrows:
            self._out.setdefault(src[a], []).append(a)

    def __repr__(self) -> str:
        return f"FinCat({len(self.objects)} objects, {len(self.arrows)} arrows)"

    def is_identity(self, a) -> bool:
        return a in self._ids

    def hom(self, a, b) -> list:
        return self._hom.get((a, b), [])

    def out_of(self, a) -> list:
        return self._out.get(a, [])

    def composable_chains(self, n: int) -> list[tuple]:
        """All chains of ``n`` composable arrows (n >= 1)."""
        chains = [(a,) for a in self.arrows]
        for _ in range(n - 1):
            chains = [c + (b,) for c in chains for b in self.out_of(self.tgt[c[-1]])]
        return chains

    def inverse(self, a):
        for b in self.hom(self.tgt[a], self.src[a]):
            if self.comp[(a, b)] == self.ident[self.src[a]] and self.comp[(b, a)] == self.ident[self.tgt[a]]:
                return b
        return None

    def is_groupoid(self) -> bool:
        return all(self.inverse(a) is not None for a in self.arrows)

    def validate(self) -> list[str]:
        errs = []
        for x in self.objects:
            i = self.ident.get(x)
            if i is None or self.src[i] != x or self.tgt[i] != x:
                errs.append(f"identity of {x!r}")
        for (f, g), h in self.comp.items():
            if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                errs.append(f"composite endpoints {f!r};{g!r}")
        for f in self.arrows:
            if self.comp.get((self.ident[self.src[f]], f)) != f or self.comp.get((f, self.ident[self.tgt[f]])) != f:
                errs.append(f"unit law at {f!r}")
        for f, g, h in self.composable_chains(3) if self.arrows else []:
            if self.comp[(self.comp[(f, g)], h)] != self.comp[(f, self.comp[(g, h)])]:
                errs.append(f"associativity at {f!r},{g!r},{h!r}")
        for f in self.arrows:
            for g in self.out_of(self.tgt[f]):
                if (f, g) not in self.comp:
                    errs.append(f"missing composite {f!r};{g!r}")
        return errs

    def components(self) -> list[list]:
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x
        for a in self.arrows:
            ra, rb = find(self.src[a]), find(self.tgt[a])
            if ra != rb:
                parent[max(ra, rb, key=skey)] = min(ra, rb, key=skey)
        groups: dict = {}
        for x in self.objects:
            groups.setdefault(find(x), []).append(x)
        return [groups[k] for k in sorted(groups, key=skey)]

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    # ---- constructors
    @classmethod
    def poset(cls, elements: Iterable[Hashable], leq) -> "FinCat":
        els = list(elements)
        arrows = [(a, b) for a in els for b in els if leq(a, b)]
        return cls(els, arrows, {a: a[0] for a in arrows}, {a: a[1] for a in arrows},
                   {x: (x, x) for x in els},
                   {(f, g): (f[0], g[1]) for f in arrows for g in arrows if f[1] == g[0]})

    @classmethod
    def chain(cls, n: int) -> "FinCat":
        """The ordinal [n]."""
        return cls.poset(range(n + 1), lambda a, b: a <= b)

    @classmethod
    def chaotic(cls, elements: Iterable[Hashable]) -> "FinCat":
        """Exactly one arrow between any two objects (I[1] for two objects)."""
        return cls.poset(elements, lambda a, b: True)

    @classmethod
    def discrete(cls, elements: Iterable[Hashable]) -> "FinCat":
        """Only identities; each object is its own identity arrow."""
        els = list(elements)
        same = {x: x for x in els}
        return cls(els, els, same, same, same, {(x, x): x for x in els})

    @classmethod
    def cyclic_group(cls, n: int, obj: Hashable = 0) -> "FinCat":
        arrows = [("g", k) for k in range(n)]
        return cls([obj], arrows, {a: obj for a in arrows}, {a: obj for a in arrows},
                   {obj: ("g", 0)}, {(a, b): ("g", (a[1] + b[1]) % n) for a in arrows for b in arrows})

    @classmethod
    def from_graph_closure(cls, objects, arrows, src, tgt, ident, comp) -> "FinCat":
        return cls(objects, arrows, dict(src), dict(tgt), dict(ident), dict(comp))

    def product(self, other: "FinCat") -> "FinCat":
        obs = [(a, b) for a in self.objects for b in other.objects]
        ars = [(f, g) for f in self.arrows for g in other.arrows]
        comp = {}
        for f, g in ars:
            for f2 in self.out_of(self.tgt[f]):
                for g2 in other.out_of(other.tgt[g]):
                    comp[((f, g), (f2, g2))] = (self.comp[(f, f2)], other.comp[(g, g2)])
        return FinCat(obs, ars, {a: (self.src[a[0]], other.src[a[1]]) for a in ars},
                      {a: (self.tgt[a[0]], other.tgt[a[1]]) for a in ars},
                      {(x, y): (self.ident[x], other.ident[y]) for x, y in obs}, comp)


def coproduct(*cats: FinCat) -> FinCat:
    obs, ars, src, tgt, ident, comp = [], [], {}, {}, {}, {}
    for i, c in enumerate(cats):
        obs += [(i, x) for x in c.objects]
        for a in c.arrows:
            ars.append((i, a))
            src[(i, a)] = (i, c.src[a])
            tgt[(i, a)] = (i, c.tgt[a])
        for x in c.objects:
            ident[(i, x)] = (i, c.ident[x])
        for (f, g), h in c.comp.items():
            comp[((i, f), (i, g))] = (i, h)
    return FinCat(obs, ars, src, tgt, ident, comp)


def enumerate_functors(B: FinCat, C: FinCat) -> Iterator[tuple[dict, dict]]:
    """All functors ``B -> C`` as (object map, arrow map).

    Arrows are placed one at a time, each touching an already placed object,
    so the search follows the shape of ``B`` instead of all object tuples.
    """
    non_id = [a for a in B.arrows if not B.is_identity(a)]
    into: dict = {}
    for a in C.arrows:
        into.setdefault(C.tgt[a], []).append(a)
    order, seen = [], set()
    pending = list(non_id)
    roots = []
    while pending or len(seen) < len(B.objects):
        nxt = next((a for a in pending if B.src[a] in seen or B.tgt[a] in seen), None)
        if nxt is None:
            x = next(o for o in B.objects if o not in seen)
            roots.append(x)
            order.append(("ob", x))
            seen.add(x)
            continue
        pending.remove(nxt)
        order.append(("ar", nxt))
        seen.update((B.src[nxt], B.tgt[nxt]))
    om: dict = {}
    am: dict = {}

    def rec(k):
        if k == len(order):
            full = dict(am)
            full.update({B.ident[x]: C.ident[om[x]] for x in B.objects})
            if all(full[h] == C.comp[(full[f], full[g])] for (f, g), h in B.comp.items()):
                yield dict(om), full
            return
        kind, v = order[k]
        if kind == "ob":
            for y in C.objects:
                om[v] = y
                yield from rec(k + 1)
                del om[v]
            return
        s, t = B.src[v], B.tgt[v]
        if s in om:
            cands = [a for a in C.out_of(om[s]) if t not in om or C.tgt[a] == om[t]]
        else:
            cands = [a for a in into.get(om[t], ()) if s not in om or C.src[a] == om[s]]
        for a in cands:
            new = [x for x, y in ((s, C.src[a]), (t, C.tgt[a])) if x not in om]
            for x, y in ((s, C.src[a]), (t, C.tgt[a])):
                om.setdefault(x, y)
            am[v] = a
            yield from rec(k + 1)
            del am[v]
            for x in new:
                del om[x]
    yield from rec(0)


def functor_key(F: tuple[dict, dict]) -> tuple:
    om, am = F
    return (tuple(sorted(om.items(), key=skey)), tuple(sorted(am.items(), key=skey)))
