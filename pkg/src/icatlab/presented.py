"""Finitely presented categories and the left adjoint S of the nerve.

Word problems are decided by a bounded congruence closure.  Equality found by
rewriting is a proof; distinctness is only claimed once the closure has produced
a consistent right-action model of the presentation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from .categories import FinCat
from .limits import UnionFind, tuple_simplex
from .simplicial import SMap, id_str, skey
from .sspace import SimpSpace, SSMap, spine_edge

PROVED_EQUAL, PROVED_DISTINCT, UNKNOWN = "PROVED-EQUAL", "PROVED-DISTINCT", "UNKNOWN"


def _wkey(w: tuple) -> tuple:
    return (len(w[1]), skey(w))


@dataclass
class FinPresCat:
    objects: list
    generators: dict  # g -> (src, tgt)
    relations: list  # (src, word, word)
    max_len: int = 8
    closed_at: int | None = None
    uf: UnionFind | None = None
    action: dict = field(default_factory=dict)
    canon: dict = field(default_factory=dict)

    def tgt(self, w: tuple) -> Hashable:
        src, word = w
        return self.generators[word[-1]][1] if word else src

    def _paths(self, L: int) -> list:
        out, frontier = [], [(x, ()) for x in self.objects]
        out.extend(frontier)
        by_src: dict = {}
        for g, (a, _) in self.generators.items():
            by_src.setdefault(a, []).append(g)
        for g in by_src.values():
            g.sort(key=skey)
        for _ in range(L):
            frontier = [(s, w + (g,)) for s, w in frontier for g in by_src.get(self.tgt((s, w)), ())]
            out.extend(frontier)
        return out

    def solve(self) -> bool:
        """Run the closure with growing length bound; True once a model is certified."""
        for L in range(1, self.max_len + 1):
            paths = self._paths(L)
            uf = UnionFind()
            for p in paths:
                uf.add(p)
            pathset = set(paths)
            for src, u, v in self.relations:
                for a, b in ((u, v), (v, u)):
                    n = len(a)
                    for p in paths:
                        s, w = p
                        for i in range(len(w) - n + 1):
                            if w[i:i + n] == a and self._at(p, i) == src:
                                q = (s, w[:i] + b + w[i + n:])
                                if q in pathset:
                                    uf.union(p, q)
            self.uf = uf
            classes = uf.classes()
            reps = {}
            ok = True
            for root, mem in classes.items():
                short = [m for m in mem if len(m[1]) < L]
                if not short:
                    ok = False
                    break
                reps[root] = min(short, key=_wkey)
            if not ok:
                continue
            action = {}
            for root, mem in classes.items():
                for s, w in mem:
                    if len(w) >= L:
                        continue
                    for g, (a, _) in self.generators.items():
                        if a != self.tgt((s, w)):
                            continue
                        r = uf.find((s, w + (g,)))
                        if action.setdefault((root, g), r) != r:
                            ok = False
            if not ok:
                continue
            self.action = action
            self.canon = {root: reps[root] for root in classes}
            for root in classes:
                for src, u, v in self.relations:
                    if self.tgt(self.canon[root]) != src:
                        continue
                    if self._act(root, u) != self._act(root, v):
                        ok = False
            if ok:
                self.closed_at = L
                return True
        self.action, self.canon = {}, {}
        return False

    def _at(self, p: tuple, i: int):
        s, w = p
        return self.tgt((s, w[:i]))

    def _act(self, root, word):
        for g in word:
            root = self.action[(root, g)]
        return root

    @property
    def decided(self) -> bool:
        return self.closed_at is not None

    def normal_form(self, src, word: tuple) -> tuple:
        """Canonical representative (shortest, then least) of ``word`` from ``src``."""
        if not self.decided:
            raise ValueError("presentation not decided within budget")
        return self.canon[self._act(self.uf.find((src, ())), word)]

    def equal(self, src, u: tuple, v: tuple) -> str:
        if self.uf is not None and (src, u) in self.uf.parent and (src, v) in self.uf.parent:
            if self.uf.find((src, u)) == self.uf.find((src, v)):
                return PROVED_EQUAL
        if self.decided:
            return PROVED_EQUAL if self.normal_form(src, u) == self.normal_form(src, v) else PROVED_DISTINCT
        return UNKNOWN

    def category(self) -> FinCat:
        """The presented category (arrows are canonical words ``(src, word)``)."""
        arrows = sorted(set(self.canon.values()), key=_wkey)
        comp = {}
        for f in arrows:
            for g in arrows:
                if self.tgt(f) == g[0]:
                    comp[(f, g)] = self.normal_form(f[0], f[1] + g[1])
        return FinCat(self.objects, arrows, {a: a[0] for a in arrows}, {a: self.tgt(a) for a in arrows},
                      {x: (x, ()) for x in self.objects}, comp)

    def to_json(self) -> dict:
        return {"kind": "fpcat", "objects": [id_str(x) for x in self.objects],
                "generators": {id_str(g): [id_str(a), id_str(b)] for g, (a, b) in sorted(self.generators.items(), key=skey)},
                "relations": [[id_str(s), [id_str(g) for g in u], [id_str(g) for g in v]] for s, u, v in self.relations],
                "decided": self.decided, "closed_at": self.closed_at}


# --- the left adjoint ------------------------------------------------------------------------

class SUnknown(Exception):
    """The word problem of some degree was not decided within the budget."""


def degree_presentation(X: SimpSpace, k: int, max_len: int = 8) -> tuple[FinPresCat, dict]:
    """Free category on ``(X_1)_k => (X_0)_k`` modulo 2-simplices; degenerate edges are identities."""
    L0, L1, L2 = X[0], X[1], X[2]
    s0 = X.s(0, 0)
    degenerate = {s0(x) for x in L0.simplices(k)}
    src, tgt = X.d(1, 1), X.d(1, 0)
    gens = {e: (src(e), tgt(e)) for e in L1.simplices(k) if e not in degenerate}

    def word(e):
        return () if e in degenerate else (e,)
    rels = []
    for t in L2.simplices(k):
        a, b, c = X.d(2, 2)(t), X.d(2, 0)(t), X.d(2, 1)(t)
        lhs, rhs = word(a) + word(b), word(c)
        if lhs != rhs:
            rels.append((src(c), lhs, rhs))
    P = FinPresCat(list(L0.simplices(k)), gens, rels, max_len=max_len)
    return P, {"word": word}


def s_adjoint(X: SimpSpace, max_len: int = 8):
    """``S X`` as an internal category, or raise :class:`SUnknown` naming the degree."""
    from .icat import InternalCat
    D = X.D
    pres, words = {}, {}
    for k in range(D + 1):
        P, aux = degree_presentation(X, k, max_len)
        if not P.solve():
            raise SUnknown(f"degree {k}: word problem undecided up to length {max_len}")
        pres[k] = P
        words[k] = aux["word"]
    cats = {k: pres[k].category() for k in range(D + 1)}
    L0, L1 = X[0], X[1]

    def ob_face(k, x, i):
        return L0.face(x, i)

    def ob_degen(k, x, j):
        return L0.degen(x, j)

    def ar_op(a, fob, far, k2):
        src, w = a
        new = ()
        for e in w:
            new += words[k2](far(e))
        return pres[k2].normal_form(fob(src), new)

    def ar_face(k, a, i):
        return ar_op(a, lambda x: L0.face(x, i), lambda e: L1.face(e, i), k - 1)

    def ar_degen(k, a, j):
        return ar_op(a, lambda x: L0.degen(x, j), lambda e: L1.degen(e, j), k + 1)

    C = InternalCat.from_levels(D, cats.__getitem__, ob_face, ob_degen, ar_face, ar_degen,
                                ob_label=lambda c: c.base)
    C.meta["presentations"] = pres
    C.meta["words"] = words
    return C


def unit_map(X: SimpSpace, SX, NSX: SimpSpace) -> SSMap:
    """``X -> N S X``: each simplex goes to the chain of classes of its spine edges."""
    ez_ob, ez_ar = SX.meta["cells"]
    pres, words = SX.meta["presentations"], SX.meta["words"]
    src = X.d(1, 1)

    def arrow(e):
        k = e.dim
        return ez_ar[(k, pres[k].normal_form(src(e), words[k](e)))]

    maps = []
    for m in range(min(X.M, NSX.M) + 1):
        L = X[m]
        asg = {}
        for b in L.dim_of:
            p = L.point(b)
            if m == 0:
                asg[b] = ez_ob[(p.dim, p)]
            elif m == 1:
                asg[b] = arrow(p)
            else:
                asg[b] = tuple_simplex([arrow(X.outer(spine_edge(m, i), m)(p)) for i in range(m)])
        maps.append(SMap(L, NSX[m], asg))
    return SSMap(X, NSX, maps)


def adjunct(X: SimpSpace, SX, C, phi: SSMap):
    """The internal functor ``S X -> C`` corresponding to ``phi: X -> N C``."""
    from .icat import ICatMap
    ez_ob, ez_ar = SX.meta["cells"]
    cell_ob = {(k, e): c for (k, c), e in ez_ob.items()}
    cell_ar = {(k, e): c for (k, c), e in ez_ar.items()}
    fo = {}
    for b, k in SX.ob.dim_of.items():
        fo[b] = phi[0](cell_ob[(k, SX.ob.point(b))])
    fa = {}
    for b, k in SX.ar.dim_of.items():
        s, w = cell_ar[(k, SX.ar.point(b))]
        cur = C.e(phi[0](s))
        for e in w:
            cur = C.comp(cur, phi[1](e))
        fa[b] = cur
    return ICatMap(SX, C, SMap(SX.ob, C.ob, fo), SMap(SX.ar, C.ar, fa))
