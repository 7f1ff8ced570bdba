"""Integral homology of the normalized chain complex via Smith normal form."""
from __future__ import annotations

from dataclasses import dataclass, field

from .simplicial import FinSSet, TruncationError


@dataclass(frozen=True)
class Group:
    """Finitely generated abelian group Z^rank + sum Z/t."""
    rank: int
    torsion: tuple = field(default_factory=tuple)

    def __str__(self) -> str:
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def smith_diagonal(rows: list[list[int]]) -> list[int]:
    """Nonzero elementary divisors (d_1 | d_2 | ...) of an integer matrix."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for r in a[t:]:
                            r[j] -= q * r[t]
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # divisibility: fold any non-multiple into the pivot row
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p), None)
                if bad is None:
                    break
                i = bad[0]
                for j in range(t, n):
                    a[t][j] += a[i][j]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, pi, pj = min(cands)
            a[t], a[pi] = a[pi], a[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def boundary_matrix(x: FinSSet, n: int) -> list[list[int]]:
    """Rows: nondegenerate (n-1)-simplices; columns: nondegenerate n-simplices."""
    rows = {b: k for k, b in enumerate(x.nondeg[n - 1])}
    mat = [[0] * len(x.nondeg[n]) for _ in rows]
    for c, b in enumerate(x.nondeg[n]):
        for i, f in enumerate(x.faces[b]):
            if f.nondegenerate:
                mat[rows[f.base]][c] += -1 if i % 2 else 1
    return mat


def homology(x: FinSSet, top: int) -> list[Group]:
    """``H_0 .. H_top`` of ``x``; needs ``top <= trunc_dim - 1``."""
    if top > x.trunc_dim - 1:
        raise TruncationError(f"H_{top} needs simplices of dimension {top + 1} (trunc_dim {x.trunc_dim})")
    divs = {}
    for n in range(1, top + 2):
        if x.nondeg[n] and x.nondeg[n - 1]:
            divs[n] = smith_diagonal(boundary_matrix(x, n))
        else:
            divs[n] = []
    out = []
    for n in range(top + 1):
        rank_out = len(divs[n]) if n else 0
        rank_in = len(divs[n + 1])
        free = len(x.nondeg[n]) - rank_out - rank_in
        out.append(Group(free, tuple(d for d in divs[n + 1] if d > 1)))
    return out


def betti(x: FinSSet, top: int) -> tuple:
    return tuple(g.rank for g in homology(x, top))
