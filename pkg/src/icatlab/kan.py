"""Exhaustive horn-lifting probes for maps of finite simplicial sets."""
from __future__ import annotations

from dataclasses import dataclass

from .simplicial import FinSSet, SMap, TruncationError, expr_str


@dataclass
class ProbeResult:
    ok: bool
    max_dim: int
    witness: dict | None = None

    @property
    def verdict(self) -> str:
        return "PASS" if self.ok else "FAIL"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "max_dim": self.max_dim, "witness": self.witness}


def terminal_map(x: FinSSet) -> SMap:
    from .simplicial import point
    pt = point(x.trunc_dim)
    return SMap.constant(x, pt, (0,))


def kan_fibration_probe(p: SMap, max_dim: int) -> ProbeResult:
    """Check every horn ``Lambda^m_k -> E`` over ``Delta[m] -> B`` for ``1 <= m <= max_dim``."""
    E, B = p.source, p.target
    if max_dim > E.trunc_dim or max_dim > B.trunc_dim:
        raise TruncationError("probe dimension exceeds truncation")
    for m in range(1, max_dim + 1):
        lower = E.simplices(m - 1)
        over: dict = {}
        for x in lower:
            over.setdefault(p(x), []).append(x)
        fillers: dict = {}
        for x in E.simplices(m):
            fs = E.all_faces(x)
            for k in range(m + 1):
                fillers.setdefault((k, p(x), fs[:k] + fs[k + 1:]), True)
        for y in B.simplices(m):
            yf = B.all_faces(y)
            for k in range(m + 1):
                slots = [i for i in range(m + 1) if i != k]
                horn: dict = {}

                def rec(t):
                    if t == len(slots):
                        key = (k, y, tuple(horn[i] for i in slots))
                        return None if key in fillers else dict(horn)
                    j = slots[t]
                    for x in over.get(yf[j], ()):
                        # d_i x_j = d_{j-1} x_i for i < j
                        if m > 1 and any(E.face(x, i) != E.face(horn[i], j - 1) for i in slots[:t]):
                            continue
                        horn[j] = x
                        bad = rec(t + 1)
                        if bad is not None:
                            return bad
                        del horn[j]
                    return None

                bad = rec(0)
                if bad is not None:
                    return ProbeResult(False, max_dim, {
                        "dim": m, "k": k, "base": expr_str(y),
                        "horn": {str(i): expr_str(v) for i, v in sorted(bad.items())},
                    })
    return ProbeResult(True, max_dim)


def kan_probe(x: FinSSet, max_dim: int) -> ProbeResult:
    """Kan-complex probe: the map to the point."""
    return kan_fibration_probe(terminal_map(x), max_dim)
