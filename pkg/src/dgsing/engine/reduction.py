"""Smaller models of free dg modules, one weight at a time.

In a fixed weight a free module over B, A or A[t^-1] is a finite complex of
free R-modules. Whenever the differential has a constant entry between two
basis elements, the pair can be cancelled (Gaussian elimination), which is a
homotopy equivalence of complexes of graded R-modules: cohomology at every
(h, w, d) is unchanged. What remains has no constant entries, and is usually
far smaller than the original.
"""

from __future__ import annotations

from fractions import Fraction
from operator import add

from ..exact.fields import QQ, PrimeField
from ..exact.linalg import SparseMatrix
from .modules import FreeDgModule, GradedModule


def _fiber_monomials(alg, target_weight):
    """Fiber exponent vectors of total weight ``target_weight``."""
    nb = alg.n_base
    fiber = list(alg.generators[nb:])
    laurent = {i - nb for i in alg.laurent}
    out = []
    acc = [0] * len(fiber)
    if laurent:
        (li,) = laurent
        plain = [k for k in range(len(fiber)) if k != li]
        for mask in range(1 << len(plain)):
            e = [0] * len(fiber)
            w = 0
            for bit, k in enumerate(plain):
                if mask >> bit & 1:
                    e[k] = 1
                    w += fiber[k].w
            q, r = divmod(target_weight - w, fiber[li].w)
            if r == 0:
                e[li] = q
                out.append(tuple(e))
        return sorted(out)
    if not fiber:
        return [()] if target_weight == 0 else []
    sign = 1 if fiber[0].w > 0 else -1
    budget = sign * target_weight
    if budget < 0:
        return []

    def rec(k, rem):
        if k == len(fiber):
            if rem == 0:
                out.append(tuple(acc))
            return
        g = fiber[k]
        aw = abs(g.w)
        top = min(rem // aw, 1) if g.odd else rem // aw
        for e in range(top + 1):
            acc[k] = e
            rec(k + 1, rem - e * aw)
        acc[k] = 0

    rec(0, budget)
    return sorted(out)


class WeightSlice:
    """The weight-``w`` part of a free module as a complex of free R-modules, reduced."""

    def __init__(self, M: FreeDgModule, weight: int, field=QQ):
        self.module = M
        self.weight = weight
        self.field = field
        alg = M.algebra
        nb = alg.n_base
        self.nb = nb
        fiber = alg.generators[nb:]
        elems, degs = [], []
        for j, g in enumerate(M.generators):
            for fe in _fiber_monomials(alg, weight - g.w):
                elems.append((fe, j))
                degs.append((g.h + sum(e * f.h for e, f in zip(fe, fiber)),
                             g.d + sum(e * f.d for e, f in zip(fe, fiber))))
        self.size_before = len(elems)
        index = {e: k for k, e in enumerate(elems)}
        succ = [dict() for _ in elems]
        pad = (0,) * nb
        for a, (fe, j) in enumerate(elems):
            img = M.d_element({(pad + fe, j): 1})
            row = succ[a]
            for (m, k), c in img.items():
                b = index[(m[nb:], k)]
                poly = row.setdefault(b, {})
                xm = m[:nb]
                poly[xm] = poly.get(xm, 0) + c
            for b in [b for b, p in row.items() if not any(p.values())]:
                del row[b]
        self.degrees = degs
        self._eliminate(succ)

    def _eliminate(self, succ):
        n = len(succ)
        zero = (0,) * self.nb
        modular = isinstance(self.field, PrimeField)
        p = self.field.p if modular else None
        pred = [set() for _ in range(n)]
        for a, row in enumerate(succ):
            if modular:
                for b in list(row):
                    poly = {m: c % p for m, c in row[b].items() if c % p}
                    if poly:
                        row[b] = poly
                    else:
                        del row[b]
            for b in row:
                pred[b].add(a)
        alive = [True] * n
        work = list(range(n))
        while work:
            nxt = []
            for a in work:
                if not alive[a]:
                    continue
                row = succ[a]
                b = None
                for cand in sorted(row):
                    poly = row[cand]
                    if zero in poly:
                        b = cand
                        break
                if b is None:
                    continue
                c = row[b][zero]
                inv = pow(c, -1, p) if modular else (c if c in (1, -1) else Fraction(1, 1) / c)
                others = [(q, g) for q, g in row.items() if q != b]
                for src in list(pred[b]):
                    if src == a:
                        continue
                    f = succ[src][b]
                    target = succ[src]
                    for q, g in others:
                        upd = target.get(q)
                        new = dict(upd) if upd else {}
                        for fm, fc in f.items():
                            for gm, gc in g.items():
                                m = tuple(map(add, fm, gm))
                                v = new.get(m, 0) - fc * inv * gc
                                if modular:
                                    v %= p
                                if v:
                                    new[m] = v
                                else:
                                    new.pop(m, None)
                        if new:
                            target[q] = new
                            pred[q].add(src)
                        elif upd is not None:
                            del target[q]
                            pred[q].discard(src)
                    nxt.append(src)
                for x in (a, b):
                    alive[x] = False
                    for q in succ[x]:
                        pred[q].discard(x)
                    for src in pred[x]:
                        succ[src].pop(x, None)
                    succ[x] = {}
                    pred[x] = set()
            work = sorted(set(nxt))
        keep = [k for k in range(n) if alive[k]]
        self.survivors = keep
        self.succ = {k: succ[k] for k in keep}
        self.by_h = {}
        for k in keep:
            self.by_h.setdefault(self.degrees[k][0], []).append(k)

    def basis(self, h, d, R):
        out = []
        for k in self.by_h.get(h, ()):
            for xm in R.xmonomials(d - self.degrees[k][1]):
                out.append((xm, k))
        return out


class ReducedModel(GradedModule):
    """Cohomologically equivalent, smaller stand-in for a free module (per-weight reduction).

    Only ``basis`` and ``differential`` are available; use it for cohomology.
    """

    def __init__(self, M: FreeDgModule, field=QQ, name=None):
        self.module = M
        self.algebra = M.algebra
        self.R = M.algebra.base_ring
        self.field = field
        self.name = name or M.name
        self.valid_weights = M.valid_weights
        self._slices = {}
        self._init_caches()

    def slice(self, w) -> WeightSlice:
        hit = self._slices.get(w)
        if hit is None:
            hit = self._slices[w] = WeightSlice(self.module, w, self.field)
        return hit

    def _basis(self, tri):
        h, w, d = tri
        return self.slice(w).basis(h, d, self.R)

    def _differential(self, tri):
        h, w, d = tri
        sl = self.slice(w)
        src = self.basis(tri)
        idx = self.index((h + 1, w, d))
        cols = []
        for xm, a in src:
            col = {}
            for b, poly in sl.succ[a].items():
                for pm, pc in poly.items():
                    key = idx[(tuple(map(add, xm, pm)), b)]
                    col[key] = col.get(key, 0) + pc
            cols.append(col)
        return SparseMatrix(len(idx), len(src), cols)

    def _multiply(self, elem, tri):
        raise NotImplementedError("a reduced model carries no algebra action")


def reduced_model(M: FreeDgModule, field=QQ) -> ReducedModel:
    """The reduced model of ``M`` over ``field``, built once per module."""
    cache = M.__dict__.setdefault("_reduced_models", {})
    hit = cache.get(field)
    if hit is None:
        hit = cache[field] = ReducedModel(M, field)
    return hit
