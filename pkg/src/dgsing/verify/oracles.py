"""Brute-force dimension tables that do not go through the dg engine.

Monomials are enumerated here from scratch; the only shared code is the exact
rank routine.
"""

from __future__ import annotations

from ..exact.fields import QQ
from ..exact.linalg import SparseMatrix, rank


def weighted_monomials(weights, degree):
    """Exponent vectors ``e`` with ``sum e_k weights_k == degree``."""
    if degree < 0:
        return []
    if not weights:
        return [()] if degree == 0 else []
    out = []
    head, rest = weights[0], weights[1:]
    for e in range(degree // head + 1):
        for tail in weighted_monomials(rest, degree - e * head):
            out.append((e,) + tail)
    return out


def _compositions(total, parts):
    if parts == 0:
        return [()] if total == 0 else []
    return [(a,) + t for a in range(total + 1) for t in _compositions(total - a, parts - 1)]


def _ideal_rank(monos, generators, field):
    """Rank of the span of ``generators`` (lists of (monomial, coeff) terms) inside ``span(monos)``."""
    index = {m: k for k, m in enumerate(monos)}
    cols = []
    for terms in generators:
        col = {}
        for m, c in terms:
            col[index[m]] = col.get(index[m], 0) + c
        cols.append(col)
    return rank(SparseMatrix(len(monos), len(cols), cols), field) if cols else 0


def ring_dim(sd, degree):
    return len(weighted_monomials(sd.x_weights, degree))


def quotient_ring_dim(sd, degree, field=QQ):
    """``dim R/(s_1..s_r)`` in x-degree ``degree``."""
    monos = weighted_monomials(sd.x_weights, degree)
    gens = []
    for p, e in zip(sd.s, sd.degrees):
        for m in weighted_monomials(sd.x_weights, degree - e):
            gens.append([(tuple(a + b for a, b in zip(m, q)), c) for q, c in p.items()])
    return len(monos) - _ideal_rank(monos, gens, field)


def _sym_monomials(sd, w, d):
    """Monomials ``x^a y^b`` of ``Sym E`` with ``|b| = w`` and x-degree ``d``."""
    D = max(sd.degrees, default=0)
    ydeg = [D - e for e in sd.degrees]
    out = []
    for b in _compositions(w, sd.r):
        rest = d - sum(k * y for k, y in zip(b, ydeg))
        for a in weighted_monomials(sd.x_weights, rest):
            out.append(a + b)
    return out


def sym_quotient_dim(sd, w, d, field=QQ):
    """``dim (Sym E / (W))`` at weight ``w`` and x-degree ``d``, ``W = sum s_i y_i``."""
    if w < 0:
        return 0
    monos = _sym_monomials(sd, w, d)
    D = max(sd.degrees, default=0)
    gens = []
    n = sd.n
    for m in _sym_monomials(sd, w - 1, d - D) if w >= 1 else []:
        terms = []
        for i, p in enumerate(sd.s):
            for q, c in p.items():
                e = list(m)
                for k in range(n):
                    e[k] += q[k]
                e[n + i] += 1
                terms.append((tuple(e), c))
        gens.append(terms)
    return len(monos) - _ideal_rank(monos, gens, field)


def oracle_quotient_dims(sd, window, field=QQ):
    """Tables keyed by tridegree: ``Sym E/(W)`` at ``h = 0`` and ``R/(s)`` at ``(0, 0, d)``."""
    sym = {}
    for w in range(window.w_range[0], window.w_range[1] + 1):
        for d in range(window.d_range[0], window.d_range[1] + 1):
            sym[(0, w, d)] = sym_quotient_dim(sd, w, d, field)
    quot = {(0, 0, d): quotient_ring_dim(sd, d, field) for d in range(window.d_range[0], window.d_range[1] + 1)}
    return sym, quot


def ring_table(sd, window, weight=0):
    """Monomial counts of ``R`` placed at ``(0, weight, d)``."""
    return {(0, weight, d): ring_dim(sd, d) for d in range(window.d_range[0], window.d_range[1] + 1)}
