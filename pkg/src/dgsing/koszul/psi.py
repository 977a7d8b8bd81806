"""The structure sheaf of the zero locus with t inverted, and the comparison map onto it."""

from __future__ import annotations

from ..engine.modules import GradedModule, rank_one
from ..engine.windowed import LinearMap, Verdict, Window, check_chain_map, check_quasi_iso
from ..exact.fields import QQ
from ..exact.linalg import SparseMatrix
from .localization import TPeriodicModule, localize_t, reduced_degrees
from .quotient import QuotientBasis
from .section import SectionData, build_base_ring


class LaurentQuotientModule(GradedModule):
    """``R/(s) [t, t^-1]`` with zero differential; ``xi`` acts by zero.

    The piece at ``(h, w, d)`` is ``t^-w`` times the degree ``d - D w`` part of
    ``R/(s)`` when ``h + 2w = 0``, and zero otherwise.
    """

    def __init__(self, sd: SectionData, algebra, field=QQ):
        self.sd = sd
        self.algebra = algebra
        self.field = field
        self.R = build_base_ring(sd)
        self.name = "O_Y[t^-1]"
        self._quot = {}
        self._init_caches()

    def quotient(self, v) -> QuotientBasis:
        hit = self._quot.get(v)
        if hit is None:
            hit = self._quot[v] = QuotientBasis(self.sd, self.R, v, self.field)
        return hit

    def _basis(self, tri):
        u, v = reduced_degrees(tri, self.sd.top_degree)
        if u != 0 or v < 0:
            return ()
        return tuple(self.quotient(v).standard)

    def _differential(self, tri):
        return SparseMatrix(len(self.basis((tri[0] + 1, tri[1], tri[2]))), len(self.basis(tri)))

    def _multiply(self, elem, tri):
        nb = self.algebra.n_base
        deg = elem.tridegree
        out = (tri[0] + deg[0], tri[1] + deg[1], tri[2] + deg[2])
        src, tgt = self.basis(tri), self.basis(out)
        cols = [{} for _ in src]
        if src and tgt:
            quot = self.quotient(reduced_degrees(out, self.sd.top_degree)[1])
            for m, c in elem.terms.items():
                if any(m[k] for k in range(nb, self.algebra.ngens) if self.algebra.generators[k].odd):
                    continue
                for j, std in enumerate(src):
                    prod = tuple(a + b for a, b in zip(std, m[:nb]))
                    for k, x in quot.project(prod).items():
                        cols[j][k] = cols[j].get(k, 0) + c * x
        return SparseMatrix(len(tgt), len(src), cols)


def build_OY_laurent(sd: SectionData, laurent_algebra, field=QQ) -> TPeriodicModule:
    return TPeriodicModule(LaurentQuotientModule(sd, laurent_algebra, field), sd.top_degree, name="O_Y[t,t^-1]")


def psi_map(sd: SectionData, A, field=QQ):
    """``A[t^-1] -> R/(s)[t, t^-1]``: ``t^k x^m`` goes to the class of ``x^m``, anything with a ``xi`` to 0."""
    source = localize_t(rank_one(A, name="A"))
    target = build_OY_laurent(sd, source.module.algebra, field)
    L = source.module.algebra
    nb = L.n_base
    odd = [k for k in range(nb, L.ngens) if L.generators[k].odd]
    M, Y = source.module, target.module

    def block(tri):
        src = M.basis(tri)
        tgt = Y.basis(tri)
        cols = [{} for _ in src]
        if tgt:
            quot = Y.quotient(reduced_degrees(tri, sd.top_degree)[1])
            for j, (mono, _) in enumerate(src):
                if not any(mono[k] for k in odd):
                    cols[j] = quot.project(mono[:nb])
        return SparseMatrix(len(tgt), len(src), cols)

    return source, target, LinearMap(M, Y, block, name="psi")


def psi_check(sd: SectionData, A, window: Window, field=QQ) -> Verdict:
    """ψ is a chain map and its cone is acyclic on the ``w = 0`` slice."""
    source, target, psi = psi_map(sd, A, field)
    slice_win = source.slice_window(window)
    ok = check_chain_map(psi, slice_win, field)
    if not ok:
        return ok
    return check_quasi_iso(psi, slice_win, field)
