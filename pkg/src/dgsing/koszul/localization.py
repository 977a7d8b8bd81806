"""Inverting t, the weight <= 0 truncation, and the maps between them.

Inverting ``t`` (tridegree ``(2, -1, -D)``) makes every module periodic:
multiplication by ``t`` identifies the piece at ``(h, w, d)`` with the one at
``(h + 2, w - 1, d - D)``. So ``u = h + 2w`` and ``v = d - D w`` index all the
information, and the slice ``w = 0`` is a fundamental domain.
"""

from __future__ import annotations

from ..engine.modules import FreeDgModule, GradedModule
from ..engine.windowed import (
    CohomologyTable,
    LinearMap,
    Verdict,
    Window,
    check_bijective,
    cohomology,
    cohomology_dim,
)
from ..exact.algebra import DgAlgebra, add_tri, scale_tri
from ..exact.fields import QQ
from ..exact.linalg import SparseMatrix


def t_degree(alg: DgAlgebra):
    return alg.generators[alg.index["t"]].tridegree


def reduced_degrees(tri, top_degree):
    h, w, d = tri
    return h + 2 * w, d - top_degree * w


class TPeriodicModule:
    """A module over ``A[t^-1]``, read off on the slice ``w = 0``."""

    def __init__(self, module: GradedModule, top_degree: int, name=None):
        self.module = module
        self.top_degree = top_degree
        self.name = name or module.name

    def slice_window(self, window: Window) -> Window:
        return Window(window.h_range, (0, 0), window.d_range)

    def table(self, window: Window, field=QQ) -> CohomologyTable:
        """Cohomology on the ``w = 0`` slice, keyed ``(u, 0, v)``."""
        tab = cohomology(self.module, self.slice_window(window), field)
        tab.name = self.name
        return tab

    def check_periodicity(self, window: Window, field=QQ) -> Verdict:
        """Multiplication by ``t`` is bijective between neighbouring slices."""
        t = self.module.algebra["t"]
        tdeg = t.tridegree
        f = LinearMap(self.module, self.module, lambda tri: self.module.multiply(t, tri), tdeg, name="t")
        return check_bijective(f, window, field)

    def cohomology_dim(self, tri, field=QQ):
        """Cohomology at any tridegree, through its ``(u, v)`` representative."""
        u, v = reduced_degrees(tri, self.top_degree)
        return cohomology_dim(self.module, (u, 0, v), field)


def laurent_algebra(A: DgAlgebra) -> DgAlgebra:
    return A.with_laurent("t")


def localize_t(N: FreeDgModule, laurent: DgAlgebra | None = None, top_degree=None) -> TPeriodicModule:
    """``A[t^-1] (x)_A N`` for a free module ``N``: same generators and differential."""
    if N.valid_weights[0] is not None:
        raise ValueError("localizing needs a module that is valid in arbitrarily negative weight")
    L = laurent or laurent_algebra(N.algebra)
    M = FreeDgModule(L, N.generators, N.diff, name=f"{N.name}[t^-1]", valid_weights=(None, None))
    D = -t_degree(L)[2] if top_degree is None else top_degree
    return TPeriodicModule(M, D)


class WeightTruncation(GradedModule):
    """The part of weight ``<= 0`` of a module, as a module over the non-inverted algebra."""

    def __init__(self, periodic: TPeriodicModule, algebra: DgAlgebra, name=None):
        self.periodic = periodic
        self.source = periodic.module
        self.algebra = algebra
        self.name = name or f"{periodic.name}_<=0"
        self._init_caches()

    def _basis(self, tri):
        return self.source.basis(tri) if tri[1] <= 0 else ()

    def _differential(self, tri):
        if tri[1] > 0:
            return SparseMatrix(0, 0)
        return self.source.differential(tri)

    def _multiply(self, elem, tri):
        deg = elem.tridegree
        out = add_tri(tri, deg)
        if tri[1] > 0 or out[1] > 0:
            return SparseMatrix(len(self.basis(out)), len(self.basis(tri)))
        return self.source.multiply(self.source.algebra._adopt(elem), tri)


def truncate_nonpositive(periodic: TPeriodicModule, algebra: DgAlgebra) -> WeightTruncation:
    return WeightTruncation(periodic, algebra)


class LocalizedTruncation(GradedModule):
    """``A[t^-1] (x)_A N_<=0``; the piece at ``T`` is ``t^-k`` times the piece at ``T + k deg(t)``."""

    def __init__(self, trunc: WeightTruncation, name=None):
        self.trunc = trunc
        self.algebra = trunc.source.algebra
        self.tdeg = t_degree(self.algebra)
        self.name = name or f"{trunc.name}[t^-1]"
        self._init_caches()

    def lift(self, tri):
        """Number of ``t`` factors used to pull ``tri`` into weight <= 0."""
        return max(0, tri[1])

    def _source_tri(self, tri):
        return add_tri(tri, scale_tri(self.tdeg, self.lift(tri)))

    def _basis(self, tri):
        return self.trunc.basis(self._source_tri(tri))

    def _differential(self, tri):
        return self.trunc.differential(self._source_tri(tri))

    def _multiply(self, elem, tri):
        elem = self.algebra._adopt(elem)
        deg = elem.tridegree
        out = add_tri(tri, deg)
        k, k2 = self.lift(tri), self.lift(out)
        factor = elem * self.algebra.gen("t", k2 - k)
        return self.trunc.source.multiply(factor, self._source_tri(tri))


def unit_map(M: FreeDgModule, periodic: TPeriodicModule | None = None) -> LinearMap:
    """``M -> (A[t^-1] (x) M)_<=0``: sections of weight <= 0 map to themselves, others to 0."""
    periodic = periodic or localize_t(M)
    target = truncate_nonpositive(periodic, M.algebra)

    def block(tri):
        src = M.basis(tri)
        if tri[1] > 0:
            return SparseMatrix(0, len(src))
        idx = target.index(tri)
        return SparseMatrix(len(idx), len(src), [{idx[lab]: 1} for lab in src])

    return LinearMap(M, target, block, name=f"unit_{M.name}")


def counit_map(periodic: TPeriodicModule, algebra: DgAlgebra) -> LinearMap:
    """``A[t^-1] (x) N_<=0 -> N``: ``t^-k (x) n`` goes to ``t^-k n``."""
    source = LocalizedTruncation(truncate_nonpositive(periodic, algebra))
    N = periodic.module
    L = N.algebra

    def block(tri):
        k = source.lift(tri)
        return N.multiply(L.gen("t", -k), source._source_tri(tri)) if k else SparseMatrix.identity(len(N.basis(tri)))

    return LinearMap(source, N, block, name=f"counit_{periodic.name}")


def check_counit(periodic: TPeriodicModule, algebra: DgAlgebra, window: Window, field=QQ) -> Verdict:
    return check_bijective(counit_map(periodic, algebra), window, field)
