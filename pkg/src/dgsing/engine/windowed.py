"""Finite windows, materialized complexes, cohomology tables and quasi-isomorphism checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..exact.algebra import add_tri
from ..exact.fields import QQ
from ..exact.linalg import Echelon, SparseMatrix, block_matrix, rank, rank_and_kernel
from .modules import FreeDgModule, GradedModule, ModuleMap, weight_ok
from .reduction import reduced_model


@dataclass(frozen=True)
class Window:
    """Inclusive ranges of cohomological degree, weight and x-degree."""

    h_range: tuple
    w_range: tuple
    d_range: tuple

    def __post_init__(self):
        for nm in ("h_range", "w_range", "d_range"):
            lo, hi = getattr(self, nm)
            if lo > hi:
                raise ValueError(f"empty {nm}: {lo}..{hi}")
            object.__setattr__(self, nm, (int(lo), int(hi)))

    @classmethod
    def parse(cls, text: str, base: "Window | None" = None) -> "Window":
        """Parse ``h:a..b,w:a..b,d:a..b``; axes missing from ``text`` come from ``base``."""
        ranges = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            axis, _, span = part.partition(":")
            lo, sep, hi = span.partition("..")
            if axis not in ("h", "w", "d") or not sep:
                raise ValueError(f"bad window component {part!r}")
            ranges[axis] = (int(lo), int(hi))
        get = lambda a: ranges.get(a) or (getattr(base, f"{a}_range") if base else None)  # noqa: E731
        if any(get(a) is None for a in "hwd"):
            raise ValueError(f"window {text!r} must give h, w and d ranges")
        return cls(get("h"), get("w"), get("d"))

    def __str__(self):
        return ",".join(f"{a}:{r[0]}..{r[1]}" for a, r in zip("hwd", (self.h_range, self.w_range, self.d_range)))

    def tridegrees(self):
        return itertools.product(range(self.h_range[0], self.h_range[1] + 1),
                                 range(self.w_range[0], self.w_range[1] + 1),
                                 range(self.d_range[0], self.d_range[1] + 1))

    def safe(self, tri):
        h, w, d = tri
        return (self.h_range[0] < h < self.h_range[1]
                and self.w_range[0] <= w <= self.w_range[1]
                and self.d_range[0] <= d <= self.d_range[1])

    def safe_tridegrees(self):
        return [t for t in self.tridegrees() if self.safe(t)]

    @property
    def width(self):
        return self.w_range[1] - self.w_range[0]


DEFAULT_WINDOW = Window((-6, 4), (-8, 8), (0, 10))


class WindowedComplex:
    """Per-tridegree bases and differential matrices of a module inside a window."""

    def __init__(self, module: GradedModule, window: Window):
        self.module = module
        self.window = window
        self.bases = {}
        self.matrices = {}
        for t in window.tridegrees():
            self.bases[t] = module.basis(t)
        h_hi = window.h_range[1]
        for t in window.tridegrees():
            if t[0] < h_hi:
                self.matrices[t] = module.differential(t)

    def check_d_squared(self, field=QQ):
        """First tridegree where two consecutive differentials compose to nonzero, or None."""
        for t, m in sorted(self.matrices.items()):
            nxt = self.matrices.get(add_tri(t, (1, 0, 0)))
            if nxt is None or m.ncols == 0 or nxt.nrows == 0:
                continue
            prod = nxt @ m
            if any(field(v) for col in prod.columns for v in col.values()):
                return t
        return None


def materialize(module: GradedModule, window: Window) -> WindowedComplex:
    return WindowedComplex(module, window)


@dataclass
class CohomologyTable:
    """Cohomology dimensions on the safe interior of a window.

    ``dims`` only holds safe tridegrees whose weight the object can vouch for;
    ``representatives`` (optional) holds dense vectors of class representatives.
    """

    name: str
    window: Window
    dims: dict
    representatives: dict = field(default_factory=dict)

    def nonzero(self):
        return {t: v for t, v in self.dims.items() if v}

    def get(self, tri, default=0):
        return self.dims.get(tuple(tri), default)

    def compare(self, other: "CohomologyTable", transform=None):
        """Tridegrees in the shared domain where dimensions differ.

        ``transform`` maps a tridegree of ``self`` to the tridegree of ``other``
        it should be compared with.
        """
        bad = []
        for t, v in sorted(self.dims.items()):
            u = transform(t) if transform else t
            if u in other.dims and other.dims[u] != v:
                bad.append((t, v, other.dims[u]))
        return bad

    def shared(self, other, transform=None):
        return [t for t in self.dims if (transform(t) if transform else t) in other.dims]

    def as_records(self):
        return [{"h": t[0], "w": t[1], "d": t[2], "dim": v} for t, v in sorted(self.dims.items())]


def _model(module, field, reduce):
    if reduce and isinstance(module, FreeDgModule):
        return reduced_model(module, field)
    return module


def cohomology_dim(module: GradedModule, tri, field=QQ, reduce=True):
    """Cohomology dimension at one tridegree (free modules go through their reduced model)."""
    module = _model(module, field, reduce)
    tri = tuple(tri)
    n = len(module.basis(tri))
    if n == 0:
        return 0
    return n - module.d_rank(tri, field) - module.d_rank(add_tri(tri, (-1, 0, 0)), field)


def cohomology(obj, window: Window | None = None, field=QQ, representatives=False, reduce=True) -> CohomologyTable:
    """Cohomology table of a WindowedComplex (or of a module over ``window``).

    With ``reduce`` a free module is replaced by its reduced model, which has
    the same cohomology everywhere; representatives always come from the module itself.
    """
    if isinstance(obj, WindowedComplex):
        module, window = obj.module, obj.window
        reduce = False
    else:
        module = obj
    dims, reps = {}, {}
    for t in window.safe_tridegrees():
        if not module.weight_valid(t[1]):
            continue
        dims[t] = cohomology_dim(module, t, field, reduce)
        if representatives and dims[t]:
            reps[t] = cohomology_representatives(module, t, field)
    return CohomologyTable(getattr(module, "name", "M"), window, dims, reps)


def cohomology_representatives(module: GradedModule, tri, field=QQ):
    """Cocycles at ``tri`` whose classes form a basis of cohomology there."""
    tri = tuple(tri)
    if not module.basis(tri):
        return []
    _, kernel = rank_and_kernel(module.differential(tri), field)
    boundaries = Echelon(field)
    for col in module.differential(add_tri(tri, (-1, 0, 0))).columns:
        if col:
            boundaries.add(col)
    reps = []
    for z in kernel:
        vec = {k: v for k, v in enumerate(z) if v}
        if boundaries.add(vec):
            reps.append(vec)
    return reps


def is_exact_at(module, tri, vectors, field=QQ):
    """Whether every vector (dict) at ``tri`` is a boundary."""
    ech = Echelon(field)
    for col in module.differential(add_tri(tuple(tri), (-1, 0, 0))).columns:
        if col:
            ech.add(col)
    return all(ech.contains(v) for v in vectors)


def induced_rank(module, tri, op: SparseMatrix, target_tri, field=QQ):
    """Rank of the map induced on cohomology by the chain map ``op`` from ``tri`` to ``target_tri``.

    Returns ``(rank, dim_source)``.
    """
    reps = cohomology_representatives(module, tri, field)
    images = [op.apply(v) for v in reps]
    return rank_mod_boundaries(module, target_tri, images, field), len(reps)


def rank_mod_boundaries(module, target_tri, vectors, field=QQ):
    """Dimension of the span of ``vectors`` modulo boundaries at ``target_tri``."""
    ech = Echelon(field)
    for col in module.differential(add_tri(tuple(target_tri), (-1, 0, 0))).columns:
        if col:
            ech.add(col)
    base = ech.rank
    for v in vectors:
        if v:
            ech.add(v)
    return ech.rank - base


class LinearMap:
    """Degree-``degree`` map between graded modules, given piece by piece."""

    def __init__(self, source, target, block_fn, degree=(0, 0, 0), name="f"):
        self.source = source
        self.target = target
        self._block_fn = block_fn
        self.degree = tuple(degree)
        self.name = name
        self._cache = {}

    def block(self, tri):
        tri = tuple(tri)
        hit = self._cache.get(tri)
        if hit is None:
            hit = self._block_fn(tri)
            exp = (len(self.target.basis(add_tri(tri, self.degree))), len(self.source.basis(tri)))
            if hit.shape != exp:
                raise ValueError(f"{self.name}: block at {tri} has shape {hit.shape}, expected {exp}")
            self._cache[tri] = hit
        return hit


def as_linear(f) -> LinearMap:
    if isinstance(f, LinearMap):
        return f
    if isinstance(f, ModuleMap):
        return LinearMap(f.source, f.target, f.block, f.degree, f.name)
    raise TypeError(f"not a map: {f!r}")


class ConeModule(GradedModule):
    """Cone of a degree-0 map given piece by piece: ``src[1] + tgt`` with ``[[-d, 0], [f, d]]``."""

    def __init__(self, f: LinearMap, name=None):
        if f.degree != (0, 0, 0):
            raise ValueError("cone needs a degree-0 map")
        self.f = f
        self.algebra = f.target.algebra
        self.name = name or f"cone({f.name})"
        s, t = f.source.valid_weights, f.target.valid_weights
        lo = [x for x in (s[0], t[0]) if x is not None]
        hi = [x for x in (s[1], t[1]) if x is not None]
        self.valid_weights = (max(lo) if lo else None, min(hi) if hi else None)
        self._init_caches()

    def _basis(self, tri):
        up = add_tri(tri, (1, 0, 0))
        return [("s", b) for b in self.f.source.basis(up)] + [("t", b) for b in self.f.target.basis(tri)]

    def _differential(self, tri):
        src, tgt, f = self.f.source, self.f.target, self.f
        up = add_tri(tri, (1, 0, 0))
        up2 = add_tri(tri, (2, 0, 0))
        rows = [len(src.basis(up2)), len(tgt.basis(up))]
        cols = [len(src.basis(up)), len(tgt.basis(tri))]
        blocks = {(0, 0): -src.differential(up), (1, 0): f.block(up), (1, 1): tgt.differential(tri)}
        return block_matrix(blocks, rows, cols)

    def _multiply(self, elem, tri):
        src, tgt = self.f.source, self.f.target
        deg = elem.tridegree
        up = add_tri(tri, (1, 0, 0))
        sgn = -1 if deg[0] & 1 else 1
        top = src.multiply(elem, up)
        if sgn < 0:
            top = -top
        rows = [len(src.basis(add_tri(up, deg))), len(tgt.basis(add_tri(tri, deg)))]
        cols = [len(src.basis(up)), len(tgt.basis(tri))]
        return block_matrix({(0, 0): top, (1, 1): tgt.multiply(elem, tri)}, rows, cols)


def generic_cone(f, name=None):
    return ConeModule(as_linear(f), name=name)


@dataclass
class Verdict:
    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def check_chain_map(f, window: Window, field=QQ) -> Verdict:
    """``d f = (-1)^dh f d`` on every window tridegree."""
    lf = as_linear(f)
    sgn = -1 if lf.degree[0] & 1 else 1
    for t in window.tridegrees():
        if not lf.source.basis(t):
            continue
        lhs = lf.target.differential(add_tri(t, lf.degree)) @ lf.block(t)
        rhs = lf.block(add_tri(t, (1, 0, 0))) @ lf.source.differential(t)
        if not lhs.equals(rhs.scaled(sgn), field):
            return Verdict(False, t, f"{lf.name} does not commute with d at {t}")
    return Verdict(True)


def check_quasi_iso(f, window: Window, field=QQ) -> Verdict:
    """The cone of ``f`` is acyclic on the safe interior of ``window``."""
    C = generic_cone(f)
    checked = 0
    for t in window.safe_tridegrees():
        if not C.weight_valid(t[1]):
            continue
        checked += 1
        dim = cohomology_dim(C, t, field)
        if dim:
            return Verdict(False, t, f"cone has cohomology of dimension {dim} at {t}")
    if not checked:
        return Verdict(False, None, "empty safe interior")
    return Verdict(True)


def check_bijective(f, window: Window, field=QQ) -> Verdict:
    """``f`` is an isomorphism of vector spaces at every window tridegree."""
    lf = as_linear(f)
    for t in window.tridegrees():
        m = lf.block(t)
        if m.nrows != m.ncols or rank(m, field) != m.nrows:
            return Verdict(False, t, f"{lf.name} is not bijective at {t} (shape {m.shape})")
    return Verdict(True)
