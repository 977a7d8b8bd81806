"""
Free dg modules over a DgAlgebra, and the maps and constructions on them.

Module elements are written ``a * g`` with the algebra acting on the left; the
differential obeys ``d(a g) = d(a) g + (-1)^|a| a d(g)``. A module is fixed by
its generators and, for each generator ``g_i``, the coefficients of ``d(g_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exact.algebra import AlgebraElement, DgAlgebra, PresentationError, add_tri, sub_tri
from ..exact.linalg import SparseMatrix, rank

BASIS_CAP = 200_000


class ResourceError(RuntimeError):
    """A tridegree piece is larger than the configured cap."""

    def __init__(self, tri, size, cap, obj=""):
        super().__init__(f"{obj or 'module'}: basis at tridegree {tri} has {size} elements (cap {cap})")
        self.tri = tri
        self.size = size


class InvalidMapError(ValueError):
    pass


@dataclass(frozen=True)
class ModGen:
    name: str
    h: int
    w: int
    d: int

    @property
    def tridegree(self):
        return (self.h, self.w, self.d)


def _acc(target: dict, key, value):
    nv = target.get(key, 0) + value
    if nv:
        target[key] = nv
    else:
        target.pop(key, None)


def weight_ok(valid, w):
    lo, hi = valid
    return (lo is None or w >= lo) and (hi is None or w <= hi)


class GradedModule:
    """Anything that materializes into finite pieces per tridegree.

    Subclasses provide ``_basis(tri)``, ``_differential(tri)`` and
    ``_multiply(elem, tri)``; this class caches them and enforces the cap.
    """

    algebra: DgAlgebra
    name = "M"
    valid_weights = (None, None)
    cap = None

    def _init_caches(self):
        self._bcache = {}
        self._icache = {}
        self._dcache = {}
        self._rcache = {}

    def basis(self, tri):
        tri = tuple(tri)
        hit = self._bcache.get(tri)
        if hit is None:
            hit = tuple(self._basis(tri))
            cap = self.cap or BASIS_CAP
            if len(hit) > cap:
                raise ResourceError(tri, len(hit), cap, self.name)
            self._bcache[tri] = hit
        return hit

    def index(self, tri):
        tri = tuple(tri)
        hit = self._icache.get(tri)
        if hit is None:
            hit = {lab: k for k, lab in enumerate(self.basis(tri))}
            self._icache[tri] = hit
        return hit

    def dim(self, tri):
        return len(self.basis(tri))

    def differential(self, tri) -> SparseMatrix:
        """Matrix of d from the piece at ``tri`` to the piece at ``tri + (1,0,0)``."""
        tri = tuple(tri)
        hit = self._dcache.get(tri)
        if hit is None:
            hit = self._differential(tri)
            self._dcache[tri] = hit
        return hit

    def d_rank(self, tri, field) -> int:
        key = (tuple(tri), field)
        hit = self._rcache.get(key)
        if hit is None:
            hit = rank(self.differential(tri), field) if self.basis(tri) else 0
            self._rcache[key] = hit
        return hit

    def multiply(self, elem: AlgebraElement, tri) -> SparseMatrix:
        """Left action of a homogeneous algebra element from ``tri``."""
        return self._multiply(elem, tuple(tri))

    def weight_valid(self, w):
        return weight_ok(self.valid_weights, w)


class FreeDgModule(GradedModule):
    """Finitely generated free dg module.

    ``differential`` maps a generator index ``i`` to ``{j: a_ij}`` meaning
    ``d(g_i) = sum_j a_ij g_j``; ``a_ij`` must have tridegree
    ``deg(g_i) + (1,0,0) - deg(g_j)``.
    """

    def __init__(self, algebra: DgAlgebra, generators, differential=None, name="M",
                 valid_weights=(None, None), check=True):
        self.algebra = algebra
        self.generators = tuple(g if isinstance(g, ModGen) else ModGen(*g) for g in generators)
        self.name = name
        self.valid_weights = tuple(valid_weights)
        self.gindex = {g.name: i for i, g in enumerate(self.generators)}
        diff = {}
        for i, row in (differential or {}).items():
            i = self.gindex[i] if isinstance(i, str) else i
            clean = {}
            for j, a in row.items():
                j = self.gindex[j] if isinstance(j, str) else j
                if not isinstance(a, AlgebraElement):
                    a = algebra.scalar(a)
                elif a.alg is not algebra:
                    a = algebra._adopt(a)
                if a:
                    clean[j] = a
            if clean:
                diff[i] = clean
        self.diff = diff
        self._init_caches()
        if check:
            self._check_homogeneous()

    def _check_homogeneous(self):
        for i, row in self.diff.items():
            gi = self.generators[i]
            for j, a in row.items():
                want = sub_tri(add_tri(gi.tridegree, (1, 0, 0)), self.generators[j].tridegree)
                for m in a.terms:
                    got = self.algebra.mono_degree(m)
                    if got != want:
                        raise PresentationError(
                            f"{self.name}: entry ({gi.name}, {self.generators[j].name}) has degree {got}, "
                            f"expected {want}")

    def __repr__(self):
        return f"FreeDgModule({self.name}, rank {len(self.generators)} over {self.algebra.name})"

    @property
    def rank(self):
        return len(self.generators)

    def entry_h(self, i, j):
        return self.generators[i].h + 1 - self.generators[j].h

    # -- elements: dict (mono, gen) -> coeff ---------------------------
    def gen_element(self, i):
        return {(self.algebra.unit_mono, i): 1}

    def act(self, a: AlgebraElement, elem: dict) -> dict:
        out = {}
        mul = self.algebra.mono_mul
        for (m, j), c in elem.items():
            for am, ac in a.terms.items():
                r = mul(am, m)
                if r is not None:
                    _acc(out, (r[1], j), r[0] * ac * c)
        return out

    def d_element(self, elem: dict) -> dict:
        alg = self.algebra
        out = {}
        mul = alg.mono_mul
        for (m, j), c in elem.items():
            for m2, c2 in alg.d(m).items():
                _acc(out, (m2, j), c * c2)
            row = self.diff.get(j)
            if row:
                s = -c if alg.mono_h(m) & 1 else c
                for k, a in row.items():
                    for am, ac in a.terms.items():
                        r = mul(m, am)
                        if r is not None:
                            _acc(out, (r[1], k), s * r[0] * ac)
        return out

    def d_squared_failures(self):
        """Indices of generators ``g`` with ``d(d(g)) != 0``."""
        return [i for i in range(self.rank) if self.d_element(self.d_element(self.gen_element(i)))]

    def is_complex(self) -> bool:
        """Exact check of d^2 = 0 on every generator (hence everywhere)."""
        return not self.d_squared_failures()

    # -- materialization ------------------------------------------------
    def _basis(self, tri):
        out = []
        for j, g in enumerate(self.generators):
            for m in self.algebra.monomials(sub_tri(tri, g.tridegree)):
                out.append((m, j))
        return out

    def _flat_diff(self):
        """``j -> [(k, mono, coeff)]`` flattened from the differential entries."""
        flat = getattr(self, "_flat", None)
        if flat is None:
            flat = {j: [(k, am, ac) for k, a in row.items() for am, ac in a.terms.items()]
                    for j, row in self.diff.items()}
            self._flat = flat
        return flat

    def _differential(self, tri):
        src = self.basis(tri)
        tgt_tri = add_tri(tri, (1, 0, 0))
        idx = self.index(tgt_tri)
        alg = self.algebra
        mul = alg.mono_mul
        dmono = alg.d
        mono_h = alg.mono_h
        flat = self._flat_diff()
        cols = []
        for m, j in src:
            col = {}
            for m2, c2 in dmono(m).items():
                k = idx[(m2, j)]
                col[k] = col.get(k, 0) + c2
            entries = flat.get(j)
            if entries:
                s = -1 if mono_h(m) & 1 else 1
                for k, am, ac in entries:
                    r = mul(m, am)
                    if r is not None:
                        key = idx[(r[1], k)]
                        col[key] = col.get(key, 0) + s * r[0] * ac
            cols.append(col)
        return SparseMatrix(len(idx), len(src), cols)

    def _multiply(self, elem, tri):
        deg = elem.tridegree
        src = self.basis(tri)
        if deg is None:
            raise ValueError("multiply needs a nonzero homogeneous element")
        idx = self.index(add_tri(tri, deg))
        cols = []
        for lab in src:
            img = self.act(elem, {lab: 1})
            cols.append({idx[k]: v for k, v in img.items()})
        return SparseMatrix(len(idx), len(src), cols)


class ModuleMap:
    """Algebra-linear map between free dg modules.

    ``images[i] = {k: f_ik}`` means ``f(g_i) = sum_k f_ik n_k``. A map of
    cohomological degree ``dh`` satisfies ``f(a m) = (-1)^(dh |a|) a f(m)``.
    """

    def __init__(self, source: FreeDgModule, target: FreeDgModule, images, degree=(0, 0, 0), name="f"):
        if source.algebra.generators != target.algebra.generators:
            raise InvalidMapError("source and target live over different algebras")
        self.source = source
        self.target = target
        self.degree = tuple(degree)
        self.name = name
        alg = target.algebra
        clean = {}
        for i, row in images.items():
            i = source.gindex[i] if isinstance(i, str) else i
            r = {}
            for k, a in row.items():
                k = target.gindex[k] if isinstance(k, str) else k
                if not isinstance(a, AlgebraElement):
                    a = alg.scalar(a)
                elif a.alg is not alg:
                    a = alg._adopt(a)
                if a:
                    r[k] = a
            if r:
                clean[i] = r
        self.images = clean
        for i, row in clean.items():
            for k, a in row.items():
                want = sub_tri(add_tri(source.generators[i].tridegree, self.degree), target.generators[k].tridegree)
                for m in a.terms:
                    if alg.mono_degree(m) != want:
                        raise InvalidMapError(f"{name}: image of {source.generators[i].name} is not homogeneous")

    def apply(self, elem: dict) -> dict:
        alg = self.target.algebra
        odd_map = self.degree[0] & 1
        out = {}
        for (m, i), c in elem.items():
            row = self.images.get(i)
            if not row:
                continue
            s = -c if odd_map and alg.mono_h(m) & 1 else c
            for k, a in row.items():
                for am, ac in a.terms.items():
                    r = alg.mono_mul(m, am)
                    if r is not None:
                        _acc(out, (r[1], k), s * r[0] * ac)
        return out

    def block(self, tri) -> SparseMatrix:
        src = self.source.basis(tri)
        idx = self.target.index(add_tri(tri, self.degree))
        cols = [{idx[k]: v for k, v in self.apply({lab: 1}).items()} for lab in src]
        return SparseMatrix(len(idx), len(src), cols)

    def is_chain_map(self) -> bool:
        """Exact generator-level check of ``d f = (-1)^dh f d``."""
        sgn = -1 if self.degree[0] & 1 else 1
        for i in range(self.source.rank):
            g = self.source.gen_element(i)
            lhs = self.target.d_element(self.apply(g))
            rhs = self.apply(self.source.d_element(g))
            for k, v in rhs.items():
                _acc(lhs, k, -sgn * v)
            if lhs:
                return False
        return True


def free_module(algebra, generators, differential=None, name="M", **kw):
    return FreeDgModule(algebra, generators, differential, name=name, **kw)


def rank_one(algebra, tri=(0, 0, 0), name=None):
    """The algebra itself as a module, on one generator at ``tri``."""
    return FreeDgModule(algebra, [ModGen("1", *tri)], name=name or algebra.name)


def zero_module(algebra, name="0"):
    return FreeDgModule(algebra, [], name=name)


def identity_map(M: FreeDgModule):
    one = M.algebra.one()
    return ModuleMap(M, M, {i: {i: one} for i in range(M.rank)}, name=f"id_{M.name}")


def zero_map(M, N):
    return ModuleMap(M, N, {}, name="0")


def shift(M: FreeDgModule, m: int) -> FreeDgModule:
    """``M[m]``: old degree h content sits in degree h - m, and d picks up (-1)^m.

    At generator level the sign also absorbs the left action convention
    ``a . s(x) = (-1)^(m|a|) s(a x)``, so an entry of degree ``e`` is scaled by
    ``(-1)^(m (e + 1))``; for even entries this is plain ``(-1)^m``.
    """
    gens = [ModGen(g.name, g.h - m, g.w, g.d) for g in M.generators]
    diff = {}
    for i, row in M.diff.items():
        diff[i] = {j: (a if (m * (M.entry_h(i, j) + 1)) % 2 == 0 else -a) for j, a in row.items()}
    return FreeDgModule(M.algebra, gens, diff, name=f"{M.name}[{m}]", valid_weights=M.valid_weights)


def twist(M: FreeDgModule, n: int) -> FreeDgModule:
    """``M(n)``: old weight j content sits at weight j - n; x-degree untouched."""
    gens = [ModGen(g.name, g.h, g.w - n, g.d) for g in M.generators]
    lo, hi = M.valid_weights
    valid = (None if lo is None else lo - n, None if hi is None else hi - n)
    return FreeDgModule(M.algebra, gens, M.diff, name=f"{M.name}({n})", valid_weights=valid)


def _meet(a, b):
    lo = [x for x in (a[0], b[0]) if x is not None]
    hi = [x for x in (a[1], b[1]) if x is not None]
    return (max(lo) if lo else None, min(hi) if hi else None)


def direct_sum(*mods, name=None) -> FreeDgModule:
    alg = mods[0].algebra
    gens, diff = [], {}
    valid = (None, None)
    off = 0
    for k, M in enumerate(mods):
        gens += [ModGen(f"{g.name}#{k}", g.h, g.w, g.d) for g in M.generators]
        for i, row in M.diff.items():
            diff[off + i] = {off + j: a for j, a in row.items()}
        off += M.rank
        valid = _meet(valid, M.valid_weights)
    return FreeDgModule(alg, gens, diff, name=name or "+".join(M.name for M in mods), valid_weights=valid)


def cone(f: ModuleMap, check=True) -> FreeDgModule:
    """Mapping cone ``M[1] + N`` of a degree-0 chain map ``f: M -> N``."""
    if f.degree != (0, 0, 0):
        raise InvalidMapError("cone needs a map of tridegree (0,0,0)")
    if check and not f.is_chain_map():
        raise InvalidMapError(f"{f.name} is not a chain map")
    M, N = f.source, f.target
    shifted = shift(M, 1)
    gens = [ModGen(f"s{g.name}", g.h, g.w, g.d) for g in shifted.generators]
    gens += [ModGen(g.name, g.h, g.w, g.d) for g in N.generators]
    off = M.rank
    diff = {}
    for i in range(M.rank):
        row = {j: a for j, a in shifted.diff.get(i, {}).items()}
        for k, a in f.images.get(i, {}).items():
            row[off + k] = a
        if row:
            diff[i] = row
    for i, row in N.diff.items():
        diff[off + i] = {off + j: a for j, a in row.items()}
    return FreeDgModule(M.algebra, gens, diff, name=f"cone({f.name})",
                        valid_weights=_meet(M.valid_weights, N.valid_weights))


def _combined_algebra(A1: DgAlgebra, A2: DgAlgebra):
    """Algebra for a tensor product over the shared base ring, with embeddings."""
    nb = A1.n_base
    if A1.generators[:nb] != A2.generators[: A2.n_base]:
        raise PresentationError("algebras do not share a base ring")
    ident = lambda m: m  # noqa: E731
    if A2.is_base_ring():
        return A1, ident, (lambda m: m + (0,) * (A1.ngens - nb))
    if A1.is_base_ring():
        return A2, (lambda m: m + (0,) * (A2.ngens - nb)), ident
    f1 = list(A1.generators[nb:])
    taken = {g.name for g in A1.generators}
    f2 = []
    for g in A2.generators[nb:]:
        nm = g.name
        while nm in taken:
            nm += "'"
        taken.add(nm)
        f2.append(type(g)(nm, g.h, g.w, g.d))
    gens = list(A1.generators[:nb]) + f1 + f2
    n1, n2 = len(f1), len(f2)
    emb1 = lambda m: m + (0,) * n2  # noqa: E731
    emb2 = lambda m: m[:nb] + (0,) * n1 + m[nb:]  # noqa: E731

    def image(elem, emb):
        return lambda alg: alg.from_terms({emb(m): c for m, c in elem.terms.items()})

    diff = {}
    for i, e in A1.diff.items():
        diff[gens[i].name] = image(e, emb1)
    for i, e in A2.diff.items():
        diff[gens[nb + n1 + (i - nb)].name] = image(e, emb2)
    return DgAlgebra(gens, diff, name=f"{A1.name}*{A2.name}"), emb1, emb2


def tensor_over_R(M: FreeDgModule, N: FreeDgModule, name=None) -> FreeDgModule:
    """``M (x)_R N`` on generator pairs, with the Koszul sign on the pass-through."""
    alg, e1, e2 = _combined_algebra(M.algebra, N.algebra)
    pairs = [(i, k) for i in range(M.rank) for k in range(N.rank)]
    pidx = {p: n for n, p in enumerate(pairs)}
    gens = []
    for i, k in pairs:
        g, h = M.generators[i], N.generators[k]
        gens.append(ModGen(f"{g.name}|{h.name}", g.h + h.h, g.w + h.w, g.d + h.d))

    def lift(a, emb):
        return alg.from_terms({emb(m): c for m, c in a.terms.items()})

    diff = {}
    for (i, k), n in pidx.items():
        row = {}
        for j, a in M.diff.get(i, {}).items():
            row[pidx[(j, k)]] = lift(a, e1)
        hi = M.generators[i].h
        for l, b in N.diff.get(k, {}).items():
            eb = N.entry_h(k, l)
            s = -1 if (hi * (1 + eb)) % 2 else 1
            key = pidx[(i, l)]
            row[key] = row.get(key, alg.zero()) + lift(b, e2) * s
        row = {key: v for key, v in row.items() if v}
        if row:
            diff[n] = row
    return FreeDgModule(alg, gens, diff, name=name or f"{M.name}(x){N.name}",
                        valid_weights=_meet(M.valid_weights, N.valid_weights))


class RBasis:
    """A free module over ``A`` seen as a free module over the base ring R.

    Elements are ``(fiber_exponents, generator)``; only those whose weight is
    on the near side of ``weight_limit`` are kept (fiber weights all share a
    sign, so that set is closed under the differential).
    """

    def __init__(self, M: FreeDgModule, weight_limit=None):
        alg = M.algebra
        self.module = M
        nb = alg.n_base
        self.nb = nb
        fiber = alg.generators[nb:]
        if alg.laurent:
            raise PresentationError("R-basis of a Laurent algebra is infinite")
        sign = 0
        if fiber:
            sign = 1 if fiber[0].w > 0 else -1
            if weight_limit is None:
                raise ValueError("a weight limit is needed when the algebra has fiber generators")
        self.sign = sign
        elems = []
        for j, g in enumerate(M.generators):
            budget = 0 if not fiber else sign * (weight_limit - g.w)
            if budget < 0:
                continue
            for fe in self._fiber_monos(fiber, budget):
                elems.append((fe, j))
        degs = []
        for fe, j in elems:
            g = M.generators[j]
            fh = sum(e * f.h for e, f in zip(fe, fiber))
            fw = sum(e * f.w for e, f in zip(fe, fiber))
            fd = sum(e * f.d for e, f in zip(fe, fiber))
            degs.append((g.h + fh, g.w + fw, g.d + fd))
        self.elements = elems
        self.degrees = degs
        self.index = {e: k for k, e in enumerate(elems)}
        self.limit = weight_limit

    @staticmethod
    def _fiber_monos(fiber, budget):
        out = []
        acc = [0] * len(fiber)

        def rec(k, rem):
            if k == len(fiber):
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
        return sorted(out, key=lambda fe: (sum(fe), tuple(-x for x in fe)))

    def label(self, k):
        fe, j = self.elements[k]
        alg = self.module.algebra
        fiber = alg.generators[self.nb:]
        word = "".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in zip(fiber, fe) if e)
        gname = self.module.generators[j].name
        return f"{word}.{gname}" if word else gname

    def mono(self, k):
        fe, _ = self.elements[k]
        return (0,) * self.nb + fe

    def differential(self):
        """``{a: {b: r}}`` with ``d(e_a) = sum_b r e_b``, ``r`` a dict of x-monomials."""
        M = self.module
        out = {}
        for a, (fe, j) in enumerate(self.elements):
            img = M.d_element({(self.mono(a), j): 1})
            row = {}
            for (m, k), c in img.items():
                b = self.index.get((m[self.nb:], k))
                if b is None:
                    raise RuntimeError("R-basis truncation is not closed under d")
                row.setdefault(b, {})
                _acc(row[b], m[: self.nb], c)
            row = {b: r for b, r in row.items() if r}
            if row:
                out[a] = row
        return out

    def action(self, u: int):
        """``{b: (sign, a)}`` with ``u . e_b = sign * e_a`` (kept elements only)."""
        alg = self.module.algebra
        umono = alg.gen_mono(u)
        out = {}
        for b, (fe, j) in enumerate(self.elements):
            r = alg.mono_mul(umono, self.mono(b))
            if r is None:
                continue
            a = self.index.get((r[1][self.nb:], j))
            if a is not None:
                out[b] = (r[0], a)
        return out


def r_basis_module(M: FreeDgModule, weight_limit=None, name=None) -> FreeDgModule:
    """Restriction of scalars to the base ring R (truncated by weight)."""
    rb = RBasis(M, weight_limit)
    R = M.algebra.base_ring
    gens = [ModGen(rb.label(k), *rb.degrees[k]) for k in range(len(rb.elements))]
    diff = {}
    for a, row in rb.differential().items():
        diff[a] = {b: R.from_terms({xm: c for xm, c in r.items()}) for b, r in row.items()}
    lo, hi = M.valid_weights
    if rb.sign > 0:
        hi = weight_limit if hi is None else min(hi, weight_limit)
    elif rb.sign < 0:
        lo = weight_limit if lo is None else max(lo, weight_limit)
    return FreeDgModule(R, gens, diff, name=name or f"{M.name}|R", valid_weights=(lo, hi))


def graded_dual(M: FreeDgModule, weight_limit=None, name=None) -> FreeDgModule:
    """R-linear dual: generators at negated tridegrees, differential ``(-1)^(h+1)`` times the transpose.

    Modules over an algebra with fiber generators are first restricted to R
    (this needs ``weight_limit``).
    """
    if not M.algebra.is_base_ring():
        M = r_basis_module(M, weight_limit)
    gens = [ModGen(f"{g.name}^v", -g.h, -g.w, -g.d) for g in M.generators]
    diff = {}
    for b, row in M.diff.items():
        for a, c in row.items():
            # c = coefficient of g_a in d(g_b)
            s = -1 if (M.generators[a].h + 1) % 2 else 1
            diff.setdefault(a, {})[b] = c * s
    lo, hi = M.valid_weights
    return FreeDgModule(M.algebra, gens, diff, name=name or f"{M.name}^v",
                        valid_weights=(None if hi is None else -hi, None if lo is None else -lo))
