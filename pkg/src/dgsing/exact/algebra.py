"""
Free graded-commutative algebras with a Leibniz differential.

A monomial is a tuple of exponents in declaration order. Generators of odd
cohomological degree are exterior (exponent 0 or 1); even ones are polynomial,
and a generator may be declared Laurent (negative exponents allowed).

Every generator carries a tridegree ``(h, w, d)``: cohomological degree,
internal weight and x-degree. The base ring ``R = k[x1..xn]`` is spanned by
the generators with ``w == 0``; they must be listed first, have ``h == 0`` and
positive x-degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from operator import add


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    h: int
    w: int
    d: int

    @property
    def odd(self) -> bool:
        return self.h % 2 == 1

    @property
    def tridegree(self):
        return (self.h, self.w, self.d)


def add_tri(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub_tri(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale_tri(a, k):
    return (a[0] * k, a[1] * k, a[2] * k)


class DgAlgebra:
    """Presentation of a free graded-commutative dg algebra.

    Parameters
    ----------
    generators : sequence of GeneratorSpec
        Canonical order is the declaration order.
    differential : dict name -> AlgebraElement or callable
        Images of generators; omitted generators are closed. A callable
        receives the (differential-free) algebra and returns the image, which
        is how images that mention the algebra's own generators get built.
    laurent : iterable of names
        Even generators that are inverted.
    """

    def __init__(self, generators, differential=None, laurent=(), name=None, check=True):
        self.generators = tuple(generators)
        self.name = name or "alg"
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError(f"duplicate generator names in {names}")
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self.laurent = frozenset(self.index[n] for n in laurent)
        self._validate_shape()
        self.odd = tuple(i for i, g in enumerate(self.generators) if g.odd)
        self._oddset = frozenset(self.odd)
        self._odd_desc = tuple(reversed(self.odd))
        self._mono_cache = {}
        self._xmono_cache = {}
        self._d_cache = {}
        self.diff = {}
        if differential:
            for nm, img in differential.items():
                if nm not in self.index:
                    raise PresentationError(f"unknown generator {nm!r}")
                if callable(img):
                    img = img(self)
                img = self._adopt(img)
                if img:
                    self.diff[self.index[nm]] = img
        if check:
            self._validate_differential()

    # -- structure ------------------------------------------------------
    def _validate_shape(self):
        seen_fiber = False
        for i, g in enumerate(self.generators):
            if g.w == 0:
                if seen_fiber:
                    raise PresentationError("base generators (w=0) must precede fiber generators")
                if g.h != 0 or g.d <= 0:
                    raise PresentationError(f"base generator {g.name} needs h=0 and d>0")
                if i in self.laurent:
                    raise PresentationError("base generators cannot be Laurent")
            else:
                seen_fiber = True
        if len(self.laurent) > 1:
            raise PresentationError("at most one Laurent generator is supported")
        for i in self.laurent:
            if self.generators[i].odd:
                raise PresentationError("a Laurent generator must be even")
        fiber = [g for g in self.generators if g.w != 0]
        plain = [g for i, g in enumerate(self.generators) if g.w != 0 and i not in self.laurent]
        if self.laurent:
            if any(not g.odd for g in plain):
                raise PresentationError("with a Laurent generator all other fiber generators must be odd")
        elif fiber and len({g.w > 0 for g in fiber}) > 1:
            raise PresentationError("fiber generator weights must share one sign")

    def _validate_differential(self):
        for i, img in self.diff.items():
            g = self.generators[i]
            want = (g.h + 1, g.w, g.d)
            for m in img.terms:
                if self.mono_degree(m) != want:
                    raise PresentationError(
                        f"d({g.name}) has a term of tridegree {self.mono_degree(m)}, expected {want}")
        for i, img in self.diff.items():
            if self.apply_differential(img):
                raise PresentationError(f"d^2 != 0 on generator {self.generators[i].name}")

    @cached_property
    def n_base(self):
        return sum(1 for g in self.generators if g.w == 0)

    @property
    def ngens(self):
        return len(self.generators)

    @cached_property
    def key(self):
        return (tuple(self.generators), self.laurent)

    @cached_property
    def base_ring(self) -> "DgAlgebra":
        """The polynomial ring on the base generators."""
        if self.n_base == self.ngens:
            return self
        return DgAlgebra(self.generators[: self.n_base], name="R")

    def is_base_ring(self):
        return self.n_base == self.ngens

    def with_laurent(self, name: str) -> "DgAlgebra":
        """Same presentation with ``name`` inverted."""
        diff = {self.generators[i].name: (lambda alg, e=e: alg.from_terms(e.terms)) for i, e in self.diff.items()}
        names = {self.generators[i].name for i in self.laurent} | {name}
        return DgAlgebra(self.generators, diff, laurent=names, name=f"{self.name}[{name}^-1]")

    def __repr__(self):
        return f"DgAlgebra({self.name}: {', '.join(g.name for g in self.generators)})"

    # -- monomials ------------------------------------------------------
    def gen_mono(self, i):
        e = [0] * self.ngens
        e[i] = 1
        return tuple(e)

    @cached_property
    def unit_mono(self):
        return (0,) * self.ngens

    def mono_degree(self, m):
        h = w = d = 0
        for e, g in zip(m, self.generators):
            if e:
                h += e * g.h
                w += e * g.w
                d += e * g.d
        return (h, w, d)

    def mono_h(self, m):
        return sum(e * self.generators[i].h for i, e in enumerate(m) if e)

    def mono_mul(self, a, b):
        """Product of two monomials as ``(sign, monomial)``, or ``None`` if zero."""
        sign = 0
        above = 0
        for i in self._odd_desc:
            bi = b[i]
            ai = a[i]
            if bi:
                if ai:
                    return None
                sign += above
            if ai:
                above += 1
        return (-1 if sign & 1 else 1), tuple(map(add, a, b))

    def normalize(self, word, coeff=1):
        """Bring a raw word of generators into canonical order.

        ``word`` is a sequence of names, indices or ``(name, exponent)`` pairs.
        Returns ``(monomial, coefficient)`` with the Koszul sign folded in, or
        ``None`` when an odd generator repeats.
        """
        mono = self.unit_mono
        c = coeff
        for item in word:
            if isinstance(item, tuple):
                nm, ex = item
            else:
                nm, ex = item, 1
            i = nm if isinstance(nm, int) else self.index.get(nm)
            if i is None or not 0 <= i < self.ngens:
                raise PresentationError(f"unknown generator {nm!r}")
            if ex < 0 and i not in self.laurent:
                raise PresentationError(f"negative exponent on non-Laurent generator {nm!r}")
            if i in self._oddset and ex > 1:
                return None
            for _ in range(ex if i in self._oddset else 1):
                g = [0] * self.ngens
                g[i] = ex if i not in self._oddset else 1
                res = self.mono_mul(mono, tuple(g))
                if res is None:
                    return None
                s, mono = res
                c = c * s
        if not c:
            return None
        return mono, c

    def xmonomials(self, degree):
        """Exponent tuples (length ``n_base``) of base monomials of a given x-degree."""
        if degree < 0:
            return ()
        hit = self._xmono_cache.get(degree)
        if hit is not None:
            return hit
        weights = [g.d for g in self.generators[: self.n_base]]
        out = []

        def rec(i, rem, acc):
            if i == len(weights):
                if rem == 0:
                    out.append(tuple(acc))
                return
            wt = weights[i]
            for e in range(rem // wt + 1):
                acc.append(e)
                rec(i + 1, rem - e * wt, acc)
                acc.pop()

        rec(0, degree, [])
        out = tuple(sorted(out, reverse=True))
        self._xmono_cache[degree] = out
        return out

    def monomials(self, tri):
        """All monomials of tridegree ``tri``, in a deterministic order."""
        hit = self._mono_cache.get(tri)
        if hit is not None:
            return hit
        h, w, d = tri
        nb = self.n_base
        fiber = list(range(nb, self.ngens))
        gens = self.generators
        parts = []  # fiber exponent vectors
        if self.laurent:
            (li,) = tuple(self.laurent)
            plain = [i for i in fiber if i != li]
            lg = gens[li]
            for mask in range(1 << len(plain)):
                e = [0] * (self.ngens - nb)
                fw = 0
                for k, i in enumerate(plain):
                    if mask >> k & 1:
                        e[i - nb] = 1
                        fw += gens[i].w
                q, r = divmod(w - fw, lg.w)
                if r:
                    continue
                e[li - nb] = q
                parts.append(tuple(e))
        elif fiber:
            sgn = 1 if gens[fiber[0]].w > 0 else -1
            target = w * sgn
            if target >= 0:
                acc = [0] * len(fiber)

                def rec(k, rem):
                    if k == len(fiber):
                        if rem == 0:
                            parts.append(tuple(acc))
                        return
                    g = gens[fiber[k]]
                    aw = abs(g.w)
                    top = min(rem // aw, 1) if g.odd else rem // aw
                    for e in range(top + 1):
                        acc[k] = e
                        rec(k + 1, rem - e * aw)
                    acc[k] = 0

                rec(0, target)
        elif w == 0:
            parts.append(())
        out = []
        for fe in parts:
            fh = fd = 0
            for k, e in enumerate(fe):
                if e:
                    g = gens[nb + k]
                    fh += e * g.h
                    fd += e * g.d
            if fh != h:
                continue
            for xm in self.xmonomials(d - fd):
                out.append(xm + fe)
        out = tuple(out)
        self._mono_cache[tri] = out
        return out

    # -- elements -------------------------------------------------------
    def from_terms(self, terms) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def _adopt(self, elem):
        if isinstance(elem, AlgebraElement):
            if elem.alg.generators != self.generators:
                raise PresentationError("element belongs to a different presentation")
            return AlgebraElement(self, elem.terms)
        return self.scalar(elem)

    def zero(self):
        return AlgebraElement(self, {})

    def one(self):
        return AlgebraElement(self, {self.unit_mono: 1})

    def scalar(self, c):
        return AlgebraElement(self, {self.unit_mono: c} if c else {})

    def gen(self, name, power=1):
        res = self.normalize([(name, power)])
        return AlgebraElement(self, {res[0]: res[1]} if res else {})

    def monomial(self, word, coeff=1):
        res = self.normalize(word, coeff)
        return AlgebraElement(self, {res[0]: res[1]} if res else {})

    def __getitem__(self, name):
        return self.gen(name)

    # -- differential ---------------------------------------------------
    def d(self, m) -> dict:
        """Differential of a monomial, as a terms dict (Leibniz rule)."""
        hit = self._d_cache.get(m)
        if hit is not None:
            return hit
        out = {}
        if self.diff:
            prefix = [0] * self.ngens
            prefix_h = 0
            for i, e in enumerate(m):
                if not e:
                    continue
                img = self.diff.get(i)
                g = self.generators[i]
                if img is not None:
                    # d(g^e) = e g^(e-1) d(g) for even g; odd g has e == 1
                    suffix = [0] * self.ngens
                    suffix[i + 1:] = m[i + 1:]
                    pre = tuple(prefix)
                    pw = [0] * self.ngens
                    pw[i] = e - 1
                    pw = tuple(pw)
                    suf = tuple(suffix)
                    sgn = -1 if prefix_h & 1 else 1
                    for tm, tc in img.terms.items():
                        r1 = self.mono_mul(pre, pw)
                        if r1 is None:
                            continue
                        r2 = self.mono_mul(r1[1], tm)
                        if r2 is None:
                            continue
                        r3 = self.mono_mul(r2[1], suf)
                        if r3 is None:
                            continue
                        c = sgn * e * tc * r1[0] * r2[0] * r3[0]
                        key = r3[1]
                        nv = out.get(key, 0) + c
                        if nv:
                            out[key] = nv
                        else:
                            out.pop(key, None)
                prefix[i] = e
                prefix_h += e * g.h
        self._d_cache[m] = out
        return out

    def apply_differential(self, a: "AlgebraElement") -> "AlgebraElement":
        out = {}
        for m, c in a.terms.items():
            for m2, c2 in self.d(m).items():
                nv = out.get(m2, 0) + c * c2
                if nv:
                    out[m2] = nv
                else:
                    out.pop(m2, None)
        return AlgebraElement(self, out)


class AlgebraElement:
    """Finite linear combination of canonical monomials; immutable."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: DgAlgebra, terms):
        self.alg = alg
        self.terms = {m: c for m, c in dict(terms).items() if c}

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return self.alg.scalar(other)
        if other.alg.generators != self.alg.generators:
            raise PresentationError("elements of different presentations")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return AlgebraElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return AlgebraElement(self.alg, {m: c * other for m, c in self.terms.items()})
        other = self._check(other)
        out = {}
        mul = self.alg.mono_mul
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                r = mul(a, b)
                if r is None:
                    continue
                s, m = r
                out[m] = out.get(m, 0) + s * ca * cb
        return AlgebraElement(self.alg, out)

    def __rmul__(self, c):
        return AlgebraElement(self.alg, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, n):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.alg.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.alg.generators == other.alg.generators and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return {self.alg.mono_degree(m) for m in self.terms}

    @property
    def tridegree(self):
        """Tridegree if homogeneous and nonzero, else ``None``."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def d(self):
        return self.alg.apply_differential(self)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        gens = self.alg.generators
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            word = "*".join(
                gens[i].name if e == 1 else f"{gens[i].name}^{e}" for i, e in enumerate(m) if e)
            if not word:
                parts.append(str(c))
            elif c == 1:
                parts.append(word)
            elif c == -1:
                parts.append("-" + word)
            else:
                parts.append(f"{c}*{word}")
        return " + ".join(parts).replace("+ -", "- ")


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def apply_differential(alg: DgAlgebra, a: AlgebraElement) -> AlgebraElement:
    return alg.apply_differential(alg._adopt(a))


def normalize_monomial(alg: DgAlgebra, word, coeff=1):
    return alg.normalize(word, coeff)
