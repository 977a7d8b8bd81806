"""Section data and the algebras built from it.

A section is ``r`` weighted-homogeneous polynomials ``s_1..s_r`` in
``x1..xn``. From it we build

* ``B``: ``R[y_1..y_r, eps]`` with ``eps`` odd and ``d(eps) = sum s_i y_i``;
* ``A``: ``R[t] (x) exterior(xi_1..xi_r)`` with ``d(xi_i) = t s_i``;
* ``K``: the Koszul complex of ``s`` over ``R``, as a free module on subsets.

Every generator carries an x-degree chosen so that all differentials are
homogeneous: with ``D = max e_i``, ``y_i`` sits at ``D - e_i``, ``eps`` at
``D``, ``xi_i`` at ``e_i - D`` and ``t`` at ``-D``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..engine.modules import FreeDgModule, ModGen
from ..exact.algebra import DgAlgebra, GeneratorSpec, PresentationError

Poly = dict  # exponent tuple (length n) -> int


def poly_degree(poly: Poly, weights) -> int | None:
    """Weighted degree of a homogeneous polynomial; None for zero; raises if inhomogeneous."""
    degs = {sum(e * w for e, w in zip(exps, weights)) for exps, c in poly.items() if c}
    if not degs:
        return None
    if len(degs) > 1:
        raise PresentationError(f"polynomial is not homogeneous (degrees {sorted(degs)})")
    return degs.pop()


@dataclass(frozen=True)
class SectionData:
    n: int
    x_weights: tuple
    s: tuple  # of Poly
    regular_claimed: bool = True
    degrees: tuple = ()  # e_i; derived from s unless s_i = 0
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise PresentationError("need at least one x-variable")
        xw = tuple(int(w) for w in self.x_weights) or (1,) * self.n
        if len(xw) != self.n or any(w <= 0 for w in xw):
            raise PresentationError(f"x_weights must be {self.n} positive integers")
        object.__setattr__(self, "x_weights", xw)
        polys = []
        for p in self.s:
            clean = {}
            for exps, c in p.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.n or any(e < 0 for e in exps):
                    raise PresentationError(f"bad exponent vector {exps}")
                if c:
                    clean[exps] = clean.get(exps, 0) + int(c)
            polys.append({e: c for e, c in clean.items() if c})
        object.__setattr__(self, "s", tuple(polys))
        given = tuple(self.degrees)
        if given and len(given) != self.r:
            raise PresentationError("degrees must list one entry per section component")
        degs = []
        for i, p in enumerate(polys):
            e = poly_degree(p, xw)
            if e is None:
                if not given:
                    raise PresentationError(f"s_{i + 1} is zero; its degree must be given explicitly")
                e = int(given[i])
            elif given and int(given[i]) != e:
                raise PresentationError(f"s_{i + 1} has degree {e}, not the declared {given[i]}")
            if e < 1:
                raise PresentationError(f"s_{i + 1} must have degree >= 1")
            degs.append(e)
        object.__setattr__(self, "degrees", tuple(degs))

    @property
    def r(self):
        return len(self.s)

    @property
    def top_degree(self):
        """``D = max e_i`` (0 when r = 0)."""
        return max(self.degrees, default=0)

    @property
    def is_zero(self):
        return all(not p for p in self.s)

    # -- generator lists ------------------------------------------------
    def x_generators(self):
        return [GeneratorSpec(f"x{k + 1}", 0, 0, w) for k, w in enumerate(self.x_weights)]

    def lift(self, alg: DgAlgebra, i: int):
        """``s_i`` as an element of ``alg`` (any algebra whose base is x1..xn)."""
        pad = (0,) * (alg.ngens - self.n)
        return alg.from_terms({e + pad: c for e, c in self.s[i].items()})


def build_base_ring(sd: SectionData) -> DgAlgebra:
    return DgAlgebra(sd.x_generators(), name="R")


def build_B(sd: SectionData) -> DgAlgebra:
    D = sd.top_degree
    gens = sd.x_generators()
    gens += [GeneratorSpec(f"y{i + 1}", 0, 1, D - e) for i, e in enumerate(sd.degrees)]
    gens.append(GeneratorSpec("eps", -1, 1, D))

    def d_eps(alg):
        out = alg.zero()
        for i in range(sd.r):
            out = out + sd.lift(alg, i) * alg[f"y{i + 1}"]
        return out

    return DgAlgebra(gens, {"eps": d_eps}, name="B")


def build_A(sd: SectionData, laurent=False) -> DgAlgebra:
    D = sd.top_degree
    gens = sd.x_generators()
    gens += [GeneratorSpec(f"xi{i + 1}", 1, -1, e - D) for i, e in enumerate(sd.degrees)]
    gens.append(GeneratorSpec("t", 2, -1, -D))
    diff = {f"xi{i + 1}": (lambda alg, i=i: alg["t"] * sd.lift(alg, i)) for i in range(sd.r)}
    return DgAlgebra(gens, diff, laurent=("t",) if laurent else (), name="A[t^-1]" if laurent else "A")


def koszul_generator_name(subset):
    return "xi" + "_".join(str(i + 1) for i in subset) if subset else "1"


def build_koszul_resolution(sd: SectionData) -> FreeDgModule:
    """Koszul complex of ``s`` over ``R``: one generator per subset, ``d(xi_i) = s_i``."""
    R = build_base_ring(sd)
    subsets = [S for p in range(sd.r + 1) for S in itertools.combinations(range(sd.r), p)]
    gens = [ModGen(koszul_generator_name(S), -len(S), 0, sum(sd.degrees[i] for i in S)) for S in subsets]
    where = {S: k for k, S in enumerate(subsets)}
    diff = {}
    for S in subsets:
        row = {}
        for pos, i in enumerate(S):
            if not sd.s[i]:
                continue
            coeff = sd.lift(R, i)
            row[where[S[:pos] + S[pos + 1:]]] = coeff if pos % 2 == 0 else -coeff
        if row:
            diff[where[S]] = row
    return FreeDgModule(R, gens, diff, name="K")


def potential(B: DgAlgebra):
    """``W = sum s_i y_i`` inside ``B``."""
    return B.apply_differential(B["eps"])
