"""The two Koszul duality functors between dg modules over B and over A.

Both are one construction. Write the source module as a free R-module with
basis ``e_a`` (fiber monomial times generator). The output is free over the
partner algebra on the duals ``e_a^v``, placed at negated tridegrees, with

    d(e_a^v) = (-1)^(h_a + 1) sum_b c_ab e_b^v
               + sum_u (-1)^((h_a + 1)|u|) v_u sum_b U_u[a, b] e_b^v

where ``c_ab`` is the R-coefficient of ``e_a`` in ``d(e_b)``, ``u`` runs over
the source fiber generators, ``v_u`` is its partner (``y_i <-> xi_i``,
``eps <-> t``), ``|u|`` is the parity of ``u`` and ``U_u[a, b] = +-1`` when
``u e_b = +-e_a``. The first sum is the dual differential, the second the
insertion of the pairing; the sign ``(-1)^((h_a+1)|u|)`` is what makes the two
anticommute.

The source basis is infinite, so it is cut at a weight. The cut is a dg
submodule of the output and agrees with the true output in the weight range
recorded as ``valid_weights``.
"""

from __future__ import annotations

from ..engine.modules import FreeDgModule, ModGen, RBasis
from ..exact.algebra import DgAlgebra


def _pairing(source: DgAlgebra, target: DgAlgebra):
    """Source fiber generator index -> target generator name."""
    out = {}
    for i in range(source.n_base, source.ngens):
        nm = source.generators[i].name
        if nm.startswith("y"):
            partner = "xi" + nm[1:]
        elif nm.startswith("xi"):
            partner = "y" + nm[2:]
        elif nm == "eps":
            partner = "t"
        elif nm == "t":
            partner = "eps"
        else:
            raise ValueError(f"no partner for generator {nm!r}")
        out[i] = partner
    return out


def koszul_dual(M: FreeDgModule, target: DgAlgebra, weight_limit, name=None) -> FreeDgModule:
    src_alg = M.algebra
    nb = src_alg.n_base
    if target.generators[:nb] != src_alg.generators[:nb]:
        raise ValueError("source and target algebras must share the base ring")
    basis = RBasis(M, weight_limit)
    pad = (0,) * (target.ngens - nb)
    lift = lambda xterms: target.from_terms({xm + pad: c for xm, c in xterms.items()})  # noqa: E731
    n = len(basis.elements)
    heights = [deg[0] for deg in basis.degrees]
    gens = [ModGen(basis.label(k) + "^v", -deg[0], -deg[1], -deg[2]) for k, deg in enumerate(basis.degrees)]
    diff = {a: {} for a in range(n)}

    def add(a, b, elem):
        row = diff[a]
        row[b] = row[b] + elem if b in row else elem

    for b, row in basis.differential().items():
        for a, xterms in row.items():
            sign = -1 if (heights[a] + 1) % 2 else 1
            add(a, b, lift(xterms) * sign if sign > 0 else -lift(xterms))
    for u, partner in _pairing(src_alg, target).items():
        odd_u = src_alg.generators[u].odd
        v = target[partner]
        for b, (sgn, a) in basis.action(u).items():
            sign = sgn * (-1 if odd_u and (heights[a] + 1) % 2 else 1)
            add(a, b, v if sign > 0 else -v)
    diff = {a: {b: c for b, c in row.items() if c} for a, row in diff.items()}
    return FreeDgModule(target, gens, {a: r for a, r in diff.items() if r}, name=name)


def _window(lo_cut, M_valid, side):
    lo, hi = M_valid
    if side > 0:  # F: source weights <= cut
        out_lo = lo_cut if hi is None else max(lo_cut, -hi)
        out_hi = None if lo is None else -lo
    else:
        out_hi = lo_cut if lo is None else min(lo_cut, -lo)
        out_lo = None if hi is None else -hi
    return out_lo, out_hi


def koszul_F(M: FreeDgModule, A: DgAlgebra, min_weight: int, name=None) -> FreeDgModule:
    """Functor from B-modules to A-modules, exact in weights ``>= min_weight``."""
    out = koszul_dual(M, A, -min_weight, name=name or f"F({M.name})")
    out.valid_weights = _window(min_weight, M.valid_weights, +1)
    return out


def koszul_G(N: FreeDgModule, B: DgAlgebra, max_weight: int, name=None) -> FreeDgModule:
    """Functor from A-modules to B-modules, exact in weights ``<= max_weight``."""
    out = koszul_dual(N, B, -max_weight, name=name or f"G({N.name})")
    out.valid_weights = _window(max_weight, N.valid_weights, -1)
    return out
