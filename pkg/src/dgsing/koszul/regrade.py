"""Regrading modules over A by moving weight into cohomological degree."""

from __future__ import annotations

from ..engine.modules import FreeDgModule, ModGen
from ..exact.algebra import DgAlgebra, GeneratorSpec


def regrade_algebra(alg: DgAlgebra, factor: int) -> DgAlgebra:
    """Same algebra with every generator moved from ``(h, w, d)`` to ``(h + factor w, w, d)``."""
    gens = [GeneratorSpec(g.name, g.h + factor * g.w, g.w, g.d) for g in alg.generators]
    diff = {alg.generators[i].name: (lambda a, e=e: a.from_terms(e.terms)) for i, e in alg.diff.items()}
    laurent = [alg.generators[i].name for i in alg.laurent]
    suffix = f"mu{factor:+d}"
    return DgAlgebra(gens, diff, laurent=laurent, name=f"{alg.name}<{suffix}>")


def regrade(M: FreeDgModule, factor: int, algebra: DgAlgebra | None = None) -> FreeDgModule:
    """Move ``(h, w)`` to ``(h + factor w, w)`` on generators and algebra alike.

    ``factor`` must be even so that parities, hence signs, are unchanged.
    """
    if factor % 2:
        raise ValueError("regrading factor must be even")
    target = algebra or regrade_algebra(M.algebra, factor)
    gens = [ModGen(g.name, g.h + factor * g.w, g.w, g.d) for g in M.generators]
    diff = {i: {j: target.from_terms(a.terms) for j, a in row.items()} for i, row in M.diff.items()}
    return FreeDgModule(target, gens, diff, name=f"mu({M.name})" if factor < 0 else f"mu^-1({M.name})",
                        valid_weights=M.valid_weights)


def regrade_mu(M: FreeDgModule, algebra=None) -> FreeDgModule:
    """Generators move ``(h, w) -> (h - 2w, w)``; the table moves the same way."""
    return regrade(M, -2, algebra)


def regrade_mu_inverse(M: FreeDgModule, algebra=None) -> FreeDgModule:
    return regrade(M, 2, algebra)


def same_presentation(M: FreeDgModule, N: FreeDgModule) -> bool:
    """Equal generator tridegrees (in order), equal algebras and equal differentials."""
    if M.algebra.generators != N.algebra.generators or M.algebra.laurent != N.algebra.laurent:
        return False
    if [g.tridegree for g in M.generators] != [g.tridegree for g in N.generators]:
        return False
    norm = lambda mod: {i: {j: dict(a.terms) for j, a in row.items()} for i, row in mod.diff.items()}  # noqa: E731
    return norm(M) == norm(N)
