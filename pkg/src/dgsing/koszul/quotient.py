"""Monomial bases of ``R/(s_1..s_r)`` and normal forms in them."""

from __future__ import annotations

from ..exact.fields import QQ
from ..exact.linalg import ReducedEchelon
from .section import SectionData


class QuotientBasis:
    """Degree ``v`` part of ``R/(s)``.

    Monomials of ``R_v`` are ordered as the algebra enumerates them; the ideal
    part is put in reduced echelon form, and the monomials off the pivot
    columns are the standard monomials of the quotient.
    """

    def __init__(self, sd: SectionData, R, degree: int, field=QQ):
        self.degree = degree
        self.monos = list(R.xmonomials(degree))
        self.index = {m: k for k, m in enumerate(self.monos)}
        gens = []
        for i, p in enumerate(sd.s):
            for m in R.xmonomials(degree - sd.degrees[i]):
                vec = {}
                for e, c in p.items():
                    k = self.index[tuple(a + b for a, b in zip(m, e))]
                    vec[k] = vec.get(k, 0) + c
                gens.append(vec)
        self.ideal = ReducedEchelon(gens, field)
        pivots = set(self.ideal.pivots)
        self.standard = [m for k, m in enumerate(self.monos) if k not in pivots]
        self.std_index = {self.index[m]: j for j, m in enumerate(self.standard)}

    def __len__(self):
        return len(self.standard)

    def project(self, mono) -> dict:
        """Coordinates of the class of ``mono`` on the standard monomials."""
        nf = self.ideal.normal_form({self.index[mono]: 1})
        return {self.std_index[k]: c for k, c in nf.items()}
