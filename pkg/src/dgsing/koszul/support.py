"""Deciding, on a window, whether t acts nilpotently on cohomology."""

from __future__ import annotations

from dataclasses import dataclass

from ..engine.modules import ResourceError
from ..engine.windowed import (
    CohomologyTable,
    Window,
    cohomology_representatives,
    induced_rank,
    is_exact_at,
)
from ..exact.algebra import add_tri, scale_tri
from ..exact.fields import QQ

SUPPORTED = "supported"
NOT_SUPPORTED = "not-supported"
INCONCLUSIVE = "inconclusive-at-window"


@dataclass
class SupportCertificate:
    window: Window
    exponent: int | None
    verdict: str
    witness: tuple | None = None
    classes: int = 0

    @property
    def supported(self):
        return self.verdict == SUPPORTED


def check_supported_on_X(module, window: Window, field=QQ, max_exponent=None) -> SupportCertificate:
    """Look for ``N <= window width`` with ``t^N`` killing every cohomology class in the safe interior.

    A class that survives every power up to the bound gives ``not-supported``
    (as far as the window can see); running out of resources gives
    ``inconclusive-at-window``.
    """
    bound = window.width if max_exponent is None else max_exponent
    t = module.algebra["t"]
    tdeg = t.tridegree
    exponent = 0
    classes = 0
    try:
        for tri in window.safe_tridegrees():
            if not module.weight_valid(tri[1]):
                continue
            reps = cohomology_representatives(module, tri, field)
            if not reps:
                continue
            classes += len(reps)
            here, power, vecs = tri, 0, reps
            while vecs:
                if power > bound:
                    return SupportCertificate(window, None, NOT_SUPPORTED, tri, classes)
                if power and is_exact_at(module, here, vecs, field):
                    break
                vecs = [v for v in (module.multiply(t, here).apply(v) for v in vecs) if v]
                here = add_tri(here, tdeg)
                power += 1
            exponent = max(exponent, power)
    except ResourceError as exc:
        return SupportCertificate(window, None, INCONCLUSIVE, exc.tri, classes)
    return SupportCertificate(window, exponent, SUPPORTED, None, classes)


@dataclass
class StabilizedEntry:
    dim: int | None  # None when the two probes disagree
    probes: tuple


def t_stabilized_dim(module, u, v, top_degree, depth, power=2, field=QQ):
    """Rank of ``t^power`` on ``H`` from ``T_depth`` to ``T_(depth+power)``, ``T_k = (u + 2k, -k, v - D k)``.

    For ``depth`` large this is the dimension of ``H`` modulo t-torsion at
    reduced degrees ``(u, v)``.
    """
    t = module.algebra["t"]
    start = (u + 2 * depth, -depth, v - top_degree * depth)
    op = module.multiply(t ** power, start)
    end = add_tri(start, scale_tri(t.tridegree, power))
    r, _ = induced_rank(module, start, op, end, field)
    return r


def t_stabilized_table(module, window: Window, top_degree, depth, power=2, field=QQ, name=None):
    """``(u, v)`` table of ``H(module)`` modulo t-torsion, probed at two depths.

    Returns ``(table, unstable)``: entries where depth and depth + 1 disagree
    are listed in ``unstable`` and left out of the table.
    """
    dims, unstable = {}, []
    for u in range(window.h_range[0] + 1, window.h_range[1]):
        for v in range(window.d_range[0], window.d_range[1] + 1):
            a = t_stabilized_dim(module, u, v, top_degree, depth, power, field)
            b = t_stabilized_dim(module, u, v, top_degree, depth + 1, power, field)
            if a == b:
                dims[(u, 0, v)] = a
            else:
                unstable.append(((u, 0, v), a, b))
    tab = CohomologyTable(name or f"H({module.name})[t^-1]", Window(window.h_range, (0, 0), window.d_range), dims)
    return tab, unstable
