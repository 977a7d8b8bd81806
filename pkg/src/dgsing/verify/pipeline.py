"""End-to-end verification of one scenario: builds the objects, runs the checks, collects tables."""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field

from .. import __version__
from ..engine import modules as engine_modules
from ..engine.modules import ModuleMap, ResourceError, cone, direct_sum, rank_one, shift, twist
from ..engine.windowed import (
    CohomologyTable,
    Window,
    check_bijective,
    check_chain_map,
    cohomology,
    cohomology_dim,
    generic_cone,
    materialize,
)
from ..koszul import (
    SUPPORTED,
    LocalizedTruncation,
    truncate_nonpositive,
    build_A,
    build_B,
    build_koszul_resolution,
    check_supported_on_X,
    counit_map,
    koszul_F,
    koszul_G,
    localize_t,
    psi_check,
    regrade_mu,
    same_presentation,
    t_stabilized_table,
    unit_map,
)
from .oracles import oracle_quotient_dims, quotient_ring_dim, ring_dim, sym_quotient_dim
from .scenario import Scenario

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class CheckResult:
    name: str
    verdict: str
    failures: list = field(default_factory=list)  # dicts with object / tridegree / detail
    notes: list = field(default_factory=list)
    runtime_ms: float | None = None

    @property
    def witness(self):
        return self.failures[0] if self.failures else None


@dataclass
class Report:
    scenario_id: str
    checks: list
    tables: dict  # name -> CohomologyTable or {tri: dim}
    engine_version: str = __version__
    window: Window | None = None
    field_name: str = "rational"

    def verdict(self, name):
        return next(c.verdict for c in self.checks if c.name == name)

    def dimension_tables(self):
        """``name -> {tri: dim}`` for every stored table."""
        out = {}
        for nm, tab in self.tables.items():
            out[nm] = dict(tab.dims) if isinstance(tab, CohomologyTable) else dict(tab)
        return out


def failure(obj, tri=None, detail=""):
    return {"object": obj, "tridegree": list(tri) if tri is not None else None, "detail": detail}


@contextmanager
def basis_cap(cap):
    old = engine_modules.BASIS_CAP
    engine_modules.BASIS_CAP = cap
    try:
        yield
    finally:
        engine_modules.BASIS_CAP = old


class Workspace:
    """Lazily built, shared objects of one scenario.

    Every object is built once under a lock so that concurrent checks see the
    same instance (and share its caches).
    """

    def __init__(self, sc: Scenario):
        self.sc = sc
        self.sd = sc.section
        self.window = sc.window
        self.field = sc.field
        self._objects = {}
        self._locks = {}
        self._guard = threading.Lock()
        self.tables = {}
        self._tables_lock = threading.Lock()

    def get(self, key, build):
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._objects:
                self._objects[key] = build()
            return self._objects[key]

    def store(self, name, table):
        with self._tables_lock:
            self.tables[name] = table

    # -- algebras -------------------------------------------------------
    @property
    def B(self):
        return self.get("alg:B", lambda: build_B(self.sd))

    @property
    def A(self):
        return self.get("alg:A", lambda: build_A(self.sd))

    @property
    def regular(self):
        return self.sd.regular_claimed

    # -- modules --------------------------------------------------------
    def B_twist(self, i):
        return self.get(("B", i), lambda: twist(rank_one(self.B, name="B"), i) if i else rank_one(self.B, name="B"))

    @property
    def A_mod(self):
        return self.get("A", lambda: rank_one(self.A, name="A"))

    @property
    def K(self):
        return self.get("K", lambda: build_koszul_resolution(self.sd))

    @property
    def f_cut(self):
        """Weight cut for F: the output is exact from the bottom of the window (or lower)."""
        return min(self.window.w_range[0], -self.window.w_range[1])

    @property
    def g_cut(self):
        return max(self.window.w_range[1], -self.window.w_range[0])

    def F(self, M, key):
        return self.get(("F", key), lambda: koszul_F(M, self.A, self.f_cut, name=f"F({M.name})"))

    def G(self, N, key, cut=None):
        c = self.g_cut if cut is None else cut
        return self.get(("G", key, c), lambda: koszul_G(N, self.B, c, name=f"G({N.name})"))

    @property
    def OX(self):
        """The free resolution of O_X over A, namely F(B)."""
        return self.F(self.B_twist(0), "B")

    @property
    def y_map(self):
        def build():
            D = self.sd.top_degree
            src = rank_one(self.B, (0, 1, D - self.sd.degrees[0]), name="B(-1)")
            return ModuleMap(src, self.B_twist(0), {0: {0: self.B["y1"]}}, name="y1")
        return self.get("y_map", build)

    @property
    def t_map(self):
        def build():
            src = rank_one(self.A, self.A["t"].tridegree, name="A[-2](1)")
            return ModuleMap(src, self.A_mod, {0: {0: self.A["t"]}}, name="t")
        return self.get("t_map", build)

    @property
    def cone_t(self):
        return self.get("cone_t", lambda: _named(cone(self.t_map), "cone(t)"))

    @property
    def cone_y(self):
        return self.get("cone_y", lambda: _named(cone(self.y_map), "cone(y1)"))

    def localized(self, key, M):
        return self.get(("loc", key), lambda: localize_t(M))

    def table(self, M, name=None):
        tab = cohomology(M, self.window, self.field)
        self.store(name or M.name, tab)
        return tab


def _named(M, name):
    M.name = name
    return M


# -- checks -------------------------------------------------------------------

def _d_squared_failures(ws: Workspace, name, M):
    bad = materialize(M, ws.window).check_d_squared(ws.field)
    return [failure(name, bad, "d^2 != 0")] if bad is not None else []


def check_c1(ws: Workspace) -> CheckResult:
    """Free modules: d^2 = 0 on every generator, which gives it at every tridegree.

    Objects that are not free modules (truncations, the cone of the unit) are
    checked matrix by matrix on the window.
    """
    free = [("B", ws.B_twist(0)), ("A", ws.A_mod), ("K", ws.K), ("F(B)", ws.OX)]
    for i in range(-2, 3):
        if i:
            free.append((f"F(B({i}))", ws.F(ws.B_twist(i), ("B", i))))
    free.append(("G(F(B))", ws.G(ws.OX, "OX")))
    if ws.sd.r:
        free.append(("cone(y1)", ws.cone_y))
    free.append(("cone(t)", ws.cone_t))
    free.append(("A[t^-1]", ws.localized("A", ws.A_mod).module))
    free.append(("cone(t)[t^-1]", ws.localized("cone_t", ws.cone_t).module))
    loc = ws.localized("A", ws.A_mod)
    trunc = truncate_nonpositive(loc, ws.A)
    windowed = [("A[t^-1]_<=0", trunc), ("(A[t^-1]_<=0)[t^-1]", LocalizedTruncation(trunc)),
                ("cone(unit(A))", generic_cone(unit_map(ws.A_mod, loc), name="J"))]
    fails = []
    for name, M in free:
        for i in M.d_squared_failures():
            g = M.generators[i]
            fails.append(failure(name, g.tridegree, f"d^2 != 0 on generator {g.name}"))
    for name, M in windowed:
        fails += _d_squared_failures(ws, name, M)
    notes = [f"generator identity: {', '.join(n for n, _ in free)}",
             f"window matrices: {', '.join(n for n, _ in windowed)}"]
    return CheckResult("C1", FAIL if fails else PASS, fails, notes)


def _table_vs_expected(name, tab: CohomologyTable, expected):
    """Every entry of ``tab`` against ``expected(tri)``."""
    fails = []
    for tri, dim in sorted(tab.dims.items()):
        want = expected(tri)
        if dim != want:
            fails.append(failure(name, tri, f"dimension {dim}, expected {want}"))
    return fails


def check_c2(ws: Workspace) -> CheckResult:
    if ws.sd.is_zero:
        return CheckResult("C2", PASS, notes=["skipped: s = 0, so W is a zero divisor and there is no resolution"])
    tab = ws.table(ws.B_twist(0), "B")
    sd, fld = ws.sd, ws.field
    oracle = {t: (sym_quotient_dim(sd, t[1], t[2], fld) if t[0] == 0 else 0) for t in tab.dims}
    ws.store("oracle:SymE/(W)", {t: v for t, v in oracle.items() if t[0] == 0})
    fails = _table_vs_expected("B", tab, oracle.__getitem__)
    return _verdict("C2", fails, tab)


def _verdict(name, fails, *tables):
    if fails:
        return CheckResult(name, FAIL, fails)
    if all(not tab.dims for tab in tables):
        return CheckResult(name, FAIL, [failure(name, None, "empty safe interior")])
    return CheckResult(name, PASS)


def check_c3(ws: Workspace) -> CheckResult:
    fails, tabs = [], []
    for i in range(-2, 3):
        M = ws.F(ws.B_twist(i), ("B", i)) if i else ws.OX
        name = f"F(B({i}))" if i else "F(B)"
        tab = ws.table(M, name)
        tabs.append(tab)
        # F is contravariant: B(i) goes to O_X(-i), whose generator sits at weight i.
        fails += _table_vs_expected(name, tab, lambda t, i=i: ring_dim(ws.sd, t[2]) if t[:2] == (0, i) else 0)
    return _verdict("C3", fails, *tabs)


def koszul_window(ws: Workspace):
    w = ws.window
    return Window(w.h_range, (0, 0), w.d_range)


def check_c4(ws: Workspace) -> CheckResult:
    tab = cohomology(ws.K, koszul_window(ws), ws.field)
    tab.name = "K"
    ws.store("K", tab)
    higher = {t: v for t, v in tab.dims.items() if v and t[0] != 0}
    if ws.regular:
        fails = [failure("K", t, f"H^{t[0]}(K) has dimension {v}: s is not regular") for t, v in sorted(higher.items())]
        degree_zero = CohomologyTable("K", tab.window, {t: v for t, v in tab.dims.items() if t[0] == 0})
        fails += _table_vs_expected("K", degree_zero, lambda t: quotient_ring_dim(ws.sd, t[2], ws.field))
        return _verdict("C4", fails, tab)
    if any(t[0] == -1 for t in higher):
        return CheckResult("C4", PASS, notes=["H^-1(K) is nonzero: the Koszul complex is not a resolution"])
    return CheckResult("C4", FAIL, [failure("K", None, "no H^-1(K) found for a section declared non-regular")])


def round_trip_modules(ws: Workspace):
    mods = [("B", ws.B_twist(0)), ("B(1)", ws.B_twist(1)),
            ("B+B[1]", ws.get("BsumB1", lambda: direct_sum(ws.B_twist(0), shift(ws.B_twist(0), 1), name="B+B[1]")))]
    if ws.sd.r:
        mods.append(("cone(y1)", ws.cone_y))
    return mods


def check_c5(ws: Workspace) -> CheckResult:
    fails, tabs = [], []
    for name, M in round_trip_modules(ws):
        GF = ws.G(ws.F(M, ("rt", name)), ("rt", name))
        tab_gf = ws.table(GF, f"G(F({name}))")
        tab_m = ws.table(M, name)
        tabs.append(tab_gf)
        for tri, a, b in tab_gf.compare(tab_m):
            fails.append(failure(f"G(F({name}))", tri, f"dimension {a}, but {name} has {b}"))
        if not tab_gf.shared(tab_m):
            fails.append(failure(f"G(F({name}))", None, "no shared safe tridegrees"))
    return _verdict("C5", fails, *tabs)


def stabilization_depth(ws: Workspace, M):
    return ws.sd.r + 2 + max((abs(g.w) for g in M.generators), default=0)


def check_c6(ws: Workspace) -> CheckResult:
    fails, notes, unstable_all, tabs = [], [], [], []
    for name, M in (("A", ws.A_mod), ("cone(t)", ws.cone_t)):
        loc = ws.localized(name if name == "A" else "cone_t", M)
        tab = loc.table(ws.window, ws.field)
        tab.name = f"{name}[t^-1]"
        ws.store(f"{name}[t^-1]", tab)
        stab, unstable = t_stabilized_table(M, ws.window, ws.sd.top_degree, stabilization_depth(ws, M),
                                            field=ws.field, name=f"H({name})/t-torsion")
        ws.store(f"H({name})/t-torsion", stab)
        tabs.append(tab)
        unstable_all += [(name, u) for u in unstable]
        for tri, a, b in tab.compare(stab):
            fails.append(failure(f"{name}[t^-1]", tri, f"dimension {a}, t-stabilized cohomology has {b}"))
    if fails:
        return CheckResult("C6", FAIL, fails)
    if unstable_all:
        return CheckResult("C6", INCONCLUSIVE,
                           [failure(n, u[0], f"t-stabilization did not settle ({u[1]} vs {u[2]})") for n, u in unstable_all])
    return _verdict("C6", [], *tabs)


def check_c7(ws: Workspace) -> CheckResult:
    fails, notes = [], []
    if not ws.window.safe_tridegrees():
        return CheckResult("C7", FAIL, [failure("C7", None, "empty safe interior")])
    for name, M in (("A", ws.A_mod), ("cone(t)", ws.cone_t)):
        loc = ws.localized(name if name == "A" else "cone_t", M)
        v = check_bijective(counit_map(loc, ws.A), ws.window, ws.field)
        if not v:
            fails.append(failure(f"counit({name}[t^-1])", v.witness, v.detail))
        v = loc.check_periodicity(ws.window, ws.field)
        if not v:
            fails.append(failure(f"{name}[t^-1]", v.witness, v.detail))
    unit = unit_map(ws.A_mod, ws.localized("A", ws.A_mod))
    v = check_chain_map(unit, ws.window, ws.field)
    if not v:
        fails.append(failure("unit(A)", v.witness, v.detail))
        return CheckResult("C7", FAIL, fails)
    cert = check_supported_on_X(generic_cone(unit, name="J"), ws.window, ws.field)
    notes.append(f"cone of unit(A): {cert.verdict}, exponent {cert.exponent}, {cert.classes} classes")
    if cert.verdict == SUPPORTED and cert.exponent <= ws.window.width:
        return CheckResult("C7", FAIL if fails else PASS, fails, notes)
    if cert.verdict == SUPPORTED:
        fails.append(failure("J", None, f"nilpotence exponent {cert.exponent} exceeds the window width"))
    elif cert.verdict == "not-supported":
        fails.append(failure("J", cert.witness, "a cohomology class survives every power of t up to the window width"))
    else:
        return CheckResult("C7", INCONCLUSIVE, fails + [failure("J", cert.witness, "window too small")], notes)
    return CheckResult("C7", FAIL, fails, notes)


def check_c8(ws: Workspace) -> CheckResult:
    loc = ws.localized("A", ws.A_mod)
    tab = loc.table(ws.window, ws.field)
    tab.name = "A[t^-1]"
    ws.store("A[t^-1]", tab)
    fails = []
    if ws.regular:
        oracle = {t: quotient_ring_dim(ws.sd, t[2], ws.field) if t[0] == 0 else 0 for t in tab.dims}
        ws.store("oracle:O_Y[t,t^-1]", {t: v for t, v in oracle.items() if t[0] == 0})
        fails += _table_vs_expected("A[t^-1]", tab, oracle.__getitem__)
    else:
        ktab = cohomology(ws.K, koszul_window(ws), ws.field)
        ws.store("H(K)[t,t^-1]", ktab)
        for tri, a, b in tab.compare(ktab):
            fails.append(failure("A[t^-1]", tri, f"dimension {a}, H(K) has {b}"))
    v = psi_check(ws.sd, ws.A, ws.window, ws.field)
    if ws.regular and not v:
        fails.append(failure("psi", v.witness, v.detail))
    if not ws.regular and v:
        fails.append(failure("psi", None, "psi is a quasi-isomorphism although s is not regular"))
    return _verdict("C8", fails, tab)


def check_c9(ws: Workspace) -> CheckResult:
    fails, tabs = [], []
    for name, M in (("A", ws.A_mod), ("F(B)", ws.OX)):
        mu = ws.get(("mu", name), lambda M=M: regrade_mu(M))
        tab = ws.table(mu, f"mu({name})")
        tabs.append(tab)
        for tri, dim in sorted(tab.dims.items()):
            h, w, d = tri
            other = cohomology_dim(M, (h + 2 * w, w, d), ws.field)
            if dim != other:
                fails.append(failure(f"mu({name})", tri, f"dimension {dim}, {name} at {(h + 2 * w, w, d)} has {other}"))
    OX = ws.OX
    for k in range(-2, 3):
        lhs = regrade_mu(twist(OX, k))
        rhs = twist(shift(regrade_mu(OX), -2 * k), k)
        if not same_presentation(lhs, rhs):
            fails.append(failure(f"mu(O_X({k}))", None, f"presentation differs from O_X[{-2 * k}]({k})"))
    return _verdict("C9", fails, *tabs)


def check_c10(ws: Workspace) -> CheckResult:
    if not ws.regular:
        return CheckResult("C10", PASS, notes=["skipped: s is not regular"])
    fails, tabs = [], []
    # start of the chain: B through the duality side, G(F(B)) against the O_Z oracle
    gf = ws.G(ws.OX, "OX")
    tab = ws.table(gf, "G(F(B))")
    tabs.append(tab)
    fails += _table_vs_expected("G(F(B))", tab,
                                lambda t: sym_quotient_dim(ws.sd, t[1], t[2], ws.field) if t[0] == 0 else 0)
    # end of the chain: A through the duality side, F(G(A)) modulo t-torsion against O_Y[t, t^-1]
    depth = stabilization_depth(ws, ws.A_mod)
    reach = depth + 4
    ga = ws.G(ws.A_mod, "A", cut=reach)
    fga = ws.get(("F", "GA", reach), lambda: koszul_F(ga, ws.A, -reach, name="F(G(A))"))
    stab, unstable = t_stabilized_table(fga, ws.window, ws.sd.top_degree, depth, field=ws.field,
                                        name="H(F(G(A)))/t-torsion")
    ws.store("H(F(G(A)))/t-torsion", stab)
    tabs.append(stab)
    fails += _table_vs_expected("F(G(A))", stab,
                                lambda t: quotient_ring_dim(ws.sd, t[2], ws.field) if t[0] == 0 else 0)
    if not fails and unstable:
        return CheckResult("C10", INCONCLUSIVE, [failure("F(G(A))", u[0], "t-stabilization did not settle") for u in unstable])
    return _verdict("C10", fails, *tabs)


CHECKS = {
    "C1": check_c1, "C2": check_c2, "C3": check_c3, "C4": check_c4, "C5": check_c5,
    "C6": check_c6, "C7": check_c7, "C8": check_c8, "C9": check_c9, "C10": check_c10,
}


def _run_one(ws: Workspace, name, timings):
    start = time.perf_counter()
    try:
        res = CHECKS[name](ws)
    except ResourceError as exc:
        res = CheckResult(name, INCONCLUSIVE, [failure(str(exc).split(":")[0], exc.tri, str(exc))])
    if timings:
        res.runtime_ms = round((time.perf_counter() - start) * 1000, 3)
    return res


def run_pipeline(sc: Scenario, parallel: int = 1, timings: bool = False) -> Report:
    """Run the scenario's checks and collect every table they produced.

    Output is independent of ``parallel``. Wall-clock times are recorded only
    with ``timings=True`` so that reports stay byte-identical across runs.
    """
    ws = Workspace(sc)
    with basis_cap(sc.caps.basis):
        if parallel > 1 and len(sc.checks) > 1:
            with ThreadPoolExecutor(max_workers=parallel) as pool:
                results = list(pool.map(lambda c: _run_one(ws, c, timings), sc.checks))
        else:
            results = [_run_one(ws, c, timings) for c in sc.checks]
    oracle_sym, oracle_quot = oracle_quotient_dims(sc.section, sc.window, sc.field)
    tables = dict(ws.tables)
    tables.setdefault("oracle:SymE/(W)", oracle_sym)
    tables.setdefault("oracle:R/(s)", oracle_quot)
    return Report(sc.id, results, tables, window=sc.window,
                  field_name=getattr(sc.field, "name", "rational") if sc.field.characteristic == 0
                  else f"fp:{sc.field.p}")
