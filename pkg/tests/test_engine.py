import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgsing.engine import (
    LinearMap,
    ModuleMap,
    ResourceError,
    Window,
    check_chain_map,
    check_quasi_iso,
    cohomology,
    cone,
    direct_sum,
    generic_cone,
    graded_dual,
    identity_map,
    materialize,
    rank_one,
    shift,
    tensor_over_R,
    twist,
    zero_map,
    zero_module,
)
from dgsing.engine.modules import GradedModule, InvalidMapError
from dgsing.engine.reduction import reduced_model
from dgsing.exact import QQ, PrimeField, SparseMatrix
from dgsing.koszul import SectionData, build_A, build_B, build_base_ring, build_koszul_resolution, koszul_F

POINT = SectionData(1, (1,), ({(1,): 1},))
AXES = SectionData(2, (1, 1), ({(1, 1): 1},))
CI = SectionData(2, (1, 1), ({(1, 0): 1}, {(0, 1): 1}))
SMALL = Window((-3, 2), (-2, 2), (0, 4))


def test_materialize_point_B():
    B = rank_one(build_B(POINT))
    wc = materialize(B, Window((-1, 0), (0, 1), (0, 1)))
    x, y, eps = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert wc.bases[(0, 0, 0)] == (((0, 0, 0), 0),)
    assert wc.bases[(0, 0, 1)] == ((x, 0),)
    assert wc.bases[(0, 1, 0)] == ((y, 0),)
    assert wc.bases[(0, 1, 1)] == (((1, 1, 0), 0),)
    assert wc.bases[(-1, 1, 1)] == ((eps, 0),)
    assert wc.matrices[(-1, 1, 1)].to_dense() == [[1]]
    assert wc.check_d_squared() is None


def test_zero_module_is_empty():
    wc = materialize(zero_module(build_B(POINT)), SMALL)
    assert not any(wc.bases.values())
    assert not cohomology(zero_module(build_B(POINT)), SMALL).nonzero()


def test_rank_one_over_R_counts_monomials():
    R = build_base_ring(AXES)
    M = rank_one(R)
    for d in range(6):
        assert M.dim((0, 0, d)) == d + 1
    tab = cohomology(M, Window((-1, 1), (0, 0), (0, 5)))
    assert tab.dims == {(0, 0, d): d + 1 for d in range(6)}


def test_axes_B_class_of_y():
    B = rank_one(build_B(AXES))
    tab = cohomology(B, Window((-2, 1), (0, 2), (0, 4)))
    assert tab.get((0, 1, 0)) == 1
    assert tab.get((-1, 1, 2)) == 0


def test_identity_cone_is_acyclic():
    R = build_base_ring(AXES)
    M = rank_one(R)
    C = cone(identity_map(M))
    assert C.is_complex()
    assert not cohomology(C, Window((-2, 2), (0, 0), (0, 5))).nonzero()


def test_cone_of_zero_map_is_shift():
    B = rank_one(build_B(POINT))
    C = cone(zero_map(B, zero_module(B.algebra)))
    shifted = cohomology(shift(B, 1), SMALL).dims
    assert cohomology(C, SMALL).dims == shifted


def test_cone_of_t_matches_A_mod_t():
    A = build_A(POINT)
    src = rank_one(A, A["t"].tridegree)
    C = cone(ModuleMap(src, rank_one(A), {0: {0: A["t"]}}))
    tab = cohomology(C, Window((-2, 3), (-3, 0), (0, 4)))
    # A/tA = k[x] (x) exterior(xi) with zero differential, xi at (1,-1,0)
    expected = {(0, 0, d): 1 for d in range(5)} | {(1, -1, d): 1 for d in range(5)}
    assert tab.nonzero() == expected


def test_non_chain_map_rejected_by_cone():
    B = build_B(POINT)
    src = rank_one(B, (-1, 1, 1))
    f = ModuleMap(src, rank_one(B), {0: {0: B["eps"]}})
    assert not f.is_chain_map()
    with pytest.raises(InvalidMapError):
        cone(f)


def test_shift_round_trip_and_table():
    K = build_koszul_resolution(CI)
    back = shift(shift(K, 1), -1)
    assert [g.tridegree for g in back.generators] == [g.tridegree for g in K.generators]
    assert back.diff == K.diff
    assert shift(K, 1).is_complex() and shift(K, 3).is_complex()
    base = cohomology(K, Window((-4, 3), (0, 0), (0, 4))).dims
    moved = cohomology(shift(K, 1), Window((-4, 3), (0, 0), (0, 4))).dims
    for (h, w, d), v in moved.items():
        if (h + 1, w, d) in base:
            assert base[(h + 1, w, d)] == v


def test_shift_sign_on_odd_entries():
    B = build_B(POINT)
    F = koszul_F(rank_one(B), build_A(POINT), -4)
    for m in (1, 2, 3):
        assert shift(F, m).is_complex()


def test_twist_moves_weight():
    B = rank_one(build_B(POINT))
    T = twist(B, 2)
    assert T.generators[0].w == -2
    assert T.diff == B.diff
    assert T.dim((0, -2, 0)) == 1 and T.dim((0, -3, 0)) == 0


def test_tensor_of_koszul_complexes():
    R = build_base_ring(CI)
    K1 = build_koszul_resolution(SectionData(2, (1, 1), ({(1, 0): 1},)))
    K2 = build_koszul_resolution(SectionData(2, (1, 1), ({(0, 1): 1},)))
    KK = tensor_over_R(K1, K2)
    assert KK.is_complex()
    assert tensor_over_R(K1, rank_one(R)).rank == K1.rank
    win = Window((-3, 1), (0, 0), (0, 5))
    assert cohomology(KK, win).dims == cohomology(build_koszul_resolution(CI), win).dims


def test_dual_of_rank_one():
    R = build_base_ring(AXES)
    D = graded_dual(rank_one(R))
    assert [g.tridegree for g in D.generators] == [(0, 0, 0)]


def test_dual_is_involutive_on_koszul():
    K = build_koszul_resolution(CI)
    DD = graded_dual(graded_dual(K))
    assert graded_dual(K).is_complex()
    assert [g.tridegree for g in DD.generators] == [g.tridegree for g in K.generators]
    # the double dual carries -d, identified with K by g -> (-1)^h g
    assert DD.diff == {i: {j: -a for j, a in row.items()} for i, row in K.diff.items()}
    win = Window((-3, 1), (0, 0), (0, 4))
    assert cohomology(DD, win).dims == cohomology(K, win).dims


def test_direct_sum_table_adds():
    B = rank_one(build_B(POINT))
    S = direct_sum(B, shift(B, 1))
    a = cohomology(B, SMALL).dims
    b = cohomology(shift(B, 1), SMALL).dims
    assert cohomology(S, SMALL).dims == {t: a[t] + b[t] for t in a}


def test_chain_map_checks():
    B = build_B(POINT)
    M = rank_one(B)
    assert check_chain_map(identity_map(M), SMALL)
    src = rank_one(B, (-1, 1, 1))
    bad = ModuleMap(src, M, {0: {0: B["eps"]}})
    assert not check_chain_map(bad, SMALL)


class StandardMonomials(GradedModule):
    """k[x, y]/(x y) with zero differential, basis x^d or y^w."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.name = "O_Z"
        self._init_caches()

    def _basis(self, tri):
        h, w, d = tri
        if h == 0 and w >= 0 and d >= 0 and (w == 0 or d == 0):
            return [(d, w)]
        return []

    def _differential(self, tri):
        return SparseMatrix(self.dim((tri[0] + 1, tri[1], tri[2])), self.dim(tri))


def projection_to_standard(B, target):
    src = rank_one(B)

    def block(tri):
        h, w, d = tri
        cols = [{0: 1} if h == 0 and (w == 0 or d == 0) else {} for _ in src.basis(tri)]
        return SparseMatrix(target.dim(tri), len(cols), cols)

    return LinearMap(src, target, block, name="phi")


def test_phi_to_structure_sheaf_is_quasi_iso():
    B = build_B(POINT)
    phi = projection_to_standard(B, StandardMonomials(B))
    win = Window((-3, 2), (0, 4), (0, 4))
    assert check_chain_map(phi, win)
    assert check_quasi_iso(phi, win)


def test_quasi_iso_examples():
    M = rank_one(build_B(POINT))
    assert check_quasi_iso(identity_map(M), SMALL)
    assert not check_quasi_iso(zero_map(M, M), SMALL)
    empty = Window((0, 1), (0, 0), (0, 0))
    assert not check_quasi_iso(identity_map(M), empty)


def test_generic_cone_matches_free_cone():
    A = build_A(CI)
    src = rank_one(A, A["t"].tridegree)
    f = ModuleMap(src, rank_one(A), {0: {0: A["t"]}})
    win = Window((-2, 3), (-3, 0), (0, 3))
    assert cohomology(generic_cone(f), win).dims == cohomology(cone(f), win).dims
    assert materialize(generic_cone(f), win).check_d_squared() is None


@pytest.mark.parametrize("field", [QQ, PrimeField(1048583)])
def test_reduced_model_matches_direct(field):
    A = build_A(CI)
    B = build_B(CI)
    F = koszul_F(rank_one(B), A, -4)
    win = Window((-3, 2), (-3, 0), (0, 4))
    for M in (rank_one(A), rank_one(B), F):
        direct = cohomology(M, win, field, reduce=False).dims
        assert cohomology(M, win, field, reduce=True).dims == direct
        assert reduced_model(M, field).slice(-1).survivors is not None


def test_basis_cap_raises_resource_error():
    R = build_base_ring(CI)
    M = rank_one(R)
    M.cap = 3
    with pytest.raises(ResourceError):
        M.basis((0, 0, 5))


@settings(max_examples=25, deadline=None)
@given(st.integers(-2, 2), st.integers(-2, 2))
def test_shift_twist_keep_d_squared(m, n):
    B = build_B(CI)
    F = koszul_F(rank_one(B), build_A(CI), -3)
    assert twist(shift(F, m), n).is_complex()
