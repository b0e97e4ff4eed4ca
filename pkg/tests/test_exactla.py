import pytest
from hypothesis import given, settings, strategies as st

from hecke_k.errors import DimensionError, IllDefinedMapError, NonZeroCompositeError
from hecke_k.exactla import (AbHom, FgAbGroup, IntMatrix, augmentation, block_hom, cokernel,
                             direct_sum, format_group, homology_at, image_basis, is_isomorphic,
                             kernel, kernel_basis, lattice_solve, parse_group_string, pi_shift,
                             power, smith_normal_form)

from oracles import determinantal_diagonal, naive_diagonal, sympy_diagonal

Z = FgAbGroup.free(1)


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols)


def diag_of(S):
    return [S[i, i] for i in range(min(S.rows, S.cols))]


def matrices(max_rows=6, max_cols=6, bound=20):
    return st.integers(0, max_rows).flatmap(lambda r: st.integers(0, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                           min_size=r, max_size=r).map(lambda rows: M(rows, c))))


# -- IntMatrix ---------------------------------------------------------------

def test_matrix_shapes_and_products():
    A = M([[1, 2], [3, 4]])
    assert A.shape == (2, 2)
    assert (A @ IntMatrix.identity(2)) == A
    assert [list(r) for r in A.T.to_rows()] == [[1, 3], [2, 4]]
    assert A.determinant() == -2
    E = IntMatrix.zeros(0, 3)
    assert (IntMatrix.zeros(2, 0) @ E).shape == (2, 3)
    assert (IntMatrix.zeros(2, 0) @ E).is_zero()


def test_matrix_entries_are_exact_at_large_magnitude():
    big = 10 ** 40
    A = M([[big, 1], [0, big]])
    assert (A @ A)[0, 0] == big * big
    assert A.determinant() == big * big


def test_ragged_rows_rejected():
    with pytest.raises(DimensionError):
        M([[1, 2], [3]])


# -- Smith normal form ----------------------------------------------------------

def test_snf_identity():
    s = smith_normal_form(IntMatrix.identity(2))
    assert s.S == IntMatrix.identity(2)


def test_snf_two_by_two():
    assert diag_of(smith_normal_form(M([[2, 4], [6, 8]])).S) == [2, 4]


def test_snf_zero_one_by_one():
    assert smith_normal_form(M([[0]])).S == M([[0]])


def test_snf_empty_shapes():
    for r, c in ((0, 0), (0, 3), (3, 0)):
        s = smith_normal_form(IntMatrix.zeros(r, c))
        assert s.U.shape == (r, r) and s.V.shape == (c, c)
        assert s.rank == 0


def test_snf_is_deterministic():
    A = M([[4, 6, 2], [8, 3, 1], [0, 5, 7]])
    a, b = smith_normal_form(A), smith_normal_form(A)
    assert (a.U, a.S, a.V) == (b.U, b.S, b.V)


def check_snf(A):
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.S
    assert abs(s.U.determinant()) == 1 and abs(s.V.determinant()) == 1
    assert s.U @ s.U_inv == IntMatrix.identity(A.rows)
    assert s.V @ s.V_inv == IntMatrix.identity(A.cols)
    d = diag_of(s.S)
    for i in range(s.S.rows):
        for j in range(s.S.cols):
            if i != j:
                assert s.S[i, j] == 0
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    return s


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_invariants(A):
    s = check_snf(A)
    nonzero = [x for x in diag_of(s.S) if x]
    assert nonzero == naive_diagonal(A.to_rows())


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4, 9))
def test_snf_matches_sympy_and_minors(A):
    nonzero = [x for x in diag_of(smith_normal_form(A).S) if x]
    rows = [list(r) for r in A.to_rows()]
    assert nonzero == sympy_diagonal(rows)
    assert nonzero == determinantal_diagonal(rows)


@settings(max_examples=60, deadline=None)
@given(matrices(5, 5))
def test_snf_of_smith_form_is_itself(A):
    S = smith_normal_form(A).S
    assert smith_normal_form(S).S == S


# -- lattice solving --------------------------------------------------------------

def test_lattice_solve_examples():
    assert lattice_solve(M([[2]]), [4]) == [2]
    assert lattice_solve(M([[2]]), [3]) is None
    x = lattice_solve(M([[2, 3]]), [1])
    assert 2 * x[0] + 3 * x[1] == 1


def test_lattice_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        lattice_solve(M([[1, 2]]), [1, 2])


@settings(max_examples=100, deadline=None)
@given(matrices(4, 4, 6), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_lattice_solve_finds_planted_solutions(A, x):
    b = A.apply(x[:A.cols])
    y = lattice_solve(A, b)
    assert y is not None and A.apply(y) == b


def test_lattice_solve_agrees_with_brute_force():
    from itertools import product
    A = M([[2, 4], [0, 6]])
    reachable = {tuple(A.apply(list(v))) for v in product(range(-6, 7), repeat=2)}
    for b in product(range(-4, 5), repeat=2):
        got = lattice_solve(A, list(b))
        assert (got is not None) == (b in reachable)


@settings(max_examples=80, deadline=None)
@given(matrices(5, 5, 10))
def test_kernel_and_image_bases(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    s = smith_normal_form(A)
    assert K.cols == A.cols - s.rank
    assert image_basis(A).cols == s.rank


# -- groups -----------------------------------------------------------------------

def test_group_invariants_and_text():
    assert str(FgAbGroup.trivial()) == "0"
    assert str(Z) == "Z"
    assert str(FgAbGroup.from_invariants(2, [2, 6])) == "Z^2 + Z/2 + Z/6"
    G = FgAbGroup(2, [[2, 0], [0, 3]])
    assert G.invariant_factors == (0, (6,))
    assert str(G) == "Z/6"
    assert FgAbGroup(1, [[1]]).is_trivial()
    assert FgAbGroup.from_invariants(1, [4]).order() is None
    assert FgAbGroup.from_invariants(0, [2, 4]).order() == 8


def test_parse_group_string_inverts_formatting():
    for text in ("0", "Z", "Z^3", "Z/2", "Z + Z/2 + Z/4", "Z^2 + Z/6"):
        rank, torsion = parse_group_string(text)
        assert format_group(FgAbGroup.from_invariants(rank, torsion)) == text


def test_is_isomorphic_examples():
    Z2, Z3, Z6 = FgAbGroup.cyclic(2), FgAbGroup.cyclic(3), FgAbGroup.cyclic(6)
    assert is_isomorphic(direct_sum([Z2, Z3])[0], Z6)
    assert not is_isomorphic(Z, Z2)
    G = FgAbGroup(3, [[2, 4, 0], [0, 6, 8]])
    assert is_isomorphic(G, G)


def test_direct_sum_examples():
    assert direct_sum([])[0].is_trivial()
    assert direct_sum([Z, FgAbGroup.cyclic(2)])[0].invariant_factors == (1, (2,))
    assert str(direct_sum([FgAbGroup.cyclic(2), FgAbGroup.cyclic(3)])[0]) == "Z/6"


def test_direct_sum_injections_and_projections():
    A, B = FgAbGroup.cyclic(4), FgAbGroup.from_invariants(1, [2])
    S, inj, proj = direct_sum([A, B])
    assert proj[0].compose(inj[0]).is_identity()
    assert proj[1].compose(inj[1]).is_identity()
    assert proj[1].compose(inj[0]).is_zero()


def test_power():
    assert power(FgAbGroup.cyclic(3), 3).invariant_factors == (0, (3, 3, 3))


# -- homomorphisms ----------------------------------------------------------------

def test_ill_defined_map_rejected():
    with pytest.raises(IllDefinedMapError):
        AbHom(FgAbGroup.cyclic(2), Z, M([[1]]))
    with pytest.raises(IllDefinedMapError):
        AbHom(FgAbGroup.cyclic(4), FgAbGroup.cyclic(3), M([[1]]))
    AbHom(FgAbGroup.cyclic(4), FgAbGroup.cyclic(2), M([[1]]))


def test_equality_of_maps_is_modulo_relations():
    Z2 = FgAbGroup.cyclic(2)
    assert AbHom(Z, Z2, M([[1]])).equals(AbHom(Z, Z2, M([[3]])))
    assert AbHom(Z, Z2, M([[2]])).is_zero()


def test_cokernel_examples():
    assert str(cokernel(AbHom(Z, Z, M([[3]])))[0]) == "Z/3"
    Z2 = FgAbGroup.free(2)
    assert str(cokernel(AbHom.zero(Z2, Z2))[0]) == "Z^2"
    assert cokernel(AbHom(Z2, Z2, M([[2, 0], [0, 3]])))[0].invariant_factors == (0, (6,))


def test_cokernel_projection_is_surjective_and_kills_image():
    h = AbHom(FgAbGroup.free(2), FgAbGroup.free(3), M([[1, 0], [2, 4], [0, 6]]))
    Q, p = cokernel(h)
    assert p.compose(h).is_zero()
    assert cokernel(p)[0].is_trivial()


def test_kernel_examples():
    assert kernel(AbHom(Z, Z, M([[3]])))[0].is_trivial()
    assert str(kernel(AbHom.zero(Z, Z))[0]) == "Z"
    K, inc = kernel(AbHom(FgAbGroup.cyclic(4), FgAbGroup.cyclic(2), M([[1]])))
    assert str(K) == "Z/2"
    # the generator of the kernel is the class of 2
    assert inc.matrix[0, 0] % 4 == 2


def test_kernel_by_brute_force_on_finite_groups():
    from itertools import product
    A = FgAbGroup(2, [[4, 0], [0, 6]])
    B = FgAbGroup(1, [[6]])
    h = AbHom(A, B, M([[3, 2]]))
    count = sum(1 for a, b in product(range(4), range(6)) if (3 * a + 2 * b) % 6 == 0)
    K, inc = kernel(h)
    assert K.order() == count
    assert h.compose(inc).is_zero()


def test_homology_examples():
    Zk = FgAbGroup.free(3)
    zero = AbHom.zero(Zk, Zk)
    assert is_isomorphic(homology_at(zero, zero), Zk)
    two = AbHom(Z, Z, M([[2]]))
    to_zero = AbHom.zero(Z, FgAbGroup.trivial())
    assert homology_at(to_zero, two).invariant_factors == (0, (2,))
    assert homology_at(AbHom(Z, Z, M([[2]])), AbHom.zero(FgAbGroup.trivial(), Z)).is_trivial()
    assert str(homology_at(AbHom(Z, Z, M([[0]])), AbHom.zero(FgAbGroup.trivial(), Z))) == "Z"


def test_homology_rejects_nonzero_composite():
    two = AbHom(Z, Z, M([[2]]))
    with pytest.raises(NonZeroCompositeError):
        homology_at(two, two)


def test_homology_rejects_mismatched_groups():
    with pytest.raises(DimensionError):
        homology_at(AbHom.zero(Z, Z), AbHom.zero(Z, FgAbGroup.free(2)))


# -- permutation sequence ---------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_pi_minus_id_then_augmentation_is_exact(m):
    A = FgAbGroup.from_invariants(1, [2, 4])
    Am = power(A, m)
    d = pi_shift(A, m) - AbHom.identity(Am)
    aug = augmentation(A, m)
    assert aug.compose(d).is_zero()
    assert homology_at(aug, d).is_trivial()
    assert cokernel(aug)[0].is_trivial()
    assert is_isomorphic(cokernel(d)[0], A)


def test_pi_power_m_is_identity():
    A = FgAbGroup.from_invariants(1, [3])
    P = AbHom.identity(power(A, 4))
    for _ in range(4):
        P = pi_shift(A, 4).compose(P)
    assert P.is_identity()
    assert pi_shift(A, 4, 4).is_identity()


def test_block_map_from_zero_sized_blocks():
    T = FgAbGroup.trivial()
    h = block_hom(T, Z, [], [Z], {})
    assert h.matrix.shape == (1, 0)
    assert str(cokernel(h)[0]) == "Z"


# -- properties ------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(matrices(5, 5, 8))
def test_cokernel_rank_on_free_groups(A):
    h = AbHom(FgAbGroup.free(A.cols), FgAbGroup.free(A.rows), A)
    Q = cokernel(h)[0]
    assert Q.rank == A.rows - smith_normal_form(A).rank


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4, 6), matrices(4, 4, 6))
def test_cokernel_commutes_with_direct_sum(A, B):
    ha = AbHom(FgAbGroup.free(A.cols), FgAbGroup.free(A.rows), A)
    hb = AbHom(FgAbGroup.free(B.cols), FgAbGroup.free(B.rows), B)
    src = [ha.source, hb.source]
    tgt = [ha.target, hb.target]
    h = block_hom(direct_sum(src)[0], direct_sum(tgt)[0], src, tgt, {(0, 0): ha, (1, 1): hb})
    assert is_isomorphic(cokernel(h)[0], direct_sum([cokernel(ha)[0], cokernel(hb)[0]])[0])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([0, 0, 2, 3, 4, 6]), max_size=4))
def test_zero_zero_homology_is_the_group(orders):
    cols = [[o if i == j else 0 for i in range(len(orders))] for j, o in enumerate(orders) if o]
    A = FgAbGroup(len(orders), cols)
    z = AbHom.zero(A, A)
    assert is_isomorphic(homology_at(z, z), A)
