import pytest

from hecke_k.ahss import (GradedCoeffSystem, assemble_k_groups, e1_page, e2_from_e1, e2_page,
                          edge_h0_check, render_page)
from hecke_k.bredon import Cell, CellOrbitComplex, Edge, OneSkeletonData, first_differential, simplicial_complex
from hecke_k.errors import FunctorialityError, HeckeKError
from hecke_k.exactla import FgAbGroup, IntMatrix, cokernel, is_isomorphic
from hecke_k.fincat import CoeffSystem, FinCategory
from hecke_k.mvcube import simplex_model

Z = FgAbGroup.free(1)


def graded(cat, values, connective=False):
    return GradedCoeffSystem(cat, {q: CoeffSystem.constant(cat, A) for q, A in values.items()},
                             connective)


def test_e1_single_vertex():
    cat = FinCategory.trivial("H")
    X = CellOrbitComplex(cat, ((Cell("v", "H"),),), {})
    G = graded(cat, {0: Z, 1: FgAbGroup.cyclic(2)})
    page = e1_page(X, G)
    assert str(page[(0, 0)]) == "Z" and str(page[(0, 1)]) == "Z/2"
    assert page[(1, 0)].is_trivial() and page[(0, 5)].is_trivial()


def test_e1_interval_row():
    X = simplicial_complex([(0, 1)])
    page = e1_page(X, graded(X.category, {0: Z}))
    assert str(page[(0, 0)]) == "Z^2" and str(page[(1, 0)]) == "Z"
    assert [list(r) for r in page.differentials[(1, 0)].matrix.to_rows()] == [[-1], [1]]


def test_empty_window():
    X = simplicial_complex([(0, 1)])
    G = GradedCoeffSystem(X.category, {})
    assert G.window is None
    assert e1_page(X, G).nonzero() == []
    assert assemble_k_groups(e2_page(X, G)) == []


def test_e2_is_homology_of_e1_rows():
    X = simplicial_complex([(0, 1, 2), (2, 3)])
    G = graded(X.category, {0: Z, 1: FgAbGroup.from_invariants(1, [3])})
    direct = e2_page(X, G)
    via = e2_from_e1(e1_page(X, G))
    for key in set(direct.entries) | set(via.entries):
        assert is_isomorphic(direct[key], via[key])


def test_e2_one_dimensional_ends():
    X = simplicial_complex([(0, 1), (1, 2), (0, 2)])
    page = e2_page(X, graded(X.category, {0: Z}))
    assert str(page[(0, 0)]) == "Z" and str(page[(1, 0)]) == "Z"


def test_connective_flag_enforced():
    X = simplicial_complex([(0, 1)])
    with pytest.raises(FunctorialityError):
        graded(X.category, {-1: Z, 0: Z}, connective=True)


def test_connective_page_vanishes_below_zero():
    X = simplicial_complex([(0, 1, 2)])
    G = graded(X.category, {-2: FgAbGroup.trivial(), -1: FgAbGroup.trivial(), 0: Z, 1: Z},
               connective=True)
    page = e2_page(X, G)
    assert all(q >= 0 for (_, q) in page.nonzero())
    assert page.nonzero() == [(0, 0), (0, 1)]


def test_edge_check_one_orbit():
    cat = FinCategory.trivial("H")
    X = CellOrbitComplex(cat, ((Cell("v", "H"),),), {})
    assert edge_h0_check(X, CoeffSystem.constant(cat, FgAbGroup.cyclic(4)))


def test_edge_check_on_simplex_model():
    model = simplex_model(2, FgAbGroup.from_invariants(1, [2]))
    assert edge_h0_check(model.to_complex(), model.coefficients)


def test_edge_check_detects_broken_data():
    # a loop whose ends act by 1 and -1: both sides are Z/2
    cat = FinCategory.build(["G", "E"], [("p", "E", "G"), ("q", "E", "G")])
    data = OneSkeletonData(cat, (Cell("v", "G"),), (Edge("e", "E", 0, 0, "p", "q"),))
    F = CoeffSystem.from_matrices(cat, {"G": Z, "E": Z},
                                  {"p": IntMatrix.from_rows([[1]]), "q": IntMatrix.from_rows([[-1]])})
    assert str(cokernel(first_differential(data, F))[0]) == "Z/2"
    assert edge_h0_check(data.to_complex(), F) is True
    # without the edge the cells no longer glue: H0 = Z^2 against a colimit Z/2
    bare = CellOrbitComplex(cat, ((Cell("v", "G"), Cell("w", "E")),), {})
    assert edge_h0_check(bare, F) is False


def test_assembly_on_interval():
    X = simplicial_complex([(0, 1)])
    page = e2_page(X, graded(X.category, {0: Z}))
    pieces = dict(assemble_k_groups(page))
    assert str(pieces[0][0]) == "Z" and pieces[0][1].is_trivial()
    assert pieces[1][0].is_trivial() and pieces[1][1].is_trivial()
    assert sorted(pieces) == [-1, 0, 1]


def test_assembly_zero_system():
    X = simplicial_complex([(0, 1)])
    page = e2_page(X, graded(X.category, {0: FgAbGroup.trivial(), 1: FgAbGroup.trivial()}))
    assert all(a.is_trivial() and b.is_trivial() for _, (a, b) in assemble_k_groups(page))


def test_assembly_refuses_dimension_two():
    X = simplicial_complex([(0, 1, 2)])
    with pytest.raises(HeckeKError) as err:
        assemble_k_groups(e2_page(X, graded(X.category, {0: Z})))
    assert err.value.code == "DIMENSION"


def test_degree_zero_piece_is_first_cokernel():
    cat = FinCategory.build(["U", "W", "E"], [("a", "E", "U"), ("b", "E", "W")])
    data = OneSkeletonData(cat, (Cell("u", "U"), Cell("w", "W")), (Edge("e", "E", 0, 1, "a", "b"),))
    F0 = CoeffSystem.from_matrices(cat, {"U": Z, "W": Z, "E": Z},
                                   {"a": IntMatrix.from_rows([[2]]), "b": IntMatrix.from_rows([[2]])})
    G = GradedCoeffSystem(cat, {-1: CoeffSystem.zero(cat), 0: F0}, connective=True)
    pieces = dict(assemble_k_groups(e2_page(data.to_complex(), G)))
    assert is_isomorphic(pieces[0][0], cokernel(first_differential(data, F0))[0])


def test_render_page_layout():
    X = simplicial_complex([(0, 1)])
    text = render_page(e2_page(X, graded(X.category, {0: Z, 1: FgAbGroup.cyclic(2)})))
    lines = text.splitlines()
    assert lines[0] == "E2"
    assert lines[1].startswith("q=1") and "Z/2" in lines[1]
    assert lines[-1].split() == ["p=0", "p=1"]
