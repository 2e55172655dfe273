from fractions import Fraction
from itertools import product

import pytest

from artifact import linalg as la
from artifact.finfield import all_subspaces
from artifact.lattice import (BudgetExceeded, Lattice, canonicalize, intermediate_lattices,
                              smith_valuations, stabilizes)
from artifact.plocal import FieldConfig, FNumber

F3 = FieldConfig(3)


def fmat(rows, f=F3):
    return la.matrix(rows, f.eps)


def test_canonical_form_ignores_basis_choice():
    I = fmat([[1, 0], [0, 1]])
    U = la.matrix([[FNumber(2, 1, F3.eps), 1], [1, 0]], F3.eps)
    assert canonicalize(I, F3) == Lattice.standard(2, F3)
    assert canonicalize(la.mul(I, U), F3) == Lattice.standard(2, F3)
    B = la.matrix([[0, FNumber(3, 0, F3.eps) * F3.delta], [FNumber(-3, 0, F3.eps), 0]], F3.eps)
    assert canonicalize(B, F3) == Lattice.standard(2, F3, k=1)


def test_dual_diagonal_forms():
    L = Lattice.standard(3, F3)
    assert L.dual(la.identity(3, F3.eps)) == L
    H = la.diag([1, 1, 3], F3.eps)
    expected = Lattice.from_matrix(la.diag([1, 1, Fraction(1, 3)], F3.eps), F3)
    assert L.dual(H) == expected
    assert L.scaled(1).dual(H) == L.dual(H).scaled(-1)


@pytest.mark.parametrize("diag,a,t", [((1, 1, 1), (0, 0, 0), 0), ((1, 1, 3), (0, 0, 1), 1),
                                      ((3, 3), (1, 1), 2)])
def test_invariants(diag, a, t):
    L = Lattice.standard(len(diag), F3)
    H = la.diag(list(diag), F3.eps)
    prof = L.invariants(H)
    assert prof.a == a and prof.type_t == t
    assert L.is_vertex(H)
    assert L.is_selfdual(H) == (t == 0)


def test_non_vertex_profile():
    L = Lattice.standard(2, F3)
    assert not L.is_vertex(la.diag([1, 9], F3.eps))


def test_intermediate_count_matches_subspace_count():
    L = Lattice.standard(2, F3)
    lo = L.scaled(1)
    # submodules of O_F^2 / p = F_9^2, counted by an independent enumeration
    expected = len(all_subspaces(3, 2, 2))
    assert expected == 12
    assert len(intermediate_lattices(lo, L)) == 12
    assert intermediate_lattices(L, L) == [L]


def test_intermediate_selfdual_against_filter():
    L = Lattice.standard(2, F3)
    lo, hi = L.scaled(1), L
    I = la.identity(2, F3.eps)
    assert intermediate_lattices(lo, hi, lambda M: M.is_selfdual(I)) == [L]
    # for the form p^-1 (x, y) these are the isotropic lines of F_9^2: q + 1 of them
    H = la.scale(I, FNumber(Fraction(1, 3), 0, F3.eps))
    every = intermediate_lattices(lo, hi)
    picked = intermediate_lattices(lo, hi, lambda M: M.is_selfdual(H))
    assert picked == [M for M in every if M.is_selfdual(H)]
    assert len(picked) == 4


def test_stabilizes():
    L = Lattice.standard(2, F3)
    g = fmat([[1, 1], [0, 1]])
    assert stabilizes(la.identity(2, F3.eps), L)
    assert not stabilizes(la.scale(la.identity(2, F3.eps), FNumber(3, 0, F3.eps)), L)
    assert stabilizes(g, L) and stabilizes(g, L.scaled(2))


def test_smith_valuations():
    A = la.diag([3, Fraction(1, 9)], F3.eps)
    assert sorted(smith_valuations(A, 3)) == [-2, 1]


def test_budget_is_enforced():
    L = Lattice.standard(3, F3)
    with pytest.raises(BudgetExceeded):
        intermediate_lattices(L.scaled(1), L, budget=10)
