from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ordgraph.cones import AbelianVec
from ordgraph.errors import DimensionMismatch, NotCommuting, NotInCorner
from ordgraph.formats import FIXTURES, load_fixture
from ordgraph.pgraph import is_exhaustive, mce
from ordgraph.repmat import (
    KINDS,
    LEFT_REGULAR,
    ULTRAFILTER,
    Matrix,
    bolt_value,
    build_rep,
    builtin_grading,
    check_relators,
    grading_check,
    is_faithful,
    is_tight,
    proj_join,
    proj_leq,
    span_dim,
)

GRAPHS = {name: load_fixture(name) for name in FIXTURES}
M5, SQUARE, FORK = GRAPHS["m5"], GRAPHS["square"], GRAPHS["fork"]
REPS = {(name, kind): build_rep(g, kind) for name, g in GRAPHS.items() for kind in KINDS}
CASES = sorted(REPS)


def E(dim, i, j):
    """Matrix unit with 1-based indices, as written by hand."""
    return Matrix.unit(dim, i - 1, j - 1)


def basis_vector(rep, label):
    return rep.labels.index(label)


# ---------------------------------------------------------------- matrices


def small_matrices(dim=3):
    entry = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    cells = st.dictionaries(st.tuples(st.integers(0, dim - 1), st.integers(0, dim - 1)), entry, max_size=6)
    return cells.map(lambda d: Matrix(dim, d))


@given(small_matrices(), small_matrices(), small_matrices())
def test_matrix_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).adjoint() == b.adjoint() * a.adjoint()
    assert a - a == Matrix.zero(3)
    assert a * Matrix.identity(3) == a


@given(small_matrices())
def test_matrix_text_round_trip(a):
    assert Matrix.from_text(a.to_text()) == a


def test_matrix_basics():
    m = Matrix(2, {(0, 1): Fraction(1, 2), (1, 0): 0})
    assert m.entries == {(0, 1): Fraction(1, 2)}
    assert m.to_text() == "dim 2\n1 2 1/2"
    with pytest.raises(DimensionMismatch):
        m * Matrix.identity(3)
    with pytest.raises(DimensionMismatch):
        Matrix(2, {(2, 0): 1})
    assert E(2, 1, 1).is_projection() and not E(2, 1, 2).is_projection()


def test_proj_join_examples():
    assert proj_join(E(3, 1, 1), E(3, 2, 2)) == E(3, 1, 1) + E(3, 2, 2)
    p = E(3, 1, 1) + E(3, 3, 3)
    assert proj_join(p, p) == p
    rep = REPS[("m5", ULTRAFILTER)]
    assert proj_join(rep.q("c3"), rep.q("t2")) == E(5, 5, 5)
    half = Matrix(2, {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 2), (1, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)})
    with pytest.raises(NotCommuting):
        proj_join(half, E(2, 1, 1))
    assert proj_leq(E(3, 1, 1), p) and not proj_leq(p, E(3, 1, 1))


# ---------------------------------------------------------------- building


def test_m5_ultrafilter_matrix_units():
    rep = REPS[("m5", ULTRAFILTER)]
    assert rep.labels == ("U_v1", "U_c1", "U_t1", "U_c2t1", "U_t2c1")
    for path, i in zip(("v1", "c1", "t1", "c2t1", "t2c1"), range(1, 6)):
        assert rep[path] == E(5, i, 1)
    assert rep["c2"] == E(5, 4, 3)
    assert rep["c3"] == E(5, 5, 4)
    assert rep["t2"] == E(5, 5, 2)


def test_square_and_fork_reps():
    rep = REPS[("square", ULTRAFILTER)]
    col, row = basis_vector(rep, "U_x"), basis_vector(rep, "U_diag")
    assert rep["e_h"] == Matrix.unit(rep.dim, row, col)
    fork = REPS[("fork", LEFT_REGULAR)]
    assert fork.labels == ("u", "w1", "w2", "e1", "e2")
    assert all(m.dim == 5 for m in fork.mats.values())
    assert fork["e1"] == Matrix.unit(5, 3, 1)


@pytest.mark.parametrize("case", CASES)
def test_builtin_reps_are_partial_permutations(case):
    rep = REPS[case]
    for m in rep.mats.values():
        assert set(m.entries.values()) <= {1}
        assert len({i for i, _ in m.entries}) == len(m.entries) == len({j for _, j in m.entries})
    for v in rep.graph.vertices:
        assert rep[v].is_projection()
        assert all(i == j for i, j in rep[v].entries)


# ---------------------------------------------------------------- relators


@pytest.mark.parametrize("case", CASES)
def test_relators_and_faithfulness(case):
    rep = REPS[case]
    assert check_relators(rep).passed
    assert is_faithful(rep)


def test_broken_rep_fails_relators():
    rep = REPS[("m5", ULTRAFILTER)]
    broken = rep.replace(c1=Matrix.zero(5))
    report = check_relators(broken)
    assert report.status == "fail"
    assert ("T3", "c1") in report.witnesses
    assert not is_faithful(broken)
    zero = rep.replace(**{p: Matrix.zero(5) for p in M5.paths})
    assert not is_faithful(zero)


def test_malformed_rep():
    rep = REPS[("m5", ULTRAFILTER)]
    with pytest.raises(DimensionMismatch):
        check_relators(rep.replace(c1=Matrix.zero(4)))


@pytest.mark.parametrize("case", CASES)
def test_range_projections_commute(case):
    rep = REPS[case]
    g = rep.graph
    for a, b in itertools.product(g.all_paths(), repeat=2):
        total = Matrix.zero(rep.dim)
        for lam in mce(g, a, b):
            total = total + rep.q(lam)
        assert rep.q(a) * rep.q(b) == total == rep.q(b) * rep.q(a)


# ---------------------------------------------------------------- bolts


def test_bolt_examples():
    left = REPS[("m5", LEFT_REGULAR)]
    rank_two = Matrix.unit(13, basis_vector(left, "v5"), basis_vector(left, "v5")) + Matrix.unit(
        13, basis_vector(left, "t2"), basis_vector(left, "t2")
    )
    assert bolt_value(left, "v5", {"c3"}) == rank_two
    assert bolt_value(REPS[("m5", ULTRAFILTER)], "v5", {"c3"}).is_zero()
    for rep in REPS.values():
        for mu in rep.graph.all_paths():
            assert bolt_value(rep, mu, {mu}).is_zero()
    with pytest.raises(NotInCorner):
        bolt_value(left, "v5", {"c1"})


def test_tight_examples():
    assert is_tight(REPS[("m5", ULTRAFILTER)]).passed
    left = is_tight(REPS[("m5", LEFT_REGULAR)])
    assert left.status == "fail"
    assert ("bolt", "v5", "{c3}") in left.witnesses
    fork = is_tight(REPS[("fork", LEFT_REGULAR)])
    assert fork.witnesses == (("bolt", "u", "{e1,e2}"),)


@pytest.mark.parametrize("case", CASES)
def test_minimal_sets_decide_tightness(case):
    rep = REPS[case]
    assert is_tight(rep).status == is_tight(rep, all_subsets=True).status


@pytest.mark.parametrize("name", FIXTURES)
def test_left_regular_bolts_vanish_only_through_mu(name):
    g = GRAPHS[name]
    rep = REPS[(name, LEFT_REGULAR)]
    for mu in g.all_paths():
        pool = g.sorted(g.extensions(mu))
        for k in range(1, len(pool) + 1):
            for E_ in itertools.combinations(pool, k):
                if is_exhaustive(g, mu, E_):
                    assert bolt_value(rep, mu, E_).is_zero() == (mu in E_)


@pytest.mark.parametrize("case", CASES)
def test_join_product_equivalence(case):
    rep = REPS[case]
    g = rep.graph
    for mu in g.all_paths():
        pool = g.sorted(g.extensions(mu))
        for k in range(1, len(pool) + 1):
            for B in itertools.combinations(pool, k):
                joined = Matrix.zero(rep.dim)
                for beta in B:
                    joined = proj_join(joined, rep.q(beta))
                assert (joined == rep.q(mu)) == bolt_value(rep, mu, B).is_zero()


# ---------------------------------------------------------------- gradings


@pytest.mark.parametrize("case", CASES)
def test_builtin_grading(case):
    rep = REPS[case]
    assert grading_check(rep, builtin_grading(rep))


def test_constant_grading_fails():
    rep = REPS[("m5", LEFT_REGULAR)]
    flat = {label: M5.cone.identity() for label in rep.labels}
    assert not grading_check(rep, flat)
    square = REPS[("square", ULTRAFILTER)]
    assert not grading_check(square, {label: AbelianVec((0, 0)) for label in square.labels})


# ---------------------------------------------------------------- spans


def test_span_examples():
    assert span_dim(REPS[("m5", ULTRAFILTER)]) == 25
    assert span_dim(REPS[("m5", ULTRAFILTER)], "balanced") == 5
    assert span_dim(REPS[("fork", ULTRAFILTER)]) == 8


def _dense_rank(mats):
    """Plain Gaussian elimination on flattened matrices, as an oracle."""
    rows = [[m.entries.get((i, j), Fraction(0)) for i in range(m.dim) for j in range(m.dim)] for m in mats]
    rank, col = 0, 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


@pytest.mark.parametrize("case", CASES)
def test_span_against_dense_rank(case):
    rep = REPS[case]
    g = rep.graph
    gens = [rep[a] * rep[b].adjoint() for a in g.all_paths() for b in g.all_paths()]
    assert span_dim(rep, closed=False) == _dense_rank(gens)


@pytest.mark.parametrize("case", CASES)
def test_zigzag_span_is_already_closed(case):
    rep = REPS[case]
    assert span_dim(rep) == span_dim(rep, closed=False)
    assert span_dim(rep, "balanced") <= span_dim(rep)


def test_ultrafilter_span_is_block_count():
    # a partial-permutation family acting transitively on k orbits of size n_i spans Σ n_i²
    for name in FIXTURES:
        rep = REPS[(name, ULTRAFILTER)]
        orbit = {i: {i} for i in range(rep.dim)}
        for m in rep.mats.values():
            for i, j in m.entries:
                merged = orbit[i] | orbit[j]
                for k in merged:
                    orbit[k] = merged
        blocks = {frozenset(o) for o in orbit.values()}
        assert span_dim(rep) == sum(len(b) ** 2 for b in blocks)
