from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import props
from cyclovoronoi.hermitian import gram_matrix
from cyclovoronoi.lattice_enum import (
    EnumRequest,
    NotPositiveDefinite,
    _int_range,
    completed_squares,
    is_positive_definite,
    minimum,
    quad_value,
    short_vectors,
)
from cyclovoronoi.voronoi import reference_form


def diag(*d):
    return [[d[i] if i == j else 0 for j in range(len(d))] for i in range(len(d))]


def test_scaled_identity_shell():
    found = short_vectors(diag(*[2] * 8), 2)
    assert len(found) == 8
    assert {x for x, _ in found} == {tuple(int(i == j) for j in range(8)) for i in range(8)}
    assert all(v == 2 for _, v in found)


def test_initial_form_gram():
    g = gram_matrix(reference_form())
    assert minimum(g) == 1
    shortest = short_vectors(g, 0, mode="shortest_nonzero")
    assert len(shortest) == 120
    assert len(short_vectors(g, 0, mode="shortest_nonzero", both_signs=True)) == 240
    assert short_vectors(g, Fraction(99, 100)) == []


def test_all_leq_matches_shortest_mode_at_minimum():
    g = gram_matrix(reference_form())
    assert short_vectors(g, 1) == short_vectors(g, 0, mode="shortest_nonzero")


def test_errors():
    with pytest.raises(NotPositiveDefinite):
        short_vectors(diag(1, -1), 3)
    with pytest.raises(NotPositiveDefinite):
        completed_squares([[1, 2], [2, 1]])
    with pytest.raises(ValueError):
        short_vectors([[1, 0], [1, 1]], 3)
    with pytest.raises(ValueError):
        short_vectors(diag(1, 1), 0)
    with pytest.raises(ValueError):
        EnumRequest(((1,),), Fraction(1), "nearest")
    assert not is_positive_definite(diag(1, 0))
    assert is_positive_definite([[2, 1], [1, 2]])


def test_output_sorted_and_signed():
    g = [[2, 1], [1, 2]]
    found = short_vectors(g, 2, both_signs=True)
    assert [v for _, v in found] == sorted(v for _, v in found)
    assert len(found) == 6  # the hexagonal lattice has six minimal vectors
    assert {x for x, _ in found} == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)}


def _first_positive(x):
    first = next(c for c in x if c)
    return x if first > 0 else tuple(-c for c in x)


def _brute_range(center, radius_sq, window=6):
    c = int(center)
    hits = [t for t in range(c - window, c + window + 1) if (t - center) ** 2 <= radius_sq]
    return (hits[0], hits[-1]) if hits else None


def test_int_range_single_point_at_boundary():
    # the only integer lies exactly on the boundary of the interval
    assert _int_range(Fraction(1, 3), Fraction(4, 9)) == (0, 1)
    assert _int_range(Fraction(7, 2), Fraction(1, 4)) == (3, 4)
    assert _int_range(Fraction(10**20) + Fraction(1, 3), Fraction(1, 9)) == (10**20, 10**20)
    assert _int_range(Fraction(-10**20) - Fraction(1, 3), Fraction(1, 9) - Fraction(1, 10**40)) is None
    assert _int_range(Fraction(0), Fraction(-1)) is None


@settings(max_examples=500)
@given(
    st.fractions(min_value=-50, max_value=50, max_denominator=1000),
    st.fractions(min_value=0, max_value=9, max_denominator=1000),
)
def test_int_range_matches_brute_force(center, radius_sq):
    assert _int_range(center, radius_sq) == _brute_range(center, radius_sq)


@settings(max_examples=150)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_enumeration_against_box_oracle(seed, dim):
    import random

    rng = random.Random(seed)
    g = props.rand_gram(rng, dim)
    bound = Fraction(rng.randint(1, 6 * dim), rng.randint(1, 2))
    props.check_enumeration(g, bound)


@settings(max_examples=150)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_shortest_mode_against_box_oracle(seed, dim):
    import random

    rng = random.Random(seed)
    g = props.rand_gram(rng, dim)
    got = short_vectors(g, 0, mode="shortest_nonzero")
    oracle = props.box_oracle(g, min(g[i][i] for i in range(dim)))
    m = min(quad_value(g, x) for x in oracle)
    assert {v for _, v in got} == {m}
    assert {_first_positive(x) for x, _ in got} == {x for x in oracle if quad_value(g, x) == m}
