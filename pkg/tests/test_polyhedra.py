import random
from math import comb

import pytest

from cyclovoronoi.hermitian import evaluate
from cyclovoronoi.polyhedra import (
    PointConfig,
    RankDeficient,
    face_lattice,
    face_rank,
    facets,
    facets_by_walk,
    mask_to_indices,
)

UNIT = [tuple(int(i == j) for j in range(8)) for i in range(8)]


def test_simplex_cone():
    cfg = PointConfig.build(UNIT)
    fs = facets(cfg)
    assert len(fs) == 8
    assert all(len(f.vertices) == 7 for f in fs)
    lat = face_lattice(cfg, fs)
    assert lat.counts() == {r: comb(8, r) for r in range(1, 9)}
    assert {f.mask for f in facets_by_walk(cfg)} == {f.mask for f in fs}


def test_rank_deficient():
    with pytest.raises(RankDeficient) as e:
        facets(PointConfig.build(UNIT[:7]))
    assert e.value.rank == 7


def test_duplicate_points_rejected():
    with pytest.raises(ValueError):
        PointConfig.build(UNIT + UNIT[:1])


def test_mask_helpers():
    assert mask_to_indices(0b101001) == [0, 3, 5]
    assert mask_to_indices(0) == []


def test_initial_cone_facets(initial):
    fs = initial.facets
    assert len(fs) == 118
    profile = {}
    for f in fs:
        profile[len(f.vertices)] = profile.get(len(f.vertices), 0) + 1
    assert profile == {12: 14, 9: 80, 7: 24}
    for f in fs:
        vals = [evaluate(f.form, v) for v in initial.vectors]
        assert all(x >= 0 for x in vals)
        assert {i for i, x in enumerate(vals) if x == 0} == set(f.vertices)


def test_two_hull_algorithms_agree(initial):
    walk = facets_by_walk(initial.q_points)
    assert sorted(f.mask for f in walk) == sorted(f.mask for f in initial.facets)


def test_hull_independent_of_point_order(initial):
    rng = random.Random(3)
    perm = list(range(24))
    rng.shuffle(perm)
    cfg = PointConfig.build([initial.q_points.points[i] for i in perm])
    got = {frozenset(perm[i] for i in f.vertices) for f in facets(cfg)}
    assert got == {f.vertices for f in initial.facets}


def test_face_lattice_shape(initial, lattice):
    assert len(lattice.by_rank(1)) == 24  # every point is a vertex
    assert all(bin(m).count("1") == 2 for m in lattice.by_rank(2))
    assert any(bin(m).count("1") == 6 for m in lattice.by_rank(5))
    assert len(lattice.by_rank(8)) == 1
    assert len(lattice.by_rank(7)) == 118
    for r, masks in lattice.faces.items():
        for m in masks[:20]:
            assert face_rank(initial.q_points, m) == r
    # each face is the meet of the facets containing it
    fmasks = [f.mask for f in initial.facets]
    for m in lattice.by_rank(3):
        meet = (1 << 24) - 1
        for fm in fmasks:
            if fm & m == m:
                meet &= fm
        assert meet == m
