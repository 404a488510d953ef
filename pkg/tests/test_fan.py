"""Fan construction, validation, face machinery, smooth/complete predicates."""

import random

import pytest

from toricpic.errors import InputError
from toricpic.fan import Fan, cone_intersection, faces, is_complete, is_smooth, validate_fan
from toricpic.library import NAMED_FAN_NAMES, named_fan
from toricpic.polyhedra import cone_intersection_rays


def test_p2_is_valid_smooth_complete():
    report = validate_fan(named_fan("P2"))
    assert report.valid and report.smooth and report.complete
    assert report.diagnostics == ()


def test_single_cone_valid_not_complete():
    fan = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
    report = validate_fan(fan)
    assert report.valid
    assert not report.complete


def test_non_overlapping_pair_is_valid():
    # Sectors [0,45] and [63.4,90] degrees meet only at the origin, which is
    # a common face, so this fan is valid (and clearly not complete).
    fan = Fan(2, [(1, 0), (1, 1), (1, 2), (0, 1)], [(0, 1), (2, 3)])
    report = validate_fan(fan)
    assert report.valid
    assert not report.complete


def test_overlapping_interiors_invalid():
    # Sectors [0,63.4] and [45,90] degrees overlap in a 2-dimensional set;
    # their intersection is not a face of either.
    fan = Fan(2, [(1, 0), (1, 2), (1, 1), (0, 1)], [(0, 1), (2, 3)])
    report = validate_fan(fan)
    assert not report.valid
    assert any("not a common face" in d for d in report.diagnostics)


def test_nested_max_cones_invalid():
    fan = Fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    report = validate_fan(fan)
    assert not report.valid
    assert any("contains the other" in d for d in report.diagnostics)


def test_line_through_origin_invalid():
    fan = Fan(1, [(1,), (-1,)], [(0, 1)])
    report = validate_fan(fan)
    assert not report.valid
    assert any("line through the origin" in d for d in report.diagnostics)


def test_redundant_generator_invalid():
    fan = Fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1, 2)])
    report = validate_fan(fan)
    assert not report.valid
    assert any("redundant" in d for d in report.diagnostics)


def test_unused_ray_invalid():
    fan = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1)])
    report = validate_fan(fan)
    assert not report.valid
    assert any("no maximal cone" in d for d in report.diagnostics)


def test_constructor_rejections():
    with pytest.raises(InputError):
        Fan(2, [(0, 0), (1, 0)], [(0, 1)])  # zero ray
    with pytest.raises(InputError):
        Fan(2, [(1, 0), (2, 0)], [(0, 1)])  # duplicate after normalization
    with pytest.raises(InputError):
        Fan(2, [(1, 0), (0, 1)], [(0, 5)])  # index out of range
    with pytest.raises(InputError):
        Fan(7, [tuple(1 if i == j else 0 for j in range(7)) for i in range(7)], [tuple(range(7))])
    with pytest.raises(InputError):
        Fan(2, [(1, 0), (0, 1)], [])  # no maximal cones


def test_rays_normalized_primitive():
    fan = Fan(2, [(2, 4), (3, 0)], [(0, 1)])
    assert fan.rays == ((1, 2), (1, 0))


def test_smoothness_examples():
    assert is_smooth(named_fan("P2"))
    assert is_smooth(named_fan("F1"))
    assert not is_smooth(Fan(2, [(1, 0), (1, 2)], [(0, 1)]))  # determinant 2
    assert not is_smooth(named_fan("P112"))


def test_completeness_examples():
    assert is_complete(named_fan("P2"))
    assert is_complete(named_fan("F1"))
    assert not is_complete(Fan(2, [(1, 0), (0, 1)], [(0, 1)]))


def test_three_quadrants_not_complete():
    # Full-dimensional and pairwise-face-valid, but the support misses the
    # fourth quadrant: boundary facets are incident to one cone only.
    fan = Fan(2, [(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
    report = validate_fan(fan)
    assert report.valid
    assert not report.complete


def test_non_pure_fan_gets_completeness_diagnostic():
    fan = Fan(2, [(1, 0), (0, 1)], [(0,), (1,)])
    report = validate_fan(fan)
    assert report.valid
    assert not report.complete
    assert any("full-dimensional" in d for d in report.diagnostics)


def test_predicates_require_valid_fan():
    bad = Fan(2, [(1, 0), (1, 2), (1, 1), (0, 1)], [(0, 1), (2, 3)])
    with pytest.raises(InputError):
        is_smooth(bad)
    with pytest.raises(InputError):
        is_complete(bad)


def test_named_fan_classification():
    smooth_names = {"P1", "P2", "P3", "P1xP1", "F1", "F2", "F3"}
    for name in NAMED_FAN_NAMES:
        fan = named_fan(name)
        report = validate_fan(fan)
        assert report.valid, name
        assert report.complete, name
        assert report.smooth == (name in smooth_names), name


def test_faces_of_smooth_quadrant():
    fan = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
    face_sets = {f.ray_indices for f in faces(fan, fan.max_cones[0])}
    assert face_sets == {(), (0,), (1,), (0, 1)}


def test_faces_of_zero_cone():
    fan = named_fan("P2")
    zero = fan.cone_of(())
    assert faces(fan, zero) == [zero]


def test_faces_of_cone_over_square():
    fan = Fan(3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [(0, 1, 2, 3)])
    fs = faces(fan, fan.max_cones[0])
    by_dim = {}
    for f in fs:
        by_dim.setdefault(f.dim, []).append(f)
    assert len(by_dim[2]) == 4  # facets
    assert len(by_dim[1]) == 4  # edges
    assert len(by_dim[0]) == 1  # zero cone
    assert len(by_dim[3]) == 1  # the cone itself


def test_cone_intersection_shared_ray():
    fan = named_fan("P2")
    c1 = fan.cone_of((0, 1))
    c2 = fan.cone_of((1, 2))
    assert cone_intersection(fan, c1, c2).ray_indices == (1,)


def test_cone_intersection_idempotent():
    fan = named_fan("P2")
    for c in fan.max_cones:
        assert cone_intersection(fan, c, c) == c


def test_cone_intersection_opposite_cones():
    fan = named_fan("F1")
    c1 = fan.cone_of((0, 1))
    c2 = fan.cone_of((2, 3))
    meet = cone_intersection(fan, c1, c2)
    assert meet.ray_indices == ()
    assert meet.dim == 0


def test_cone_intersection_rejects_invalid_fan():
    bad = Fan(2, [(1, 0), (1, 2), (1, 1), (0, 1)], [(0, 1), (2, 3)])
    with pytest.raises(InputError):
        cone_intersection(bad, bad.max_cones[0], bad.max_cones[1])


def test_cone_intersection_matches_polyhedral_oracle():
    # On every named (simplicial) fan, the ray-set intersection agrees with
    # the rational-polyhedron intersection computed from H-representations.
    from itertools import combinations

    for name in NAMED_FAN_NAMES:
        fan = named_fan(name)
        for c1, c2 in combinations(fan.max_cones, 2):
            meet = cone_intersection(fan, c1, c2)
            expected = set(cone_intersection_rays(fan.ray_vectors(c1), fan.ray_vectors(c2), fan.rank))
            assert set(fan.ray_vectors(meet)) == expected, (name, c1, c2)


def permuted_copy(fan, rng):
    perm = list(range(len(fan.rays)))
    rng.shuffle(perm)
    # perm[new_index] = old_index; build the inverse remap for cones
    inv = {old: new for new, old in enumerate(perm)}
    rays = [fan.rays[old] for old in perm]
    cones = [[inv[i] for i in c.ray_indices] for c in fan.max_cones]
    rng.shuffle(cones)
    return Fan(fan.rank, rays, cones)


def test_validation_order_independence():
    rng = random.Random(41)
    fans = [named_fan(n) for n in NAMED_FAN_NAMES]
    fans.append(Fan(2, [(1, 0), (1, 2), (1, 1), (0, 1)], [(0, 1), (2, 3)]))  # invalid
    fans.append(Fan(2, [(1, 0), (0, 1)], [(0, 1)]))  # valid, not complete
    for fan in fans:
        base = validate_fan(fan)
        for _ in range(4):
            other = validate_fan(permuted_copy(fan, rng))
            assert (base.valid, base.smooth, base.complete) == (
                other.valid,
                other.smooth,
                other.complete,
            )


def test_unknown_named_fan():
    with pytest.raises(InputError):
        named_fan("P4xF2")
