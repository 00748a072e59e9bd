from fractions import Fraction

import pytest
from hypothesis import given

from randman.measure import (
    Angle,
    Automorphism,
    MeasureSpace,
    StructureError,
    ValidationError,
    automorphism_sum,
    compose,
    disjoint_union,
    format_scalar,
    identity,
    invert,
    orbit_decomposition,
    parse_scalar,
    verify_measure_preserving,
)

from strategies import mixed, permutations


@pytest.mark.parametrize("text, value", [("1/3", Fraction(1, 3)), ("2", Fraction(2)), (3, Fraction(3))])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["x", "1/0", "0.25", None, 0.1, True])
def test_parse_scalar_rejects(bad):
    with pytest.raises(ValidationError):
        parse_scalar(bad, "mass")


def test_format_scalar_is_p_over_q():
    assert format_scalar(Fraction(-45)) == "-45/1"
    assert format_scalar(Fraction(2, 4)) == "1/2"


def test_angle_reduction_and_period():
    a = Angle(Fraction(7, 3))
    assert a.rational == Fraction(1, 3) and a.period == 3
    assert Angle(0, 1).period is None
    assert (Angle(Fraction(1, 3)) * 3).rational == 0
    assert Angle(Fraction(1, 4)).canonical_up_to_sign() == Angle(Fraction(3, 4)).canonical_up_to_sign()


def test_space_validation():
    with pytest.raises(ValidationError):
        MeasureSpace(atoms={"a": -1})
    with pytest.raises(ValidationError):
        MeasureSpace(segments={"s": 0})
    with pytest.raises(ValidationError):
        MeasureSpace(atoms={"a": 1}, segments={"a": 1})


def test_non_bijection_names_offending_ids():
    with pytest.raises(StructureError) as err:
        Automorphism.permutation({"a": 1, "b": 1}, {"a": "b", "b": "b"})
    assert err.value.ids == ("b",)


def test_measure_preservation_violation_listed():
    g = Automorphism.permutation({"a": 1, "b": 2}, {"a": "b", "b": "a"})
    v = verify_measure_preserving(g)
    assert not v and "a->b" in v.violations[0]


def test_three_cycle_orbit():
    g = Automorphism.permutation({"a": Fraction(1, 3), "b": Fraction(1, 3), "c": Fraction(1, 3)}, {"a": "b", "b": "c", "c": "a"})
    (o,) = orbit_decomposition(g)
    assert o.members == ("a", "b", "c") and o.period == 3 and o.rep_mass == Fraction(1, 3)


def test_rotation_orbit_fundamental_domain():
    (o,) = orbit_decomposition(Automorphism.rotation(2, Fraction(3, 8)))
    assert o.period == 8 and o.rep_mass == Fraction(1, 4)
    (o,) = orbit_decomposition(Automorphism.rotation(1, Angle(0, 1)))
    assert not o.periodic and o.rep_mass == 1


@given(mixed())
def test_inverse_composes_to_identity(g):
    assert compose(g, invert(g)) == identity(g.base)
    assert compose(invert(g), g) == identity(g.base)


@given(permutations())
def test_generated_permutations_preserve_measure(g):
    assert verify_measure_preserving(g)


@given(mixed())
def test_json_round_trip(g):
    base = MeasureSpace.from_json(g.base.to_json())
    assert base == g.base
    assert Automorphism.from_json(g.to_json(), base) == g


def test_disjoint_union_prefixes_only_on_collision():
    a = MeasureSpace(atoms={"x": 1})
    b = MeasureSpace(atoms={"y": 2})
    assert disjoint_union(a, b).ids == {"x", "y"}
    assert disjoint_union(a, a).ids == {"0/x", "1/x"}
    g = Automorphism.rotation(1, Fraction(1, 2))
    assert automorphism_sum(g, g).base.total_mass == 2
