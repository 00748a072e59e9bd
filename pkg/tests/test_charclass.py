from fractions import Fraction
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randman.charclass import (
    EnsembleDescription,
    ProjectiveProduct,
    expected_pontryagin,
    format_partition,
    parse_partition,
    partition_count,
    partitions,
    pontryagin_class,
    pontryagin_matrix,
    pontryagin_number,
    solve_target,
    total_pontryagin_class,
)
from randman.measure import ValidationError

from oracles import pentagonal_partition_counts, pontryagin_number_sympy

# frozen from the sympy expansion in oracles.pontryagin_number_sympy
DETERMINANTS = {0: 1, 1: 3, 2: -45, 3: -2835, 4: 17222625, 5: -1611262681875}


def test_partition_order_and_format():
    assert partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert partitions(0) == [()]
    assert format_partition((2, 1)) == "2+1" and format_partition(()) == "0"
    assert parse_partition("2+1") == (2, 1)
    with pytest.raises(ValueError):
        partitions(-1)


def test_partition_counts_match_pentagonal_recurrence():
    ref = pentagonal_partition_counts(50)
    assert [len(partitions(n)) for n in range(51)] == ref
    assert [partition_count(n) for n in range(51)] == ref


@given(st.integers(1, 12))
def test_partitions_are_distinct_and_sum(n):
    ps = partitions(n)
    assert len(set(ps)) == len(ps)
    assert all(sum(p) == n and list(p) == sorted(p, reverse=True) for p in ps)


def test_projective_labels():
    m = ProjectiveProduct.from_partition((2, 1))
    assert m.label == "CP4xCP2" and m.real_dimension == 12
    assert ProjectiveProduct.from_label("CP4xCP2") == m
    with pytest.raises(ValidationError):
        ProjectiveProduct.from_label("RP2")


def test_cp2_classes():
    cp2 = ProjectiveProduct((2,))
    assert pontryagin_class(cp2, 1).top_coefficient() == 3
    assert total_pontryagin_class(cp2).top_coefficient() == 3


def test_small_tables():
    assert pontryagin_matrix(1)[1] == [[3]]
    order, a, d = pontryagin_matrix(2)
    assert order == [(2,), (1, 1)] and a == [[10, 25], [9, 18]] and d == -45
    assert pontryagin_number(ProjectiveProduct((2, 2, 2)), (1, 1, 1)) == 162
    assert pontryagin_matrix(0) == ([], [], 1)


@pytest.mark.parametrize("n", range(6))
def test_determinants(n):
    assert pontryagin_matrix(n)[2] == DETERMINANTS[n]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_table_matches_sympy_expansion(n):
    order, a, _ = pontryagin_matrix(n)
    assert a == [[pontryagin_number_sympy(alpha, beta) for beta in order] for alpha in order]


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        pontryagin_number(ProjectiveProduct((2,)), (2,))


def test_solve_target_example():
    e = solve_target(2, [1, 0])
    got = [(c.manifold.label, c.weight, c.orientation) for c in e.components]
    assert got == [("CP4", Fraction(2, 5), -1), ("CP2xCP2", Fraction(5, 9), 1)]


def test_solve_target_mapping_and_errors():
    assert solve_target(2, {"2": 1, "1+1": 0}) == solve_target(2, [1, 0])
    with pytest.raises(ValidationError, match="missing"):
        solve_target(2, {"2": 1})
    with pytest.raises(ValidationError):
        solve_target(2, [1])


targets = st.lists(st.builds(Fraction, st.integers(-50, 50), st.integers(1, 20)), min_size=3, max_size=3)


@settings(max_examples=40)
@given(targets)
def test_round_trip_n3(v):
    e = solve_target(3, v)
    assert [expected_pontryagin(e, b) for b in partitions(3)] == v
    assert EnsembleDescription.from_json(e.to_json()) == e


def test_zero_target_gives_empty_ensemble():
    assert solve_target(2, [0, 0]).components == ()


def test_signature_of_cp2_from_l_genus():
    # L_1 = p_1 / 3 gives signature 1 for CP^2
    assert pontryagin_number(ProjectiveProduct((2,)), (1,)) / 3 == 1
    assert math.prod(DETERMINANTS.values()) != 0
