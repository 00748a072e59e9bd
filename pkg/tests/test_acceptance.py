"""One test per acceptance criterion; the summary prints PASS/FAIL lines with timings."""
import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from randman.charclass import (
    ProjectiveProduct,
    expected_pontryagin,
    partitions,
    pontryagin_matrix,
    pontryagin_number,
    solve_target,
)
from randman.cobordism import (
    RandomOneManifold,
    RandomZeroManifold,
    boundary_of_prism,
    disk_filling,
    pair_of_pants,
    phi0,
    split_compact_leaves,
    verify_witness,
)
from randman.measure import Automorphism, MeasureSpace

from oracles import atom_cycles, pentagonal_partition_counts, rotation_orbit
from witness_fixtures import forged_witnesses

SEED = 20261015


def rand_fraction(rng, lo=0):
    return Fraction(rng.randint(lo, 40), rng.randint(1, 12))


def rand_space(rng, prefix):
    return MeasureSpace(atoms={f"{prefix}{k}": rand_fraction(rng) for k in range(rng.randint(0, 6))})


def rand_permutation(rng, n):
    ids = [f"a{k:02d}" for k in range(n)]
    perm = ids[:]
    rng.shuffle(perm)
    mapping = dict(zip(ids, perm))
    masses = {}
    for cycle in atom_cycles(mapping):
        m = rand_fraction(rng, 1)
        masses.update({a: m for a in cycle})
    return Automorphism.permutation(masses, mapping)


def test_phi0_suite(criterion):
    rng = random.Random(SEED)
    for _ in range(1000):
        x = RandomZeroManifold(rand_space(rng, "p"), rand_space(rng, "m"))
        y = RandomZeroManifold(rand_space(rng, "q"), rand_space(rng, "n"))
        assert phi0(x + y) == phi0(x) + phi0(y)
        assert phi0(-x) == -phi0(x)
        assert phi0(boundary_of_prism(x.plus)) == 0
    criterion.detail = f"1000 exact cases in {criterion.elapsed:.2f}s"
    assert criterion.elapsed < 1


def test_one_manifold_machinery(criterion):
    rng = random.Random(SEED)
    accepted = 0
    for _ in range(500):
        g = rand_permutation(rng, rng.randint(1, 12))
        f, rest = split_compact_leaves(RandomOneManifold.suspension(g))
        cycles = atom_cycles(g.atoms)
        masses = g.base.atom_masses
        assert Counter(f.terms[0].base.atoms) == Counter((min(c), masses[c[0]]) for c in cycles)
        assert rest.is_empty()
        w = pair_of_pants(g, g) if rng.random() < 0.5 else disk_filling(RandomOneManifold.suspension(g))
        accepted += verify_witness(w).status == "ok"
    for _ in range(100):
        q = rng.randint(1, 60)
        length = rand_fraction(rng, 1)
        angle = Fraction(rng.randint(0, q - 1), q)
        g = Automorphism.rotation(length, angle)
        f, _ = split_compact_leaves(RandomOneManifold.suspension(g))
        _, domain = rotation_orbit(length, ["s"], [angle])
        assert f.terms[0].base.segments == (("s", domain),)
        h = Automorphism.rotation(length, Fraction(rng.randint(0, 9), 10))
        accepted += verify_witness(pair_of_pants(g, h)).status == "ok"
    forged = forged_witnesses()
    rejected = sum(verify_witness(w).status == "fail" for w in forged.values())
    criterion.detail = (
        f"600 splits match enumeration, {accepted}/600 witnesses accepted, "
        f"{rejected}/{len(forged)} forged rejected, {criterion.elapsed:.2f}s"
    )
    assert accepted == 600 and rejected == len(forged) >= 10
    assert criterion.elapsed < 10


def test_pontryagin_tables(criterion):
    assert pontryagin_matrix(1)[1] == [[3]]
    order, a, d = pontryagin_matrix(2)
    assert a == [[10, 25], [9, 18]] and d == -45
    assert pontryagin_number(ProjectiveProduct((2, 2, 2)), (1, 1, 1)) == 162
    dets = [pontryagin_matrix(n)[2] for n in range(1, 6)]
    assert all(isinstance(x, Fraction) and x != 0 for x in dets)
    criterion.detail = f"dets {[int(x) for x in dets]}, {criterion.elapsed:.2f}s"
    assert criterion.elapsed < 30


def test_surjectivity_round_trip(criterion):
    rng = random.Random(SEED)
    for n in (2, 3):
        for _ in range(100):
            v = [Fraction(rng.randint(-99, 99), rng.randint(1, 30)) for _ in partitions(n)]
            e = solve_target(n, v)
            assert [expected_pontryagin(e, b) for b in partitions(n)] == v
    criterion.detail = f"200 targets exact, {criterion.elapsed:.2f}s"
    assert criterion.elapsed < 10


@pytest.mark.slow
def test_chern_weil_numeric(criterion):
    from randman.chernweil import (
        characteristic_integrals,
        chern_character,
        connection_independence_check,
        total_pontryagin,
        whitney_sum_check,
    )
    from randman.geometries import builtin

    cp1 = builtin("cp1-tautological", 200)
    ch1 = characteristic_integrals(cp1.field, cp1.grid, [chern_character(1)])["ch1"]
    indep = connection_independence_check(cp1.field, cp1.grid, seed=0)
    whitney = whitney_sum_check(cp1.field, cp1.field, cp1.grid)
    t = time.perf_counter()
    cp2 = builtin("cp2-tangent", 64)
    p1 = characteristic_integrals(cp2.field, cp2.grid, [total_pontryagin()])["p"]
    t4 = time.perf_counter() - t
    criterion.detail = (
        f"ch1={ch1:.6f} indep={indep.residual:.1e} whitney={whitney.residual:.1e} "
        f"p1(CP2)={p1:.4f} at N=64 ({t4:.0f}s), total {criterion.elapsed:.0f}s"
    )
    assert abs(ch1 + 1) <= 1e-3
    assert indep.residual <= 1e-2 and whitney.residual <= 2e-3
    assert abs(p1 - 3) <= 0.05 * 3
    # numeric oracle for the symbolic table: p_1[CP^2] is the n = 1 entry
    table = pontryagin_matrix(1)[1][0][0]
    assert abs(p1 - float(table)) <= 0.05 * float(table)
    assert abs(ch1 + 1) <= 1e-3  # c1 of the tautological line on CP^1
    assert criterion.elapsed < 120


def test_stokes(criterion):
    import numpy as np

    from randman.integration import PrismForm, stokes_check

    k = MeasureSpace(atoms={"a": Fraction(1, 3), "b": Fraction(2, 3)})
    worst, orders = 0.0, []
    for f in (lambda x: np.exp(np.sin(3 * x)), lambda x: np.sin(2 * x), lambda x: np.log(1 + x), np.cosh):
        rep = stokes_check(PrismForm(1, (0.0, 1.0), 1000, k, {"a": (0, (f,)), "b": (0, (f,))}))
        worst = max(worst, rep.residual)
        orders.append(rep.order_estimate)
    criterion.detail = f"max residual {worst:.1e}, orders {[round(o, 2) for o in orders]}, {criterion.elapsed:.2f}s"
    assert worst <= 1e-6 and min(orders) >= 2 - 0.05
    assert criterion.elapsed < 5


def test_partition_oracle(criterion):
    ref = pentagonal_partition_counts(50)
    assert [len(partitions(n)) for n in range(51)] == ref
    criterion.detail = f"p(50)={ref[50]}, {criterion.elapsed:.2f}s"
    assert criterion.elapsed < 1
