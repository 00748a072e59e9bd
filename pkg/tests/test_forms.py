import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randman import forms as fm
from randman.chernweil import chern_character, evaluate_invariant, realify, total_pontryagin

DIM = 4


def random_2form(rng, k, shape=(3,), complex_=True):
    out = {}
    for _, _, mask in fm.basis_2forms(DIM):
        a = rng.normal(size=shape + (k, k))
        if complex_:
            a = a + 1j * rng.normal(size=shape + (k, k))
        out[mask] = a
    return out


def test_wedge_signs():
    assert fm.wedge_sign(0b01, 0b10) == 1
    assert fm.wedge_sign(0b10, 0b01) == -1
    assert fm.wedge_sign(0b11, 0b01) == 0
    assert fm.wedge_sign(0b0011, 0b1100) == 1


def test_two_forms_commute_and_one_forms_anticommute():
    dx, dy = {0b01: np.array(1.0)}, {0b10: np.array(1.0)}
    assert fm.wedge(dx, dy, 2)[0b11] == -fm.wedge(dy, dx, 2)[0b11]
    a, b = {0b0011: np.array(2.0)}, {0b1100: np.array(3.0)}
    assert fm.wedge(a, b, 4)[0b1111] == fm.wedge(b, a, 4)[0b1111]


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_det_elimination_matches_newton(seed, k):
    a = random_2form(np.random.default_rng(seed), k)
    x, y = fm.det_one_plus(a, DIM), fm.det_one_plus_newton(a, DIM)
    for m in set(x) | set(y):
        assert np.allclose(x.get(m, 0), y.get(m, 0), atol=1e-12)


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_pontryagin_via_realification(seed, k):
    rng = np.random.default_rng(seed)
    a = random_2form(rng, k)
    a = {m: v - np.conj(np.swapaxes(v, -1, -2)) for m, v in a.items()}
    fast = evaluate_invariant(total_pontryagin(), a, DIM)
    real = fm.det_one_plus({m: realify(v) / (2 * np.pi) for m, v in a.items()}, DIM)
    for m in real:
        assert np.allclose(fast.get(m, 0), np.real(real[m]), atol=1e-12)


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_invariants_are_conjugation_invariant(seed, k):
    rng = np.random.default_rng(seed)
    a = random_2form(rng, k)
    g = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k)) + 3 * np.eye(k)
    conj = {m: g @ v @ np.linalg.inv(g) for m, v in a.items()}
    for poly in (chern_character(1), chern_character(2), total_pontryagin()):
        x, y = evaluate_invariant(poly, a, DIM), evaluate_invariant(poly, conj, DIM)
        for m in x:
            assert np.allclose(x[m], y[m], atol=1e-9)


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_trace_of_ab_equals_trace_of_ba(seed):
    rng = np.random.default_rng(seed)
    a, b = random_2form(rng, 3), random_2form(rng, 3)
    ab = fm.mat_trace(fm.mat_wedge(a, b, DIM))
    ba = fm.mat_trace(fm.mat_wedge(b, a, DIM))
    for m in ab:
        assert np.allclose(ab[m], ba[m])


def test_ch_above_dimension_rejected():
    with pytest.raises(ValueError):
        evaluate_invariant(chern_character(3), random_2form(np.random.default_rng(0), 1), DIM)
