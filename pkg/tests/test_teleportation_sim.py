import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densig import quantum_states as qs
from densig import teleportation_sim as tp
from densig.errors import DimsError, StateError
from densig.random_states import random_bipartite, random_density
from oracles import classical_post_states, bell_post_states, teleport_statevector

S = 1 / np.sqrt(2)


def bell_rho():
    return qs.density_from_pure(qs.bell_channel())


def input_states():
    return st.tuples(st.floats(0, 2 * np.pi), st.floats(0, np.pi / 2), st.floats(0, 2 * np.pi)).map(
        lambda t: (np.cos(t[1]) * np.exp(1j * t[0]), np.sin(t[1]) * np.exp(1j * t[2]))
    )


def test_bell_basis():
    basis = tp.bell_basis()
    np.testing.assert_allclose(basis[0].amplitudes, [S, 0, 0, S], atol=1e-16)
    assert abs(np.vdot(basis[1].amplitudes, basis[2].amplitudes)) < 1e-16
    gram = np.array([[np.vdot(a.amplitudes, b.amplitudes) for b in basis] for a in basis])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-15)
    total = sum(np.outer(b.amplitudes, b.amplitudes.conj()) for b in basis)
    np.testing.assert_allclose(total, np.eye(4), atol=1e-12)


def test_classical_channel_basis_input():
    out = tp.teleport(qs.classical_corr_channel(), (1, 0))
    for o, expect in zip(out, [np.diag([1, 0]), np.diag([1, 0]), np.diag([0, 1]), np.diag([0, 1])]):
        assert abs(o.probability - 0.25) < 1e-10
        np.testing.assert_allclose(o.post_state_b.mat, expect, atol=1e-12)


def test_classical_channel_three_four_fifths():
    out = tp.teleport(qs.classical_corr_channel(), (0.6, 0.8))
    expect = [np.diag([9 / 25, 16 / 25])] * 2 + [np.diag([16 / 25, 9 / 25])] * 2
    for o, e in zip(out, expect):
        assert abs(o.probability - 0.25) < 1e-10
        np.testing.assert_allclose(o.post_state_b.mat, e, atol=1e-12)


def test_bell_channel_three_four_fifths():
    out = tp.teleport(bell_rho(), (0.6, 0.8))
    expect = [
        [[9 / 25, 12 / 25], [12 / 25, 16 / 25]],
        [[9 / 25, -12 / 25], [-12 / 25, 16 / 25]],
        [[16 / 25, 12 / 25], [12 / 25, 9 / 25]],
        [[16 / 25, -12 / 25], [-12 / 25, 9 / 25]],
    ]
    for o, e in zip(out, expect):
        assert abs(o.probability - 0.25) < 1e-10
        np.testing.assert_allclose(o.post_state_b.mat, e, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(input_states())
def test_named_channels_match_closed_forms(c):
    c1, c2 = c
    for channel, closed in ((qs.classical_corr_channel(), classical_post_states), (bell_rho(), bell_post_states)):
        out = tp.teleport(channel, c)
        for o, e in zip(out, closed(c1, c2)):
            assert abs(o.probability - 0.25) < 1e-10
            np.testing.assert_allclose(o.post_state_b.mat, e, atol=1e-12)
            pops = sorted(np.diag(o.post_state_b.mat).real)
            np.testing.assert_allclose(pops, sorted([abs(c1) ** 2, abs(c2) ** 2]), atol=1e-12)


def test_classical_outcome_pairs_identical():
    out = tp.teleport(qs.classical_corr_channel(), (0.6, 0.8j))
    np.testing.assert_array_equal(out[0].post_state_b.mat, out[1].post_state_b.mat)
    np.testing.assert_array_equal(out[2].post_state_b.mat, out[3].post_state_b.mat)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), input_states())
def test_arbitrary_channel_against_statevector(seed, c):
    rng = np.random.default_rng(seed)
    channel = random_bipartite(2, 2, rng)
    out = tp.teleport(channel, c)
    probs, posts = teleport_statevector(channel.mat, np.array(c))
    assert abs(sum(o.probability for o in out) - 1) < 1e-10
    for o, p, post in zip(out, probs, posts):
        assert abs(o.probability - p) < 1e-12
        np.testing.assert_allclose(o.post_state_b.mat, post, atol=1e-10)


def test_post_state_omitted_below_floor():
    # |00><00| channel with c=(1,0): outcomes 3 and 4 have zero probability
    p0 = qs.basis_projector(0, 2)
    out = tp.teleport(qs.product_state(p0, p0), (1, 0))
    assert [o.post_state_b is None for o in out] == [False, False, True, True]
    assert out[2].probability == 0


def test_teleport_errors():
    with pytest.raises(DimsError):
        tp.teleport(random_bipartite(2, 3, np.random.default_rng(0)), (1, 0))
    with pytest.raises(StateError):
        tp.teleport(qs.classical_corr_channel(), (1, 1))


def test_coherence_info():
    for o in tp.teleport(qs.classical_corr_channel(), (0.6, 0.8)):
        assert tp.coherence_info(o.post_state_b) == 0
    first = tp.teleport(bell_rho(), (0.6, 0.8))[0]
    assert abs(tp.coherence_info(first.post_state_b) - 24 / 25) < 1e-12
    assert tp.coherence_info(qs.maximally_mixed(2)) == 0
    with pytest.raises(DimsError):
        tp.coherence_info(random_density(3, np.random.default_rng(1)))


@pytest.mark.parametrize(
    "c,bell",
    [((1, 0), 0.0), ((S, S), 1.0), ((0.6, 0.8), 24 / 25), ((0.6, 0.8j), 24 / 25)],
)
def test_channel_comparison(c, bell):
    r = tp.channel_comparison(c)
    assert abs(r.classical_coherence) < 1e-10
    assert abs(r.bell_coherence - bell) < 1e-10
    for o in r.bell:
        assert abs(tp.coherence_info(o.post_state_b) - bell) < 1e-12
