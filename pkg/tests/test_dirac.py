import itertools

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace_ca import dirac
from necklace_ca.lattice import GeometryError, LatticeGeometry, NecklaceState, WaveField, decode, encode
from necklace_ca.oracle import dirac_fd_step, fd_step_values


def all_states(K, M):
    g = LatticeGeometry(K, M)
    L = g.half_width
    for pos in itertools.product(range(-L, L + 1), repeat=2 * K):
        yield NecklaceState(g, pos)


def states(max_K=5):
    @st.composite
    def build(draw):
        K = draw(st.integers(1, max_K))
        M = draw(st.sampled_from([3, 5, 7, 9]))
        L = (M - 1) // 2
        pos = draw(st.lists(st.integers(-L, L), min_size=2 * K, max_size=2 * K))
        return NecklaceState(LatticeGeometry(K, M), pos)

    return build()


# -- scatter ----------------------------------------------------------------

def test_scatter_example_pair():
    g = LatticeGeometry(1, 7)
    # pair (2, 3 = 1): x on site 2, y on site 1
    s = NecklaceState(g, [-3, -2])
    out = dirac.scatter(s)
    assert out.positions[1] == 2  # -2 + (-3) wraps to +2
    assert out.positions[0] == -1  # -3 - (-2)


def test_scatter_zero_fixed():
    s = NecklaceState(LatticeGeometry(3, 5), np.zeros(6))
    assert dirac.scatter(s) == s
    assert dirac.scatter(s, method="spins") == s


def test_scatter_direct_evaluation():
    g = LatticeGeometry(2, 5)
    s = NecklaceState(g, [0, 1, 0, 0])  # pair (2, 3) holds (x, y) = (1, 0)
    out = dirac.scatter(s)
    assert out.positions[1:3].tolist() == [1, -1]


@pytest.mark.parametrize("K, M", [(1, 3), (1, 5), (2, 3), (2, 5)])
def test_scatter_spin_level_matches_arithmetic_exhaustive(K, M):
    for s in all_states(K, M):
        assert dirac.scatter(s, method="spins") == dirac.scatter(s)


@settings(max_examples=80, deadline=None)
@given(s=states(max_K=4), data=st.data())
def test_pair_processing_order_irrelevant(s, data):
    order = data.draw(st.permutations(range(1, s.geometry.pairs + 1)))
    assert dirac.scatter(s, method="spins", pair_order=order) == dirac.scatter(s)


# -- kinematic shift --------------------------------------------------------

def test_kinematic_shift_example():
    g = LatticeGeometry(2, 9)
    a, b, c, d = 1, 2, 3, 4
    out = dirac.kinematic_shift(NecklaceState(g, [a, b, c, d]))
    assert out.positions.tolist() == [c, d, a, b]


def test_kinematic_shift_uniform_unchanged():
    s = NecklaceState(LatticeGeometry(4, 7), [2] * 8)
    assert dirac.kinematic_shift(s) == s


@pytest.mark.parametrize("K", range(1, 7))
def test_kinematic_shift_period_k(K):
    rng = np.random.default_rng(K)
    g = LatticeGeometry(K, 7)
    s = NecklaceState(g, rng.integers(-3, 4, 2 * K))
    cur = s
    for _ in range(K):
        cur = dirac.kinematic_shift(cur)
    assert cur == s


@pytest.mark.parametrize("K, M", [(1, 3), (2, 3), (2, 5), (3, 3)])
def test_kinematic_spins_match_arithmetic_exhaustive(K, M):
    for s in all_states(K, M):
        assert dirac.kinematic_shift(s, method="spins") == dirac.kinematic_shift(s)


# -- step -------------------------------------------------------------------

def test_step_zero_fixed_point():
    s = NecklaceState(LatticeGeometry(4, 9), np.zeros(8))
    assert dirac.step(s) == s


def test_step_single_excitation():
    g = LatticeGeometry(3, 7)
    s = NecklaceState(g, [0, 0, 1, 0, 0, 0])  # sL(3) = 1
    out = dirac.step(s)
    assert out.positions.tolist() == [1, 0, 0, 1, 0, 0]  # sL(1) = 1, sR(4) = 1


def test_step_matches_difference_equations_by_hand():
    # evaluate the difference equations site by site from scratch
    g = LatticeGeometry(3, 9)
    old = [4, -1, 2, 3, -4, 0]
    out = dirac.step(NecklaceState(g, old)).positions

    def s(k):
        return old[(k - 1) % 6]

    for k in range(1, 4):
        assert out[(2 * k - 2) % 6] == ((s(2 * k + 1) - s(2 * k)) + 4) % 9 - 4
        assert out[(2 * k + 1) % 6] == ((s(2 * k) + s(2 * k + 1)) + 4) % 9 - 4


@settings(max_examples=200, deadline=None)
@given(s=states())
def test_step_equals_oracle(s):
    f = decode(s)
    assert decode(dirac.step(encode(f))) == dirac_fd_step(f)


@pytest.mark.parametrize("K, M", [(1, 3), (2, 3), (1, 5)])
def test_spin_level_step_matches_exhaustive(K, M):
    for s in all_states(K, M):
        assert dirac.step(s, method="spins") == dirac.step(s)


def test_mu_knob_changes_exponents():
    g = LatticeGeometry(2, 7)
    s = NecklaceState(g, [0, 1, 2, 0])
    out = dirac.scatter(s, mu=2)
    # (x, y) = (1, 2): x + 2y = 5 wraps to -2, y - 2x = 0
    assert out.positions[1:3].tolist() == [-2, 0]
    assert dirac.step_inverse(dirac.step(s, mu=2), mu=2) == s


@settings(max_examples=100, deadline=None)
@given(s=states(), data=st.data())
def test_locality(s, data):
    g = s.geometry
    k = data.draw(st.integers(0, g.sites - 1))
    delta = data.draw(st.integers(1, g.transverse - 1))
    pos = s.positions.copy()
    pos[k] = (pos[k] + delta + g.half_width) % g.transverse - g.half_width
    diff = np.flatnonzero(dirac.step(s).positions != dirac.step(NecklaceState(g, pos)).positions)
    for i in diff:
        d = min((i - k) % g.sites, (k - i) % g.sites)
        assert d <= 2


# -- inverse ----------------------------------------------------------------

def test_inverse_zero():
    s = NecklaceState(LatticeGeometry(2, 5), np.zeros(4))
    assert dirac.step_inverse(dirac.step(s)) == s


def test_inverse_example_pair():
    # solve 2y = a + b, 2x = a - b mod 7 for (a, b) = (2, -1): x = -2, y = -3
    a, b = 2, -1
    inv2 = 4
    x = ((a - b) * inv2 + 3) % 7 - 3
    y = ((a + b) * inv2 + 3) % 7 - 3
    assert (x, y) == (-2, -3)
    g = LatticeGeometry(3, 7)
    s = NecklaceState(g, [0, -2, -3, 0, 0, 0])
    assert dirac.step_inverse(dirac.step(s)) == s


def test_inverse_random_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        K = int(rng.integers(2, 7))
        M = int(rng.choice([3, 5, 7]))
        s = NecklaceState(LatticeGeometry(K, M), rng.integers(-(M // 2), M // 2 + 1, 2 * K))
        assert dirac.step_inverse(dirac.step(s)) == s
        assert dirac.step(dirac.step_inverse(s)) == s


def test_inverse_rejects_even_ring():
    with pytest.raises(GeometryError):
        dirac.inverse_positions(np.zeros((3, 4), dtype=np.int64), 6)


# -- run / bijectivity --------------------------------------------------------

def test_run_zero_steps_and_zero_state():
    g = LatticeGeometry(3, 5)
    s = NecklaceState(g, np.zeros(6))
    assert dirac.run(s, 0).snapshots.shape == (1, 6)
    traj = dirac.run(s, 9)
    assert traj.step_count == 9
    assert not traj.snapshots.any()
    with pytest.raises(ValueError):
        dirac.run(s, -1)


def test_run_snapshots_are_consecutive_steps():
    rng = np.random.default_rng(5)
    g = LatticeGeometry(4, 7)
    s = NecklaceState(g, rng.integers(-3, 4, 8))
    traj = dirac.run(s, 6)
    assert traj.field(0) == decode(s)
    cur = s
    for n in range(1, 7):
        cur = dirac.step(cur)
        assert np.array_equal(traj.snapshots[n], cur.positions)


def test_tiny_space_is_a_permutation_with_periodic_orbits():
    states_ = list(all_states(1, 3))
    images = {dirac.step(s) for s in states_}
    assert len(images) == 9
    for s in states_:
        period = dirac.orbit_period(s)
        assert period is not None and period <= 9


# -- second-order relation -------------------------------------------------

def test_second_order_relation_symbolic():
    # eliminate the right movers symbolically on a ring of 4 pairs, no wrapping
    K = 4
    a = sp.symbols(f"a1:{K + 1}")  # sL at sites 1, 3, 5, 7
    b = sp.symbols(f"b1:{K + 1}")  # sR at sites 2, 4, 6, 8

    def update(a, b):
        na = [a[(j + 1) % K] - b[j] for j in range(K)]
        nb = [b[(j - 1) % K] + a[j] for j in range(K)]
        return na, nb

    a1, b1 = update(a, b)
    a2, b2 = update(a1, b1)
    for j in range(K):
        res_a = a2[j] - a1[(j + 1) % K] - a1[(j - 1) % K] + 2 * a[j]
        res_b = b2[j] - b1[(j - 1) % K] - b1[(j + 1) % K] + 2 * b[j]
        assert sp.expand(res_a) == 0
        assert sp.expand(res_b) == 0


def test_second_order_residual_zero_and_random():
    g = LatticeGeometry(4, 9)
    assert dirac.second_order_residual(dirac.run(NecklaceState(g, np.zeros(8)), 3)) == 0
    rng = np.random.default_rng(3)
    traj = dirac.run(NecklaceState(g, rng.integers(-4, 5, 8)), 10)
    assert dirac.second_order_residual(traj) == 0


def test_second_order_residual_detects_corruption():
    rng = np.random.default_rng(4)
    g = LatticeGeometry(4, 9)
    traj = dirac.run(NecklaceState(g, rng.integers(-4, 5, 8)), 10)
    for n in range(11):
        for k in range(8):
            snaps = traj.snapshots.copy()
            snaps[n, k] = (snaps[n, k] + 1 + 4) % 9 - 4
            assert dirac.second_order_residual(dirac.Trajectory(g, snaps)) != 0


def test_second_order_residual_needs_three_snapshots():
    g = LatticeGeometry(1, 3)
    with pytest.raises(ValueError):
        dirac.second_order_residual(dirac.run(NecklaceState(g, [0, 0]), 1))


def test_batched_positions_match_single():
    rng = np.random.default_rng(8)
    batch = rng.integers(-2, 3, size=(50, 6))
    stepped = dirac.step_positions(batch, 5)
    for row, out in zip(batch, stepped):
        assert np.array_equal(dirac.step(NecklaceState(LatticeGeometry(3, 5), row)).positions, out)
    assert np.array_equal(stepped, fd_step_values(batch, 5))


def test_trajectory_rejects_bad_shapes():
    g = LatticeGeometry(1, 3)
    with pytest.raises(ValueError):
        dirac.Trajectory(g, np.zeros((2, 3)))
    with pytest.raises(ValueError):
        dirac.Trajectory(g, [[0, 5]])
    assert isinstance(dirac.run(WaveField(g, [1, 0]), 2), dirac.Trajectory)


def test_orbit_period_accepts_field():
    g = LatticeGeometry(2, 5)
    s = NecklaceState(g, [1, 0, -2, 2])
    assert dirac.orbit_period(decode(s)) == dirac.orbit_period(s)
