import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from necklace_ca import weyl
from necklace_ca.weyl import (
    BlockField,
    InconsistentInputError,
    NoninvertibleError,
    OccupationField,
    SpinChain,
)


def chains(max_S=6):
    return st.integers(1, max_S).flatmap(
        lambda S: st.lists(st.sampled_from([-1, 1]), min_size=2 * S, max_size=2 * S).map(SpinChain)
    )


def test_single_up_on_odd_site_moves_left():
    spins = -np.ones(6)
    spins[2] = 1  # site 3
    out = weyl.chain_step(SpinChain(spins))
    assert np.flatnonzero(out.spins == 1).tolist() == [0]  # site 1


def test_single_up_on_even_site_moves_right():
    spins = -np.ones(6)
    spins[3] = 1  # site 4
    out = weyl.chain_step(SpinChain(spins))
    assert np.flatnonzero(out.spins == 1).tolist() == [5]  # site 6


def test_all_down_unchanged():
    c = SpinChain(-np.ones(8))
    assert weyl.chain_step(c) == c


@pytest.mark.parametrize("S", range(1, 5))
def test_period_and_bijectivity_exhaustive(S):
    all_chains = [SpinChain(s) for s in itertools.product([-1, 1], repeat=2 * S)]
    images = set()
    for c in all_chains:
        cur = c
        for _ in range(S):
            cur = weyl.chain_step(cur)
        assert cur == c
        images.add(weyl.chain_step(c))
    assert len(images) == 2 ** (2 * S)


@settings(max_examples=100, deadline=None)
@given(c=chains(8))
def test_movers_never_mix(c):
    out = weyl.chain_step(c)
    assert sorted(out.spins[0::2]) == sorted(c.spins[0::2])
    assert sorted(out.spins[1::2]) == sorted(c.spins[1::2])


@settings(max_examples=100, deadline=None)
@given(c=chains(6), l=st.integers(1, 13))
def test_mover_step_composition(c, l):
    cur = c
    for _ in range(l):
        cur = weyl.chain_step(cur)
    assert weyl.mover_step(c, l) == cur
    assert weyl.mover_step(c, 1) == weyl.chain_step(c)
    assert weyl.mover_step(c, c.half_size) == c


def test_mover_step_rejects_zero():
    with pytest.raises(ValueError):
        weyl.mover_step(SpinChain([1, -1]), 0)


def test_right_handed_labels():
    c = SpinChain.from_string("+-+--+")
    sL, sR = weyl.movers(c, "right")
    # from the right: sites 6,5,4,3,2,1 -> left movers are original sites 6, 4, 2
    assert sL.tolist() == [1, -1, -1]
    assert sR.tolist() == [-1, 1, 1]
    with pytest.raises(ValueError):
        weyl.movers(c, "up")


@settings(max_examples=50, deadline=None)
@given(c=chains(6))
def test_right_handed_movers_obey_same_equations(c):
    sL, sR = weyl.movers(c, "right")
    nL, nR = weyl.movers(weyl.chain_step(c), "right")
    assert np.array_equal(nL, np.roll(sL, -1))
    assert np.array_equal(nR, np.roll(sR, 1))
    Sp, Sm = weyl.spinor_components(c, "right")
    assert np.array_equal(Sp, sL + sR) and np.array_equal(Sm, sL - sR)


def test_string_roundtrip():
    c = SpinChain.from_string("+--+-+")
    assert c.spins.tolist() == [1, -1, -1, 1, -1, 1]
    assert str(c) == "+--+-+"
    with pytest.raises(ValueError):
        SpinChain.from_string("+x")
    with pytest.raises(ValueError):
        SpinChain([1, -1, 1])


def test_occupation():
    assert weyl.occupation(SpinChain(-np.ones(4))).values.tolist() == [0, 0, 0, 0]
    assert weyl.occupation(SpinChain([1, -1])).values.tolist() == [1, 0]
    c = SpinChain.from_string("+-++--")
    assert weyl.occupation(c).to_chain() == c


@settings(max_examples=50, deadline=None)
@given(c=chains(6))
def test_occupation_commutes_with_update(c):
    stepped_then_mapped = weyl.occupation(weyl.chain_step(c)).values
    mapped_then_stepped = weyl.mover_shift(weyl.occupation(c).values, 1)
    assert np.array_equal(stepped_then_mapped, mapped_then_stepped)


def test_block_transform_example():
    f = OccupationField([1, 0, 0, 0, 0, 0])
    b = weyl.block_transform(f)
    assert b.values.tolist() == [1, 0, 0, 0, 1, 0]
    assert b.level == 1
    assert weyl.block_inverse(b) == f
    assert weyl.block_transform(OccupationField(np.zeros(6))).values.tolist() == [0] * 6


def test_block_levels_bounded_all_ones():
    f = OccupationField(np.ones(10))
    for r in range(1, 7):
        f = weyl.block_transform(f)
        assert f.level == r
        assert f.values.max() == 2**r and f.values.min() == 2**r


def brute_preimage(values, level):
    """Solve n_k + n_{k+2} = values_k over the rationals with sympy."""
    n = len(values)
    x = sp.symbols(f"x0:{n}")
    sol = sp.solve([x[k] + x[(k + 2) % n] - values[k] for k in range(n)], x, dict=True)
    return [sol[0][xi] for xi in x] if sol else None


@pytest.mark.parametrize("S", [1, 3, 5])
def test_block_inverse_against_linear_solve(S):
    rng = np.random.default_rng(S)
    for _ in range(5):
        f = OccupationField(rng.integers(0, 2, 2 * S))
        b = weyl.block_transform(weyl.block_transform(f))
        want = brute_preimage(b.values.tolist(), b.level)
        got = weyl.block_inverse(b)
        assert [Fraction(int(v)) for v in got.values] == [Fraction(str(w)) for w in want]
        assert weyl.block_inverse(got) == f


@pytest.mark.parametrize("S", [3, 5, 7])
def test_block_roundtrip_odd_s(S):
    rng = np.random.default_rng(10 + S)
    for _ in range(200):
        f = OccupationField(rng.integers(0, 2, 2 * S))
        levels = [f]
        for _ in range(4):
            levels.append(weyl.block_transform(levels[-1]))
        for lo, hi in zip(levels[:-1], levels[1:]):
            assert weyl.block_inverse(hi) == lo


@pytest.mark.parametrize("S", [2, 4, 6])
def test_block_inverse_singular_for_even_s(S):
    n = 2 * S
    A = sp.Matrix(n, n, lambda i, j: 1 if j in (i, (i + 2) % n) else 0)
    assert A.det() == 0
    f = OccupationField(np.random.default_rng(S).integers(0, 2, n))
    with pytest.raises(NoninvertibleError, match=f"S={S}"):
        weyl.block_inverse(weyl.block_transform(f))


def test_block_inverse_inconsistent_input():
    # S = 3; odd sub-cycle values (1, 0, 0) have alternating sum 1, not even
    with pytest.raises(InconsistentInputError):
        weyl.block_inverse(BlockField([1, 0, 0, 0, 0, 0], 1))


def test_block_field_range_enforced():
    with pytest.raises(ValueError):
        BlockField([3, 0], 1)


@settings(max_examples=50, deadline=None)
@given(c=chains(6), r=st.integers(1, 3))
def test_block_variables_move_with_the_chain(c, r):
    f = weyl.occupation(c)
    g = weyl.occupation(weyl.chain_step(c))
    for _ in range(r):
        f, g = weyl.block_transform(f), weyl.block_transform(g)
    assert np.array_equal(g.values, weyl.mover_shift(f.values, 1))


def test_spinor_components():
    Sp, Sm = weyl.spinor_components(([1, -1, 1], [1, -1, 1]))
    assert Sm.tolist() == [0, 0, 0]
    Sp, Sm = weyl.spinor_components(SpinChain([1, -1]))
    assert (Sp.tolist(), Sm.tolist()) == ([0], [2])


@settings(max_examples=50, deadline=None)
@given(c=chains(6))
def test_spinor_components_follow_movers(c):
    Sp, Sm = weyl.spinor_components(weyl.chain_step(c))
    sL, sR = weyl.movers(c)
    sL, sR = np.roll(sL, -1), np.roll(sR, 1)
    assert np.array_equal(Sp, sL + sR) and np.array_equal(Sm, sL - sR)
    assert weyl.from_movers(*weyl.movers(c)) == c


def test_conservation_of_up_counts():
    rng = np.random.default_rng(1)
    c = SpinChain(rng.choice([-1, 1], 16))
    odd, even = (c.spins[0::2] == 1).sum(), (c.spins[1::2] == 1).sum()
    for _ in range(20):
        c = weyl.chain_step(c)
        assert (c.spins[0::2] == 1).sum() == odd
        assert (c.spins[1::2] == 1).sum() == even


def test_chain_permutation_matches_chain_step():
    S = 2
    perm = weyl.chain_permutation(S)
    assert sorted(perm.tolist()) == list(range(16))
    for i in range(16):
        spins = [1 if (i >> j) & 1 else -1 for j in range(4)]
        out = weyl.chain_step(SpinChain(spins)).spins
        assert sum(1 << j for j in range(4) if out[j] == 1) == perm[i]
