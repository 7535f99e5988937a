"""One-step update of the Dirac automaton: pairwise scattering followed by the
kinematic shift, its exact inverse, and trajectories.

Two implementations are kept side by side.  The position-arithmetic path
(``*_positions`` functions) works on integer arrays of shape ``(..., 2K)`` and
is what :func:`step` and :func:`run` use.  The spin-level path builds every
update from nearest-neighbour exchanges on the spin plane and exists so the
two can be compared bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    GeometryError,
    NecklaceState,
    WaveField,
    decode,
    shift_ring_by_transpositions,
    wrap_value,
)

__all__ = [
    "Trajectory",
    "scatter",
    "kinematic_shift",
    "step",
    "step_inverse",
    "run",
    "second_order_residual",
    "orbit_period",
    "scatter_positions",
    "kinematic_positions",
    "step_positions",
    "inverse_positions",
    "scatter_spins",
    "kinematic_spins",
]


# -- position arithmetic ----------------------------------------------------

def _pair_values(pos):
    # even site 2k sits at index 2k-1; its partner 2k+1 at index 2k (mod 2K)
    x = pos[..., 1::2]
    y = np.roll(pos[..., 0::2], -1, axis=-1)
    return x, y


def scatter_positions(pos, M, mu=1):
    """Simultaneous scattering of all pairs (2k, 2k+1).

    Both exponents are read from the input array before anything moves:
    site 2k receives ``x + mu*y`` and site 2k+1 receives ``y - mu*x``.
    """
    pos = np.asarray(pos, dtype=np.int64)
    x, y = _pair_values(pos)
    out = np.empty_like(pos)
    out[..., 1::2] = wrap_value(x + mu * y, M)
    out[..., 0::2] = np.roll(wrap_value(y - mu * x, M), 1, axis=-1)
    return out


def kinematic_positions(pos, inverse=False):
    """Odd-site contents move two sites left, even-site contents two right."""
    pos = np.asarray(pos, dtype=np.int64)
    sign = -1 if inverse else 1
    out = np.empty_like(pos)
    out[..., 0::2] = np.roll(pos[..., 0::2], -sign, axis=-1)
    out[..., 1::2] = np.roll(pos[..., 1::2], sign, axis=-1)
    return out


def step_positions(pos, M, mu=1):
    return kinematic_positions(scatter_positions(pos, M, mu), inverse=False)


def inverse_positions(pos, M, mu=1):
    """Exact inverse of :func:`step_positions` for odd ``M``."""
    if M % 2 == 0:
        raise GeometryError(f"the update is not invertible for even transverse size {M}")
    det = (1 + mu * mu) % M
    try:
        inv_det = pow(det, -1, M)
    except ValueError:
        raise GeometryError(f"scattering with mu={mu} is singular mod {M}") from None
    pos = kinematic_positions(pos, inverse=True)
    a = pos[..., 1::2]
    b = np.roll(pos[..., 0::2], -1, axis=-1)
    out = np.empty_like(pos)
    out[..., 1::2] = wrap_value((a - mu * b) * inv_det, M)
    out[..., 0::2] = np.roll(wrap_value((mu * a + b) * inv_det, M), 1, axis=-1)
    return out


# -- spin-level construction -----------------------------------------------

def scatter_spins(plane, positions, M, pair_order=None):
    """Scatter by repeated unit shifts of whole rings, in place.

    ``positions`` are the position-observable readings taken before any ring
    is touched; ring 2k is shifted by ``+L(2k+1)`` unit steps and ring 2k+1
    by ``-L(2k)``.  ``pair_order`` lists the pairs (1..K) in processing order.
    """
    sites = plane.shape[0]
    K = sites // 2
    frozen = np.array(positions, dtype=np.int64)
    order = range(1, K + 1) if pair_order is None else pair_order
    for k in order:
        even = 2 * k - 1
        odd = (2 * k) % sites
        for idx, shift in ((even, frozen[odd]), (odd, -frozen[even])):
            direction = 1 if shift > 0 else -1
            # rings longer than M steps wrap; reduce to avoid wasted cycles
            for _ in range(abs(int(shift)) % M):
                shift_ring_by_transpositions(plane[idx], direction)
    return plane


def kinematic_spins(plane):
    """Kinematic shift by exchanges of equal-l spins on neighbouring sites.

    For every transverse row the exchanges between sites (2k', 2k'+1) act
    first, then those between (2k-1, 2k).  Works in place on arrays of shape
    ``(..., 2K, M)``.
    """
    sites, M = plane.shape[-2], plane.shape[-1]
    K = sites // 2
    for l in range(M):
        for kp in range(1, K + 1):
            i, j = 2 * kp - 1, (2 * kp) % sites
            plane[..., [i, j], l] = plane[..., [j, i], l]
        for k in range(1, K + 1):
            i, j = 2 * k - 2, 2 * k - 1
            plane[..., [i, j], l] = plane[..., [j, i], l]
    return plane


# -- state-level API ---------------------------------------------------------

def scatter(state, method="arithmetic", pair_order=None, mu=1):
    """Apply the scattering operator to every (even, odd) neighbour pair."""
    g = state.geometry
    if method == "arithmetic":
        return NecklaceState(g, scatter_positions(state.positions, g.transverse, mu))
    if method == "spins":
        if mu != 1:
            raise ValueError("spin-level scattering is only built for mu = 1")
        readings = state.L_eigenvalues()
        plane = scatter_spins(state.spin_plane(), readings, g.transverse, pair_order)
        return NecklaceState.from_spin_plane(g, plane)
    raise ValueError(f"unknown method {method!r}")


def kinematic_shift(state, method="arithmetic"):
    g = state.geometry
    if method == "arithmetic":
        return NecklaceState(g, kinematic_positions(state.positions))
    if method == "spins":
        return NecklaceState.from_spin_plane(g, kinematic_spins(state.spin_plane()))
    raise ValueError(f"unknown method {method!r}")


def step(state, method="arithmetic", mu=1):
    """One update: scattering then kinematic shift."""
    return kinematic_shift(scatter(state, method=method, mu=mu), method=method)


def step_inverse(state, mu=1):
    g = state.geometry
    return NecklaceState(g, inverse_positions(state.positions, g.transverse, mu))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Decoded snapshots ``n = 0..step_count``, one row per time index."""

    geometry: object
    snapshots: np.ndarray

    def __post_init__(self):
        snaps = np.array(self.snapshots, dtype=np.int64)
        if snaps.ndim != 2 or snaps.shape[1] != self.geometry.sites or snaps.shape[0] < 1:
            raise ValueError(f"snapshots must have shape (n+1, {self.geometry.sites}), got {snaps.shape}")
        if not self.geometry.check_values(snaps):
            raise ValueError("snapshot values out of range")
        snaps.setflags(write=False)
        object.__setattr__(self, "snapshots", snaps)

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.snapshots, other.snapshots)

    @property
    def step_count(self):
        return self.snapshots.shape[0] - 1

    def __len__(self):
        return self.snapshots.shape[0]

    def field(self, n):
        return WaveField(self.geometry, self.snapshots[n])

    def times(self):
        return np.arange(len(self)) * self.geometry.time_step


def run(state, n_steps, mu=1):
    """Iterate the update ``n_steps`` times and collect every snapshot."""
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if isinstance(state, WaveField):
        state = NecklaceState(state.geometry, state.values)
    g = state.geometry
    snaps = np.empty((n_steps + 1, g.sites), dtype=np.int64)
    pos = state.positions
    snaps[0] = pos
    for n in range(1, n_steps + 1):
        pos = step_positions(pos, g.transverse, mu)
        snaps[n] = pos
    return Trajectory(g, snaps)


def second_order_residual(traj):
    """Largest violation of the second-order relations, mod M.

    Eliminating the right movers gives, for left movers ``a`` on odd sites,
    ``a[n+2](j) - a[n+1](j+1) - a[n+1](j-1) + 2 a[n](j) = 0``; the right
    movers obey the same relation.  Returns the maximum absolute wrapped
    residual, 0 for any genuine trajectory.
    """
    snaps = traj.snapshots
    if snaps.shape[0] < 3:
        raise ValueError("need at least 3 snapshots")
    M = traj.geometry.transverse
    worst = 0
    for chan in (snaps[:, 0::2], snaps[:, 1::2]):
        r = chan[2:] - np.roll(chan[1:-1], -1, axis=1) - np.roll(chan[1:-1], 1, axis=1) + 2 * chan[:-2]
        worst = max(worst, int(np.abs(wrap_value(r, M)).max()))
    return worst


def orbit_period(state, max_steps=None, mu=1):
    """Number of updates until ``state`` recurs (exact hashing).

    Returns None if no recurrence within ``max_steps``.  The update is a
    bijection so every orbit is a pure cycle.  Accepts a state or a field.
    """
    g = state.geometry
    pos = state.positions if isinstance(state, NecklaceState) else state.values
    start = pos.tobytes()
    limit = g.n_states if max_steps is None else max_steps
    for n in range(1, limit + 1):
        pos = step_positions(pos, g.transverse, mu)
        if pos.tobytes() == start:
            return n
    return None


def decoded_step(field, mu=1):
    """``decode(step(encode(field)))`` for a :class:`WaveField`."""
    return decode(step(NecklaceState(field.geometry, field.values), mu=mu))
