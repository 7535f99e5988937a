"""Necklace-of-Necklaces state space.

A lattice has ``2K`` longitudinal sites (labelled ``1..2K``), each carrying a
transverse ring of ``M`` two-state spins (labelled ``-L..L`` with
``L = (M - 1) // 2``).  Restricted states have exactly one up spin per ring,
so a state is fully described by the transverse position of that spin on
every site.

Array conventions used throughout the package: site ``k`` lives at array
index ``k - 1`` (so odd sites, the left movers, sit at even indices) and
transverse position ``l`` lives at column ``l + L``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GeometryError",
    "EncodingError",
    "StateError",
    "LatticeGeometry",
    "WaveField",
    "NecklaceState",
    "wrap_value",
    "encode",
    "decode",
    "transpose_spins",
    "shift_necklace",
    "shift_ring_by_transpositions",
    "transverse_shift_permutation",
    "zero_field",
    "single_excitation",
    "random_field",
]


class GeometryError(ValueError):
    """Unsupported lattice geometry (even or too small ring size, K < 1)."""


class EncodingError(ValueError):
    """A field value cannot be represented on the transverse ring."""


class StateError(ValueError):
    """A spin configuration violates the one-up-spin-per-ring restriction."""


def _check_ring_size(M):
    if int(M) != M or M < 3 or M % 2 == 0:
        raise GeometryError(f"transverse size must be an odd integer >= 3, got {M}")


def wrap_value(v, M):
    """Map ``v`` to its representative mod ``M`` in ``[-(M-1)/2, (M-1)/2]``.

    Works on Python ints and on integer numpy arrays.

    >>> wrap_value(-5, 7)
    2
    """
    _check_ring_size(M)
    half = (M - 1) // 2
    if isinstance(v, np.ndarray):
        return (v + half) % M - half
    return (int(v) + half) % M - half


@dataclass(frozen=True)
class LatticeGeometry:
    """Sizes of a Necklace-of-Necklaces lattice.

    ``pairs`` is K (2K longitudinal sites), ``transverse`` is the odd ring
    size M.  ``time_step`` only labels snapshots; the dynamics is integer.
    """

    pairs: int
    transverse: int
    time_step: float = 1.0

    def __post_init__(self):
        if int(self.pairs) != self.pairs or self.pairs < 1:
            raise GeometryError(f"pair count must be a positive integer, got {self.pairs}")
        _check_ring_size(self.transverse)
        if not self.time_step > 0:
            raise GeometryError(f"time step must be positive, got {self.time_step}")

    @classmethod
    def from_size(cls, S, time_step=1.0):
        """Single-size geometry: K = S pairs and rings of 2S + 1 spins."""
        return cls(S, 2 * S + 1, time_step)

    @property
    def sites(self):
        return 2 * self.pairs

    @property
    def half_width(self):
        return (self.transverse - 1) // 2

    @property
    def n_states(self):
        """Number of restricted states, M ** (2K)."""
        return self.transverse ** self.sites

    def check_values(self, values):
        values = np.asarray(values)
        L = self.half_width
        return bool(np.all((values >= -L) & (values <= L)))


def _as_int_array(values, length):
    arr = np.array(values, dtype=np.int64)
    if arr.shape != (length,):
        raise EncodingError(f"expected {length} values, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WaveField:
    """Integer field on the longitudinal sites.

    ``values[i]`` belongs to site ``i + 1``; odd sites carry the left-moving
    channel, even sites the right-moving one.
    """

    geometry: LatticeGeometry
    values: np.ndarray

    def __post_init__(self):
        arr = _as_int_array(self.values, self.geometry.sites)
        if not self.geometry.check_values(arr):
            raise EncodingError(
                f"field values must lie in [-{self.geometry.half_width}, "
                f"{self.geometry.half_width}], got {arr.tolist()}"
            )
        object.__setattr__(self, "values", arr)

    def __eq__(self, other):
        if not isinstance(other, WaveField):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.geometry, self.values.tobytes()))

    @property
    def left(self):
        """Left-mover channel, values on odd sites 1, 3, ..."""
        return self.values[0::2]

    @property
    def right(self):
        """Right-mover channel, values on even sites 2, 4, ..."""
        return self.values[1::2]

    def at(self, k):
        """Value at site label ``k`` (periodic)."""
        return int(self.values[(k - 1) % self.geometry.sites])


@dataclass(frozen=True, eq=False)
class NecklaceState:
    """Restricted automaton state.

    The position vector is canonical; :meth:`spin_plane` materializes the
    full ``2K x M`` array of +/-1 spins when spin-level operations are needed.
    """

    geometry: LatticeGeometry
    positions: np.ndarray

    def __post_init__(self):
        arr = _as_int_array(self.positions, self.geometry.sites)
        if not self.geometry.check_values(arr):
            raise StateError(f"positions out of range for {self.geometry}: {arr.tolist()}")
        object.__setattr__(self, "positions", arr)

    def __eq__(self, other):
        if not isinstance(other, NecklaceState):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.positions, other.positions)

    def __hash__(self):
        return hash((self.geometry, self.positions.tobytes()))

    def spin_plane(self):
        """Return the ``(2K, M)`` int8 spin array, +1 at the up spin, -1 elsewhere."""
        g = self.geometry
        plane = -np.ones((g.sites, g.transverse), dtype=np.int8)
        plane[np.arange(g.sites), self.positions + g.half_width] = 1
        return plane

    @classmethod
    def from_spin_plane(cls, geometry, plane):
        """Rebuild a state from a spin array, enforcing the one-up restriction."""
        plane = np.asarray(plane)
        if plane.shape != (geometry.sites, geometry.transverse):
            raise StateError(
                f"spin plane must have shape {(geometry.sites, geometry.transverse)}, got {plane.shape}"
            )
        if not np.all((plane == 1) | (plane == -1)):
            raise StateError("spin values must be +1 or -1")
        ups = (plane == 1).sum(axis=1)
        bad = np.flatnonzero(ups != 1)
        if bad.size:
            k = int(bad[0]) + 1
            raise StateError(f"necklace {k} has {int(ups[bad[0]])} up spins, expected exactly one")
        return cls(geometry, plane.argmax(axis=1) - geometry.half_width)

    def L_eigenvalues(self):
        """Position observable evaluated spin by spin: sum_l (l/2)(s_l + 1)."""
        L = self.geometry.half_width
        ls = np.arange(-L, L + 1)
        plane = self.spin_plane().astype(np.int64)
        twice = (ls * (plane + 1)).sum(axis=1)
        return twice // 2


def encode(field):
    """Place the single up spin of ring k at transverse position ``values[k]``."""
    return NecklaceState(field.geometry, field.values)


def decode(state):
    """Read the up-spin position of every ring back into a :class:`WaveField`.

    Accepts a :class:`NecklaceState` or, for bit-level input, a tuple
    ``(geometry, spin_plane)``.
    """
    if isinstance(state, tuple):
        state = NecklaceState.from_spin_plane(*state)
    return WaveField(state.geometry, state.positions)


def _site_index(geometry, k):
    if int(k) != k or not 1 <= k <= geometry.sites:
        raise IndexError(f"site label must be in 1..{geometry.sites}, got {k}")
    return int(k) - 1


def _column(geometry, l):
    L = geometry.half_width
    if int(l) != l or not -L <= l <= L:
        raise IndexError(f"transverse position must be in [{-L}, {L}], got {l}")
    return int(l) + L


def transpose_spins(state, k, l1, l2):
    """Exchange the spins at ``(k, l1)`` and ``(k, l2)``."""
    g = state.geometry
    i = _site_index(g, k)
    c1, c2 = _column(g, l1), _column(g, l2)
    plane = state.spin_plane()
    plane[i, [c1, c2]] = plane[i, [c2, c1]]
    return NecklaceState.from_spin_plane(g, plane)


def shift_ring_by_transpositions(ring, direction=1):
    """Cyclically shift spins along the last axis by one, using only
    nearest-neighbour exchanges.

    A unit shift on M spins is the product of the M - 1 exchanges
    ``P(l, l+1)`` for ``l = -L .. L-1``.  For ``direction=+1`` they act from
    the top of the ring down (content at ``l`` ends at ``l + 1``, ``L`` wraps
    to ``-L``); ``direction=-1`` applies the same exchanges in reverse order.
    Operates in place on any array whose last axis is the ring and returns it.
    """
    M = ring.shape[-1]
    order = range(M - 2, -1, -1) if direction > 0 else range(M - 1)
    for j in order:
        ring[..., [j, j + 1]] = ring[..., [j + 1, j]]
    return ring


def shift_necklace(state, k, steps, method="rotate"):
    """Shift the ring at site ``k`` by ``steps`` transverse positions.

    ``method="rotate"`` updates the position vector directly;
    ``method="transpose"`` composes nearest-neighbour exchanges on the spin
    plane, ``|steps|`` unit shifts in all.
    """
    g = state.geometry
    i = _site_index(g, k)
    steps = int(steps)
    if method == "rotate":
        pos = state.positions.copy()
        pos[i] = wrap_value(pos[i] + steps, g.transverse)
        return NecklaceState(g, pos)
    if method == "transpose":
        plane = state.spin_plane()
        direction = 1 if steps > 0 else -1
        for _ in range(abs(steps)):
            shift_ring_by_transpositions(plane[i], direction)
        return NecklaceState.from_spin_plane(g, plane)
    raise ValueError(f"unknown method {method!r}")


def transverse_shift_permutation(M, steps=1, method="transpose"):
    """Permutation of the M single-up configurations of one ring under a shift.

    Configuration ``j`` has its up spin at ``l = j - L``; the result maps
    ``j`` to the index of its image.
    """
    g = LatticeGeometry(1, M)
    L = g.half_width
    perm = np.empty(M, dtype=np.int64)
    for j in range(M):
        pos = np.zeros(2, dtype=np.int64)
        pos[0] = j - L
        out = shift_necklace(NecklaceState(g, pos), 1, steps, method=method)
        perm[j] = out.positions[0] + L
    return perm


def zero_field(geometry):
    return WaveField(geometry, np.zeros(geometry.sites, dtype=np.int64))


def single_excitation(geometry, k, value):
    """Field that is zero except ``value`` at site ``k``."""
    values = np.zeros(geometry.sites, dtype=np.int64)
    values[_site_index(geometry, k)] = value
    return WaveField(geometry, values)


def random_field(geometry, rng):
    """Uniform random field; ``rng`` is a numpy Generator or an int seed."""
    rng = np.random.default_rng(rng)
    L = geometry.half_width
    return WaveField(geometry, rng.integers(-L, L + 1, size=geometry.sites))
