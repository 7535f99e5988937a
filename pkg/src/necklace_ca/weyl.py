"""Massless spin-chain automaton built from spin exchanges.

A chain holds 2S spins ``s_1..s_2S`` with periodic boundary.  In mover
coordinates site ``2k-1`` is left mover ``k`` and site ``2k`` is right mover
``k`` (k = 1..S).  Arrays are 0-based: site ``j`` is index ``j - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoninvertibleError",
    "InconsistentInputError",
    "SpinChain",
    "OccupationField",
    "BlockField",
    "exchange_step",
    "chain_step",
    "mover_step",
    "mover_shift",
    "movers",
    "from_movers",
    "occupation",
    "block_transform",
    "block_inverse",
    "spinor_components",
    "chain_permutation",
]


class NoninvertibleError(ValueError):
    """The block transform is singular for this chain length."""


class InconsistentInputError(ValueError):
    """A block field has no non-negative integer preimage."""


@dataclass(frozen=True, eq=False)
class SpinChain:
    spins: np.ndarray

    def __post_init__(self):
        arr = np.array(self.spins, dtype=np.int8)
        if arr.ndim != 1 or arr.size < 2 or arr.size % 2:
            raise ValueError(f"a chain needs an even number >= 2 of spins, got shape {arr.shape}")
        if not np.all((arr == 1) | (arr == -1)):
            raise ValueError("spins must be +1 or -1")
        arr.setflags(write=False)
        object.__setattr__(self, "spins", arr)

    def __eq__(self, other):
        if not isinstance(other, SpinChain):
            return NotImplemented
        return np.array_equal(self.spins, other.spins)

    def __hash__(self):
        return hash(self.spins.tobytes())

    @property
    def half_size(self):
        return self.spins.size // 2

    @classmethod
    def from_string(cls, text):
        """Parse a ``+``/``-`` string such as ``"+--+"``."""
        table = {"+": 1, "-": -1}
        try:
            return cls([table[c] for c in text.strip()])
        except KeyError as exc:
            raise ValueError(f"invalid spin character {exc.args[0]!r}") from None

    def to_string(self):
        return "".join("+" if s > 0 else "-" for s in self.spins)

    def __str__(self):
        return self.to_string()


@dataclass(frozen=True, eq=False)
class OccupationField:
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.int64)
        if not np.all((arr == 0) | (arr == 1)):
            raise ValueError("occupation numbers must be 0 or 1")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __eq__(self, other):
        if not isinstance(other, OccupationField):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    level = 0

    def to_chain(self):
        return SpinChain(2 * self.values - 1)


@dataclass(frozen=True, eq=False)
class BlockField:
    """Block variables after ``level`` applications of the block transform."""

    values: np.ndarray
    level: int

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.int64)
        if self.level < 0:
            raise ValueError("level must be non-negative")
        if np.any(arr < 0) or np.any(arr > 2**self.level):
            raise ValueError(f"level-{self.level} block values must lie in [0, {2**self.level}]")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __eq__(self, other):
        if not isinstance(other, BlockField):
            return NotImplemented
        return self.level == other.level and np.array_equal(self.values, other.values)


# -- dynamics -------------------------------------------------------------------

def exchange_step(spins):
    """One update of a spin array (last axis = chain) by exchanges only.

    All exchanges P(2k', 2k'+1) act first (including P(2S, 1)), then all
    P(2k-1, 2k).  Returns a new array.
    """
    out = np.array(spins, copy=True)
    n = out.shape[-1]
    for kp in range(1, n // 2 + 1):
        i, j = 2 * kp - 1, (2 * kp) % n
        out[..., [i, j]] = out[..., [j, i]]
    for k in range(1, n // 2 + 1):
        i, j = 2 * k - 2, 2 * k - 1
        out[..., [i, j]] = out[..., [j, i]]
    return out


def chain_step(chain):
    return SpinChain(exchange_step(chain.spins))


def mover_shift(values, l=1):
    """Shift any site-indexed array ``(..., 2S)`` as ``l`` chain updates would.

    Left movers: ``sL(k) <- sL(k+l)``; right movers: ``sR(k) <- sR(k-l)``.
    """
    values = np.asarray(values)
    out = np.empty_like(values)
    out[..., 0::2] = np.roll(values[..., 0::2], -l, axis=-1)
    out[..., 1::2] = np.roll(values[..., 1::2], l, axis=-1)
    return out


def mover_step(chain, l):
    """Advance ``l`` updates at once by rotating the mover channels."""
    if int(l) != l or l < 1:
        raise ValueError(f"l must be a positive integer, got {l}")
    return SpinChain(mover_shift(chain.spins, int(l)))


def _check_handedness(handedness):
    if handedness not in ("left", "right"):
        raise ValueError(f"handedness must be 'left' or 'right', got {handedness!r}")


def movers(chain, handedness="left"):
    """``(sL, sR)`` in mover coordinates.

    ``handedness="right"`` numbers the sites from the right end.  The update
    rule is unchanged by that relabelling (odd and even sites trade places
    and so does the direction of motion); only the mover labels differ.
    """
    _check_handedness(handedness)
    spins = chain.spins if handedness == "left" else chain.spins[::-1]
    return spins[0::2].astype(np.int64), spins[1::2].astype(np.int64)


def from_movers(left, right):
    left, right = np.asarray(left), np.asarray(right)
    spins = np.empty(2 * left.size, dtype=np.int8)
    spins[0::2], spins[1::2] = left, right
    return SpinChain(spins)


def spinor_components(chain_or_movers, handedness="left"):
    """``(S+, S-) = (sL + sR, sL - sR)`` per mover coordinate.

    Accepts a :class:`SpinChain`, a block/occupation field, or an explicit
    ``(sL, sR)`` pair.
    """
    _check_handedness(handedness)
    if isinstance(chain_or_movers, SpinChain):
        left, right = movers(chain_or_movers, handedness)
    elif isinstance(chain_or_movers, (OccupationField, BlockField)):
        v = chain_or_movers.values
        if handedness == "right":
            v = v[::-1]
        left, right = v[0::2], v[1::2]
    else:
        left, right = (np.asarray(c, dtype=np.int64) for c in chain_or_movers)
    return left + right, left - right


# -- occupation numbers and block variables ------------------------------------

def occupation(chain):
    return OccupationField((chain.spins.astype(np.int64) + 1) // 2)


def block_transform(field):
    """Next-level block variables: ``n~_k = n_k + n_{k+2}`` (periodic)."""
    v = field.values
    return BlockField(v + np.roll(v, -2), field.level + 1)


def block_inverse(field):
    """Undo one :func:`block_transform`.

    On each mover sub-cycle (odd sites, even sites; length S) the transform
    is ``I + shift``.  For odd S its inverse is an alternating sum:
    ``2 n_j = sum_i (-1)^i n~_{j+i}``.  For even S the matrix is singular.
    """
    v = np.asarray(field.values, dtype=np.int64)
    S = v.size // 2
    if S % 2 == 0:
        raise NoninvertibleError(
            f"block transform is singular for S={S}: the sub-cycles of odd sites "
            f"{list(range(1, 2 * S, 2))} and even sites {list(range(2, 2 * S + 1, 2))} "
            f"have even length {S}"
        )
    signs = (-1) ** np.arange(S)
    prev = np.empty_like(v)
    for parity in (0, 1):
        sub = v[parity::2]
        twice = np.array([signs @ np.roll(sub, -j) for j in range(S)])
        if np.any(twice % 2):
            raise InconsistentInputError(f"no integer preimage on sub-cycle starting at site {parity + 1}")
        prev[parity::2] = twice // 2
    level = field.level - 1
    if level < 0:
        raise ValueError("cannot invert a level-0 field")
    if np.any(prev < 0) or np.any(prev > 2**level):
        raise InconsistentInputError(f"preimage {prev.tolist()} is not a valid level-{level} field")
    if level == 0:
        return OccupationField(prev)
    return BlockField(prev, level)


def chain_permutation(S):
    """The update as a permutation of the 2**(2S) basis states.

    State index bit ``j`` (least significant first) is the occupation of site
    ``j + 1``.  ``perm[i]`` is the index of the image of state ``i``.
    """
    n = 2 * S
    idx = np.arange(2**n, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n)) & 1
    image = exchange_step(bits)
    return image @ (1 << np.arange(n, dtype=np.int64))
