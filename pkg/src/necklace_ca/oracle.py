"""Plain finite-difference reference for differential testing.

Nothing here calls into :mod:`necklace_ca.dirac` or :mod:`necklace_ca.weyl`.
The update is written site by site from the difference equations with
1-based site labels, so it shares no index arithmetic with the automaton.
Only :func:`~necklace_ca.lattice.wrap_value` is common to both.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .lattice import GeometryError, WaveField, wrap_value

__all__ = [
    "dirac_fd_step",
    "dirac_fd_inverse",
    "fd_step_values",
    "fd_inverse_values",
    "first_wraparound",
    "weyl_mover_oracle",
    "BijectivityReport",
    "exhaustive_bijectivity",
    "Divergence",
    "first_divergence",
]


def fd_step_values(values, M=None, mu=1):
    """One finite-difference update on an integer array ``(..., 2K)``.

    new sL(2k-1) = sL(2k+1) - mu sR(2k);  new sR(2k) = sR(2k-2) + mu sL(2k-1).
    With ``M=None`` no wrapping is done (unbounded integers).
    """
    old = np.array(values, dtype=np.int64)
    n = old.shape[-1]
    new = np.empty_like(old)

    def at(k):
        return old[..., (k - 1) % n]

    for k in range(1, n // 2 + 1):
        new[..., (2 * k - 1 - 1) % n] = at(2 * k + 1) - mu * at(2 * k)
        new[..., (2 * k - 1) % n] = at(2 * k - 2) + mu * at(2 * k - 1)
    if M is not None:
        new = wrap_value(new, M)
    return new


def fd_inverse_values(values, M, mu=1):
    """Recover the previous field from ``values`` (mod ``M``, odd).

    Later values pair up as a = sL'(2k-1) = sL(2k+1) - sR(2k) and
    b = sR'(2k+2) = sR(2k) + sL(2k+1); solving the 2x2 system gives both
    earlier values.
    """
    if M % 2 == 0:
        raise GeometryError(f"no inverse for even transverse size {M}")
    new = np.array(values, dtype=np.int64)
    n = new.shape[-1]
    old = np.empty_like(new)
    det_inv = pow((1 + mu * mu) % M, -1, M)

    def at(k):
        return new[..., (k - 1) % n]

    for k in range(1, n // 2 + 1):
        a = at(2 * k - 1)
        b = at(2 * k + 2)
        # a = y - mu x, b = x + mu y with x = sR(2k), y = sL(2k+1)
        old[..., (2 * k - 1) % n] = (b - mu * a) * det_inv
        old[..., (2 * k) % n] = (a + mu * b) * det_inv
    return wrap_value(old, M)


def dirac_fd_step(field, mu=1):
    """Wrapped finite-difference update of a :class:`WaveField`."""
    g = field.geometry
    return WaveField(g, fd_step_values(field.values, g.transverse, mu))


def dirac_fd_inverse(field, mu=1):
    g = field.geometry
    return WaveField(g, fd_inverse_values(field.values, g.transverse, mu))


def first_wraparound(values, M, max_steps):
    """First step at which the unbounded update leaves ``[-L, L]``.

    Returns None if the unbounded evolution stays in range for ``max_steps``
    steps; in that case it coincides with the wrapped one.
    """
    L = (M - 1) // 2
    vals = np.array(values, dtype=np.int64)
    for n in range(1, max_steps + 1):
        vals = fd_step_values(vals, None)
        if np.any(np.abs(vals) > L):
            return n
    return None


def weyl_mover_oracle(spins, l):
    """Direct index shift of movers: sL(k) <- sL(k+l), sR(k) <- sR(k-l).

    ``spins`` is a sequence of 2S values; site 2k-1 is left mover k and
    site 2k is right mover k.  Returns a list.
    """
    s = list(spins)
    S = len(s) // 2
    sL = [s[2 * k] for k in range(S)]
    sR = [s[2 * k + 1] for k in range(S)]
    out = [0] * len(s)
    for k in range(S):
        out[2 * k] = sL[(k + l) % S]
        out[2 * k + 1] = sR[(k - l) % S]
    return out


@dataclass
class BijectivityReport:
    pairs: int
    transverse: int
    n_states: int
    bijective: bool
    cycle_lengths: Counter = field(default_factory=Counter)

    def summary(self):
        hist = ", ".join(f"{length}:{count}" for length, count in sorted(self.cycle_lengths.items()))
        return (
            f"K={self.pairs} M={self.transverse} states={self.n_states} "
            f"bijective={self.bijective} cycles[len:count]={{{hist}}}"
        )


def exhaustive_bijectivity(K, M, step=None, n_steps=1, limit=10**6):
    """Enumerate all M**(2K) restricted fields and check the update permutes them.

    ``step`` maps an ``(n_states, 2K)`` array of fields to their images; it
    defaults to the wrapped finite-difference update.  ``n_steps=0`` checks
    the identity map.
    """
    n_states = M ** (2 * K)
    if n_states > limit:
        raise ValueError(f"{n_states} states exceeds the enumeration guard {limit}")
    L = (M - 1) // 2
    fields = np.array(list(itertools.product(range(-L, L + 1), repeat=2 * K)), dtype=np.int64)
    if step is None:
        def step(v):
            return fd_step_values(v, M)
    image = fields
    for _ in range(n_steps):
        image = step(image)
    weights = M ** np.arange(2 * K - 1, -1, -1, dtype=np.int64)
    codes = (image + L) @ weights
    bijective = np.unique(codes).size == n_states
    cycles = Counter()
    if bijective:
        seen = np.zeros(n_states, dtype=bool)
        for start in range(n_states):
            if seen[start]:
                continue
            length, j = 0, start
            while not seen[j]:
                seen[j] = True
                j = int(codes[j])
                length += 1
            cycles[length] += 1
    return BijectivityReport(K, M, n_states, bool(bijective), cycles)


@dataclass
class Divergence:
    """First step where two update rules disagree."""

    step_index: int
    before: WaveField
    expected: WaveField
    got: WaveField

    def dump(self):
        """Counterexample in the lattice text format plus the divergence step."""
        from .io import format_field

        return (
            f"# first divergence at step {self.step_index}\n"
            f"# input\n{format_field(self.before)}"
            f"# oracle\n{format_field(self.expected)}"
            f"# automaton\n{format_field(self.got)}"
        )


def first_divergence(field, n_steps, candidate, reference=None):
    """Run ``candidate`` and ``reference`` (WaveField -> WaveField) side by side.

    Returns None when they agree for ``n_steps`` steps, else a
    :class:`Divergence` for the first disagreeing step (1-based).
    """
    reference = reference or dirac_fd_step
    current = field
    for n in range(1, n_steps + 1):
        want = reference(current)
        got = candidate(current)
        if want != got:
            return Divergence(n, current, want, got)
        current = want
    return None
