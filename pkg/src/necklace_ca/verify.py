"""End-to-end verification suite, one check per acceptance criterion.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in order
and never raises.  ``necklace verify all`` is a thin wrapper around it.
"""
from __future__ import annotations

import tempfile
import time
import traceback
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cogwheel, dirac, oracle, weyl
from .lattice import (
    GeometryError,
    LatticeGeometry,
    NecklaceState,
    WaveField,
    decode,
    encode,
    shift_ring_by_transpositions,
)

SIZES = [(K, M) for K in range(1, 9) for M in (3, 5, 7, 9)]


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _random_batch(rng, K, M, count):
    L = (M - 1) // 2
    return rng.integers(-L, L + 1, size=(count, 2 * K))


def check_oracle_equivalence(seed=1, count=1000, n_steps=32, budget=10.0, spin_cases=5):
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    for K, M in SIZES:
        g = LatticeGeometry(K, M)
        auto = _random_batch(rng, K, M, count)
        ref = auto.copy()
        # the first few fields also go through the full spin planes
        spins = [encode(WaveField(g, row)) for row in auto[:spin_cases]]
        for n in range(1, n_steps + 1):
            auto = dirac.step_positions(auto, M)
            ref = oracle.fd_step_values(ref, M)
            bad = np.flatnonzero(np.any(auto != ref, axis=1))
            if bad.size:
                return False, f"K={K} M={M} case {bad[0]} diverges at step {n}"
            spins = [dirac.step(st, method="spins") for st in spins]
            for i, st in enumerate(spins):
                if not np.array_equal(decode(st).values, ref[i]):
                    return False, f"K={K} M={M} spin-level case {i} diverges at step {n}"
    elapsed = time.perf_counter() - t0
    ok = elapsed < budget
    return ok, (
        f"{len(SIZES)} sizes x {count} fields x {n_steps} steps identical "
        f"({spin_cases} per size via spin planes); {elapsed:.2f}s (< {budget}s)"
    )


def check_scattering_pair():
    g = LatticeGeometry(3, 7)
    field = np.zeros(6, dtype=np.int64)
    field[1], field[2] = -2, -3  # sites 2 (even) and 3 (odd)
    state = NecklaceState(g, field)
    mid = dirac.scatter(state)
    mid_spins = dirac.scatter(state, method="spins")
    after = dirac.step(state)
    ref = oracle.fd_step_values(field, 7)
    ok = (
        mid.positions[1] == 2
        and mid.positions[2] == -1
        and mid == mid_spins
        and after.positions[3] == 2  # site 4, two sites right of site 2
        and after.positions[0] == -1
        and np.array_equal(after.positions, ref)
    )
    return ok, (
        f"scatter (-2,-3) -> ({mid.positions[1]:+d},{mid.positions[2]:+d}); "
        f"after step site4={after.positions[3]:+d}, site1={after.positions[0]:+d}"
    )


def check_reversibility(seed=2, count=1000):
    rng = np.random.default_rng(seed)
    for K, M in SIZES:
        pos = _random_batch(rng, K, M, count)
        fwd = dirac.step_positions(pos, M)
        if not np.array_equal(dirac.inverse_positions(fwd, M), pos):
            return False, f"inverse(step) != id for K={K} M={M}"
        if not np.array_equal(dirac.step_positions(dirac.inverse_positions(pos, M), M), pos):
            return False, f"step(inverse) != id for K={K} M={M}"
    rejected = 0
    try:
        LatticeGeometry(2, 6)
    except GeometryError:
        rejected += 1
    try:
        dirac.inverse_positions(np.zeros(4, dtype=np.int64), 6)
    except GeometryError:
        rejected += 1
    ok = rejected == 2
    return ok, f"exact round trips on {len(SIZES) * count} states; even M rejected: {ok}"


def check_bijectivity(budget=1.0):
    t0 = time.perf_counter()
    reports = []
    for K, M in ((1, 3), (2, 3)):
        rep = oracle.exhaustive_bijectivity(K, M, step=lambda v, M=M: dirac.step_positions(v, M))
        reports.append(rep)
    elapsed = time.perf_counter() - t0
    ok = all(r.bijective for r in reports) and elapsed < budget
    return ok, "; ".join(r.summary() for r in reports) + f"; {elapsed:.3f}s"


def check_second_order(seed=3, count=100, n_steps=12):
    rng = np.random.default_rng(seed)
    for case in range(count):
        K = int(rng.integers(1, 9))
        M = int(rng.choice([3, 5, 7, 9]))
        g = LatticeGeometry(K, M)
        start = NecklaceState(g, _random_batch(rng, K, M, 1)[0])
        traj = dirac.run(start, n_steps)
        if dirac.second_order_residual(traj) != 0:
            return False, f"nonzero residual on case {case} (K={K} M={M})"
        snaps = traj.snapshots.copy()
        n = int(rng.integers(0, n_steps + 1))
        k = int(rng.integers(0, 2 * K))
        L = g.half_width
        delta = int(rng.integers(1, M))
        snaps[n, k] = (snaps[n, k] + delta + L) % M - L
        if dirac.second_order_residual(dirac.Trajectory(g, snaps)) == 0:
            return False, f"corruption at n={n} site={k + 1} undetected on case {case}"
    return True, f"{count} trajectories of {n_steps} steps: residual 0; every injected corruption detected"


def _all_chains(S):
    idx = np.arange(2 ** (2 * S))
    bits = (idx[:, None] >> np.arange(2 * S)) & 1
    return (2 * bits - 1).astype(np.int8)


def check_weyl(seed=4, count=10_000):
    rng = np.random.default_rng(seed)
    for S in range(1, 9):
        chains = _all_chains(S) if S <= 4 else rng.choice(np.array([-1, 1], dtype=np.int8), size=(count, 2 * S))
        odd_up = (chains[:, 0::2] == 1).sum(axis=1)
        even_up = (chains[:, 1::2] == 1).sum(axis=1)
        cur = chains
        for n in range(1, S + 1):
            cur = weyl.exchange_step(cur)
            if not (np.array_equal((cur[:, 0::2] == 1).sum(axis=1), odd_up)
                    and np.array_equal((cur[:, 1::2] == 1).sum(axis=1), even_up)):
                return False, f"up-spin counts changed at S={S} step {n}"
        if not np.array_equal(cur, chains):
            return False, f"(chain_step)^S != identity for S={S}"
    return True, "U^S = 1 for S=1..8 (exhaustive S<=4, 10^4 random S>=5); odd/even up counts conserved"


def _one_hot(pos, M):
    L = (M - 1) // 2
    plane = -np.ones(pos.shape + (M,), dtype=np.int8)
    np.put_along_axis(plane, (pos + L)[..., None], 1, axis=-1)
    return plane


def _decode_planes(plane):
    M = plane.shape[-1]
    if not np.all((plane == 1).sum(axis=-1) == 1):
        raise AssertionError("spin plane lost the one-up restriction")
    return plane.argmax(axis=-1) - (M - 1) // 2


def check_transposition_agreement(chunk=1 << 16):
    for M in (3, 5, 7):
        L = (M - 1) // 2
        ls = np.arange(-L, L + 1)
        for direction in (1, -1):
            ring = shift_ring_by_transpositions(_one_hot(ls, M), direction)
            want = (ls + direction + L) % M - L
            if not np.array_equal(_decode_planes(ring), want):
                return False, f"unit shift {direction:+d} disagrees for M={M}"
        for K in range(1, 5):
            n_states = M ** (2 * K)
            powers = M ** np.arange(2 * K - 1, -1, -1, dtype=np.int64)
            for lo in range(0, n_states, chunk):
                codes = np.arange(lo, min(lo + chunk, n_states), dtype=np.int64)
                pos = (codes[:, None] // powers) % M - L
                planes = dirac.kinematic_spins(_one_hot(pos, M))
                if not np.array_equal(_decode_planes(planes), dirac.kinematic_positions(pos)):
                    return False, f"kinematic shift disagrees for K={K} M={M}"
    for S in range(1, 5):
        chains = _all_chains(S)
        if not np.array_equal(weyl.exchange_step(chains), weyl.mover_shift(chains, 1)):
            return False, f"chain step disagrees for S={S}"
    return True, "unit shift (M=3,5,7), kinematic shift (all states K=1..4), chain step (S=1..4) bit-identical"


def check_cogwheel(budget=5.0, tol=1e-9, tol_alg=1e-12):
    t0 = time.perf_counter()
    worst_exp = worst_eig = 0.0
    for N in range(1, 17):
        spec = cogwheel.CogwheelSpec(N, 1.0)
        worst_exp = max(worst_exp, cogwheel.verify_exponential(spec, tol))
        eig = np.linalg.eigvalsh(cogwheel.hamiltonian_standard(spec))
        worst_eig = max(worst_eig, float(np.abs(eig - 2 * np.pi * np.arange(N) / N).max()))
    pauli = cogwheel.exchange_pauli_check(tol_alg)
    elapsed = time.perf_counter() - t0
    ok = worst_eig <= tol and elapsed < budget
    return ok, (
        f"max |expm(-iH)-U|={worst_exp:.1e}, max eigen dev={worst_eig:.1e}, "
        f"Pauli dev={pauli['pauli_identity']:.1e}, |[P12,P23]|={pauli['commutator']:.0f}; {elapsed:.2f}s"
    )


def check_cycle_hamiltonian(tol=1e-9):
    from .lattice import transverse_shift_permutation

    perms = {"weyl S=2": weyl.chain_permutation(2)}
    for M in (5, 7):
        perms[f"U_perp M={M}"] = transverse_shift_permutation(M)
    devs = []
    for label, perm in perms.items():
        H = cogwheel.cycle_hamiltonian(perm)
        dev = cogwheel.max_deviation(cogwheel.matrix_exponential(H), cogwheel.permutation_matrix(perm))
        devs.append(f"{label}: {dev:.1e}")
        if dev > tol:
            return False, "; ".join(devs)
    return True, "; ".join(devs)


def check_blocks(seed=5, levels=3):
    rng = np.random.default_rng(seed)
    for S in (3, 5, 7):
        occ = _all_chains(S) if S <= 5 else rng.choice(np.array([-1, 1], dtype=np.int8), size=(2000, 2 * S))
        for spins in occ:
            fields = [weyl.occupation(weyl.SpinChain(spins))]
            for _ in range(levels):
                fields.append(weyl.block_transform(fields[-1]))
            for lower, upper in zip(fields[:-1], fields[1:]):
                if weyl.block_inverse(upper) != lower:
                    return False, f"round trip failed for S={S} at level {upper.level}"
    try:
        weyl.block_inverse(weyl.block_transform(weyl.OccupationField(rng.integers(0, 2, 8))))
        return False, "S=4 inverse did not raise"
    except weyl.NoninvertibleError:
        pass
    f = weyl.OccupationField(np.ones(6, dtype=np.int64))
    for r in range(1, 7):
        f = weyl.block_transform(f)
        if f.values.max() != 2**r:
            return False, f"level {r} max {f.values.max()} != {2**r}"
    return True, f"round trips exact for S=3,5,7 up to level {levels}; S=4 noninvertible; all-ones max = 2^r for r<=6"


def check_determinism_performance(budget=1.0):
    from .cli import RunConfig, run_experiment

    outputs = []
    with tempfile.TemporaryDirectory() as tmp:
        for rep in range(2):
            out = Path(tmp) / f"rep{rep}"
            cfg = RunConfig(mode="dirac", pairs=6, transverse=7, steps=24, init="random", seed=20241015,
                            out_dir=str(out), formats=("csv", "pgm"), name="det")
            if run_experiment(cfg) != 0:
                return False, "run_experiment failed"
            outputs.append((out / "det.csv").read_bytes() + (out / "det.pgm").read_bytes())
    same = outputs[0] == outputs[1]
    big = np.random.default_rng(6).integers(-3, 4, size=200_000)
    t0 = time.perf_counter()
    dirac.step_positions(big, 7)
    elapsed = time.perf_counter() - t0
    ok = same and elapsed < budget
    return ok, f"artifacts byte-identical: {same}; K=1e5 M=7 step {elapsed * 1e3:.1f} ms"


CHECKS = [
    (1, "oracle equivalence", check_oracle_equivalence),
    (2, "scattering pair (-2, -3)", check_scattering_pair),
    (3, "reversibility", check_reversibility),
    (4, "bijectivity", check_bijectivity),
    (5, "second-order relation", check_second_order),
    (6, "Weyl automaton", check_weyl),
    (7, "transposition/arithmetic agreement", check_transposition_agreement),
    (8, "cogwheel spectral", check_cogwheel),
    (9, "cycle-Hamiltonian generality", check_cycle_hamiltonian),
    (10, "block variables", check_blocks),
    (11, "determinism & performance", check_determinism_performance),
]


def run_check(number):
    num, name, fn = CHECKS[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, never crash the suite
        ok, detail = False, f"{type(exc).__name__}: {exc}\n{traceback.format_exc()}"
    return CheckResult(num, name, bool(ok), detail, time.perf_counter() - t0)


def run_all():
    return [run_check(num) for num, _, _ in CHECKS]
