"""Command-line front end.

::

    necklace run dirac --pairs 4 --transverse 7 --steps 16 --init zero
    necklace run weyl --size 4 --steps 8 --init random --seed 7
    necklace cogwheel spectrum --N 8
    necklace cogwheel verify --n-max 16
    necklace verify all
    necklace invert --state-file state.txt --steps 5
    necklace blocks --chain +--+-+ --levels 3

Exit codes: 0 ok, 1 usage error, 2 verification failure, 3 I/O error.
Output goes to ``--out-dir``, else ``$NECKLACE_OUT_DIR``, else the config
file value, else the current directory.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import cogwheel, dirac, io, weyl
from .lattice import GeometryError, LatticeGeometry, NecklaceState, WaveField
from .rng import seeded_spins, seeded_values

log = logging.getLogger("necklace_ca")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3
OUT_DIR_ENV = "NECKLACE_OUT_DIR"
MODES = ("dirac", "weyl", "cogwheel", "verify", "invert", "blocks")
INITS = ("zero", "single", "random", "file", "values")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    mode: str
    action: str | None = None
    pairs: int | None = None
    transverse: int | None = None
    size: int | None = None
    N: int | None = None
    n_max: int = 16
    T: float = 1.0
    steps: int = 0
    init: str = "zero"
    site: int | None = None
    value: int | None = None
    values: tuple | None = None
    seed: int | None = None
    state_file: str | None = None
    chain: str | None = None
    levels: int = 1
    tol: float = 1e-9
    out_dir: str = "."
    formats: tuple = ("csv",)
    name: str | None = None

    def validate(self):
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.steps < 0:
            raise UsageError("--steps must be non-negative")
        if self.init not in INITS:
            raise UsageError(f"--init must be one of {', '.join(INITS)}")
        if self.mode in ("dirac", "invert") and self.init != "file":
            if self.transverse is None and self.size is None:
                raise UsageError("--transverse (or --size) is required")
            if self.pairs is None and self.size is None:
                raise UsageError("--pairs (or --size) is required")
        if self.mode == "weyl" and self.size is None and self.init != "file" and self.chain is None:
            raise UsageError("--size is required for the weyl automaton")
        if self.init == "random" and self.seed is None:
            raise UsageError("--seed is required with --init random")
        if self.init == "single" and self.site is None:
            raise UsageError("--site is required with --init single")
        if self.init == "file" and self.state_file is None:
            raise UsageError("--state-file is required with --init file")
        if self.init == "values" and self.values is None:
            raise UsageError("--values is required with --init values")
        if self.mode == "cogwheel" and self.action == "spectrum" and self.N is None:
            raise UsageError("--N is required for cogwheel spectrum")
        if self.mode == "blocks" and self.chain is None:
            raise UsageError("--chain is required for blocks")
        bad = set(self.formats) - {"csv", "pgm"}
        if bad:
            raise UsageError(f"unsupported output format(s): {', '.join(sorted(bad))}")
        return self

    def geometry(self):
        try:
            if self.pairs is None and self.transverse is None:
                return LatticeGeometry.from_size(self.size, self.T)
            K = self.pairs if self.pairs is not None else self.size
            M = self.transverse if self.transverse is not None else 2 * self.size + 1
            return LatticeGeometry(K, M, self.T)
        except GeometryError as exc:
            raise UsageError(str(exc)) from None


CONFIG_KEYS = {f.name for f in fields(RunConfig)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _format_list(text):
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _add_common(p):
    # every default is None so that only flags actually given override the file
    p.add_argument("--config", help="JSON file with RunConfig keys")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--format", dest="formats", type=_format_list, help="comma list of csv,pgm")
    p.add_argument("--name", help="basename of output files")
    p.add_argument("-v", "--verbose", action="store_true", default=None)


def _add_lattice(p):
    p.add_argument("--pairs", type=int, help="K, number of longitudinal site pairs")
    p.add_argument("--transverse", type=int, help="M, odd transverse ring size")
    p.add_argument("--size", type=int, help="S: K=S, M=2S+1 (dirac); chain half size (weyl)")
    p.add_argument("--T", dest="T", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--init", choices=INITS)
    p.add_argument("--site", type=int)
    p.add_argument("--value", type=int)
    p.add_argument("--values", type=_int_list)
    p.add_argument("--seed", type=int)
    p.add_argument("--state-file", dest="state_file")
    p.add_argument("--chain", help="weyl chain as a +/- string")


def build_parser():
    parser = _Parser(prog="necklace", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evolve an automaton and export the trajectory")
    run.add_argument("automaton", choices=("dirac", "weyl"))
    _add_lattice(run)
    _add_common(run)

    cog = sub.add_parser("cogwheel", help="cogwheel spectra and exponential checks")
    cog.add_argument("action", choices=("spectrum", "verify"))
    cog.add_argument("--N", dest="N", type=int)
    cog.add_argument("--n-max", dest="n_max", type=int)
    cog.add_argument("--T", dest="T", type=float)
    cog.add_argument("--tol", type=float)
    _add_common(cog)

    ver = sub.add_parser("verify", help="run the full verification suite")
    ver.add_argument("action", choices=("all",))
    _add_common(ver)

    inv = sub.add_parser("invert", help="evolve a Dirac state backwards")
    _add_lattice(inv)
    _add_common(inv)

    blk = sub.add_parser("blocks", help="block variables of a spin chain")
    blk.add_argument("--chain", required=False)
    blk.add_argument("--levels", type=int)
    blk.add_argument("--inverse", action="store_true", default=None,
                     help="also invert every level back down and check the round trip")
    _add_common(blk)
    return parser


def parse_config(argv, config_file=None):
    """Resolve a :class:`RunConfig` from flags and an optional JSON file.

    Flags given on the command line override file values; unknown file keys
    are rejected.  The resolved configuration is logged.
    """
    args = build_parser().parse_args(argv)
    given = {k: v for k, v in vars(args).items() if v is not None}
    config_file = given.pop("config", None) or config_file
    command = given.pop("command")
    verbose = given.pop("verbose", None)
    inverse = given.pop("inverse", None)
    if command == "run":
        mode = given.pop("automaton")
    else:
        mode = command
    if inverse:
        given["action"] = "inverse"

    merged = {}
    if config_file:
        try:
            with open(config_file) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {config_file}: {exc}") from None
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        for key in ("values", "formats"):
            if isinstance(data.get(key), list):
                data[key] = tuple(data[key])
        merged.update(data)
        if merged.get("mode", mode) != mode:
            raise UsageError(f"config file mode {merged['mode']!r} conflicts with command {mode!r}")
    env_out = os.environ.get(OUT_DIR_ENV)
    if env_out:
        merged["out_dir"] = env_out
    for key, val in given.items():
        if key in merged and merged[key] != val:
            log.info("flag --%s=%r overrides config value %r", key.replace("_", "-"), val, merged[key])
        merged[key] = val
    merged["mode"] = mode
    cfg = RunConfig(**merged).validate()
    if verbose:
        logging.getLogger("necklace_ca").setLevel(logging.DEBUG)
    log.info("resolved config: %s", json.dumps(asdict(cfg), sort_keys=True))
    return cfg


# -- experiments ------------------------------------------------------------

def _initial_field(cfg):
    if cfg.init == "file":
        try:
            field = io.read_field_file(cfg.state_file)
        except OSError as exc:
            raise OSError(f"cannot read state file: {exc}") from exc
        except ValueError as exc:
            raise UsageError(f"bad state file: {exc}") from None
        return field
    g = cfg.geometry()
    values = np.zeros(g.sites, dtype=np.int64)
    if cfg.init == "single":
        if not 1 <= cfg.site <= g.sites:
            raise UsageError(f"--site must be in 1..{g.sites}")
        values[cfg.site - 1] = 1 if cfg.value is None else cfg.value
    elif cfg.init == "random":
        values = seeded_values(cfg.seed, g.sites, g.transverse)
    elif cfg.init == "values":
        if len(cfg.values) != g.sites:
            raise UsageError(f"--values needs {g.sites} entries, got {len(cfg.values)}")
        values = np.array(cfg.values, dtype=np.int64)
    try:
        return WaveField(g, values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _initial_chain(cfg):
    if cfg.chain is not None:
        return weyl.SpinChain.from_string(cfg.chain)
    if cfg.init == "file":
        with open(cfg.state_file) as fh:
            return weyl.SpinChain.from_string(fh.read())
    n = 2 * cfg.size
    spins = -np.ones(n, dtype=np.int8)
    if cfg.init == "single":
        if not 1 <= cfg.site <= n:
            raise UsageError(f"--site must be in 1..{n}")
        spins[cfg.site - 1] = 1
    elif cfg.init == "random":
        spins = seeded_spins(cfg.seed, n)
    elif cfg.init == "values":
        spins = np.array(cfg.values, dtype=np.int8)
    return weyl.SpinChain(spins)


def _out_path(cfg, suffix):
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out / f"{cfg.name or cfg.mode}{suffix}"


def _write(path, data):
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode, newline="" if mode == "w" else None) as fh:
        fh.write(data)
    log.info("wrote %s", path)


def emit_spacetime(traj, fmt):
    """Serialize a trajectory as ``"csv"`` text or ``"pgm"`` bytes."""
    if fmt == "csv":
        return io.trajectory_csv(traj)
    if fmt == "pgm":
        return io.trajectory_pgm(traj)
    raise ValueError(f"unsupported format {fmt!r}")


def _run_dirac(cfg):
    field = _initial_field(cfg)
    traj = dirac.run(NecklaceState(field.geometry, field.values), cfg.steps)
    for fmt in cfg.formats:
        _write(_out_path(cfg, f".{fmt}"), emit_spacetime(traj, fmt))
    print(f"dirac K={field.geometry.pairs} M={field.geometry.transverse} steps={cfg.steps}")
    return EXIT_OK


def _run_weyl(cfg):
    chain = _initial_chain(cfg)
    snaps = [chain.spins]
    for _ in range(cfg.steps):
        chain = weyl.chain_step(chain)
        snaps.append(chain.spins)
    snaps = np.array(snaps, dtype=np.int64)
    for fmt in cfg.formats:
        data = io.trajectory_csv(snaps) if fmt == "csv" else io.spacetime_pgm((snaps + 1) // 2, 0, 1)
        _write(_out_path(cfg, f".{fmt}"), data)
    print(f"weyl S={chain.half_size} steps={cfg.steps} final={chain}")
    return EXIT_OK


def _run_cogwheel(cfg):
    if cfg.action == "spectrum":
        spec = cogwheel.CogwheelSpec(cfg.N, cfg.T)
        levels = cogwheel.hamiltonian_diagonal(spec)
        _write(_out_path(cfg, ".csv"), io.spectrum_csv([(cfg.N, cfg.T, levels)]))
        dev = cogwheel.verify_exponential(spec, cfg.tol)
        print(f"cogwheel N={cfg.N} T={cfg.T}: gap={2 * np.pi / (cfg.N * cfg.T):.12g} max|expm(-iHT)-U|={dev:.2e}")
        return EXIT_OK
    status = EXIT_OK
    for N in range(1, cfg.n_max + 1):
        try:
            dev = cogwheel.verify_exponential(cogwheel.CogwheelSpec(N, cfg.T), cfg.tol)
            print(f"N={N:3d} deviation={dev:.2e} ok")
        except cogwheel.VerificationError as exc:
            print(f"N={N:3d} FAILED {exc}")
            status = EXIT_VERIFY
    try:
        devs = cogwheel.exchange_pauli_check()
        print("exchange identities: " + ", ".join(f"{k}={v:.2e}" for k, v in devs.items()))
    except cogwheel.VerificationError as exc:
        print(f"exchange identities FAILED {exc}")
        status = EXIT_VERIFY
    return status


def _run_verify(cfg):
    from .verify import run_all

    results = run_all()
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def _run_invert(cfg):
    field = _initial_field(cfg)
    state = NecklaceState(field.geometry, field.values)
    for _ in range(cfg.steps):
        state = dirac.step_inverse(state)
    _write(_out_path(cfg, ".txt"), io.format_state(state))
    print(f"inverted {cfg.steps} steps")
    return EXIT_OK


def _run_blocks(cfg):
    chain = weyl.SpinChain.from_string(cfg.chain)
    levels = [weyl.occupation(chain)]
    for _ in range(cfg.levels):
        levels.append(weyl.block_transform(levels[-1]))
    _write(_out_path(cfg, ".csv"), io.rows_csv(f.values for f in levels))
    if cfg.action == "inverse":
        for lower, upper in zip(levels[:-1], levels[1:]):
            try:
                back = weyl.block_inverse(upper)
            except weyl.NoninvertibleError as exc:
                print(f"level {upper.level}: {exc}")
                return EXIT_VERIFY
            if back != lower:
                print(f"level {upper.level}: round trip failed")
                return EXIT_VERIFY
        print(f"inverse round trip exact for {cfg.levels} level(s)")
    return EXIT_OK


RUNNERS = {
    "dirac": _run_dirac,
    "weyl": _run_weyl,
    "cogwheel": _run_cogwheel,
    "verify": _run_verify,
    "invert": _run_invert,
    "blocks": _run_blocks,
}


def run_experiment(cfg):
    """Run a resolved configuration; returns the process exit code."""
    try:
        return RUNNERS[cfg.mode](cfg)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return run_experiment(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
