"""Text and image formats.

State text::

    K M
    1 l_1
    2 l_2
    ...

one line per site, ``l_k`` the up-spin position.  Trajectory CSV has a
``n,k,value`` header and one row per (time, site), time-major.  Spacetime
images are binary PGM (P5): width 2K, height n+1, gray ``value + L``,
maxval ``M - 1``; one byte per pixel when maxval < 256, else two bytes
big-endian.  Every line ends with ``\\n``.
"""
from __future__ import annotations

import io as _io

import numpy as np

from .dirac import Trajectory
from .lattice import LatticeGeometry, NecklaceState, WaveField

__all__ = [
    "format_state",
    "format_field",
    "parse_state",
    "spin_plane_csv",
    "parse_spin_plane_csv",
    "trajectory_csv",
    "parse_trajectory_csv",
    "spacetime_pgm",
    "parse_pgm",
    "rows_csv",
    "spectrum_csv",
]


def format_state(state):
    g = state.geometry
    lines = [f"{g.pairs} {g.transverse}"]
    lines += [f"{k} {int(v)}" for k, v in enumerate(state.positions, start=1)]
    return "\n".join(lines) + "\n"


def format_field(field):
    return format_state(NecklaceState(field.geometry, field.values))


def parse_state(text):
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise ValueError("state text must start with a 'K M' header")
    g = LatticeGeometry(int(rows[0][0]), int(rows[0][1]))
    body = rows[1:]
    if len(body) != g.sites:
        raise ValueError(f"expected {g.sites} site lines, got {len(body)}")
    pos = np.zeros(g.sites, dtype=np.int64)
    for k, (label, l) in enumerate(body, start=1):
        if int(label) != k:
            raise ValueError(f"site lines must be numbered 1..{g.sites} in order")
        pos[k - 1] = int(l)
    return NecklaceState(g, pos)


def spin_plane_csv(state):
    """2K rows of M comma-separated occupation bits (1 = up)."""
    bits = (state.spin_plane() + 1) // 2
    return "".join(",".join(str(int(b)) for b in row) + "\n" for row in bits)


def parse_spin_plane_csv(text):
    bits = np.loadtxt(_io.StringIO(text), delimiter=",", dtype=np.int64, ndmin=2)
    sites, M = bits.shape
    g = LatticeGeometry(sites // 2, M)
    return NecklaceState.from_spin_plane(g, 2 * bits - 1)


def trajectory_csv(traj):
    snaps = traj.snapshots if isinstance(traj, Trajectory) else np.asarray(traj)
    buf = ["n,k,value\n"]
    for n, row in enumerate(snaps):
        buf.extend(f"{n},{k},{int(v)}\n" for k, v in enumerate(row, start=1))
    return "".join(buf)


def parse_trajectory_csv(text, transverse):
    """Rebuild a :class:`Trajectory`; the ring size is not stored in the CSV."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "n,k,value":
        raise ValueError("missing 'n,k,value' header")
    data = np.array([[int(x) for x in line.split(",")] for line in lines[1:] if line.strip()], dtype=np.int64)
    n_max, k_max = data[:, 0].max(), data[:, 1].max()
    if data.shape[0] != (n_max + 1) * k_max or k_max % 2:
        raise ValueError("trajectory CSV is incomplete")
    snaps = np.zeros((n_max + 1, k_max), dtype=np.int64)
    snaps[data[:, 0], data[:, 1] - 1] = data[:, 2]
    return Trajectory(LatticeGeometry(k_max // 2, transverse), snaps)


def spacetime_pgm(snapshots, offset, maxval):
    """Binary PGM with one row per time step; gray = value + offset."""
    gray = np.asarray(snapshots, dtype=np.int64) + offset
    if gray.ndim != 2 or gray.size == 0:
        raise ValueError("need a non-empty 2-D array of snapshots")
    if gray.min() < 0 or gray.max() > maxval:
        raise ValueError("gray levels out of range")
    height, width = gray.shape
    header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
    dtype = ">u1" if maxval < 256 else ">u2"
    return header + gray.astype(dtype).tobytes()


def trajectory_pgm(traj):
    g = traj.geometry
    return spacetime_pgm(traj.snapshots, g.half_width, g.transverse - 1)


def parse_pgm(data):
    """Return ``(gray array, maxval)`` from P5 bytes written by this module."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5" or len(parts) < 4:
        raise ValueError("not a P5 image")
    width, height = (int(x) for x in parts[1].split())
    maxval = int(parts[2])
    dtype = ">u1" if maxval < 256 else ">u2"
    gray = np.frombuffer(parts[3], dtype=dtype).reshape(height, width)
    return gray.astype(np.int64), maxval


def rows_csv(rows):
    """Plain CSV, one integer sequence per line (occupation/block fields)."""
    return "".join(",".join(str(int(v)) for v in row) + "\n" for row in rows)


def spectrum_csv(entries):
    """``entries`` is an iterable of (N, T, levels); writes N,T,index,value."""
    buf = ["N,T,index,value\n"]
    for N, T, levels in entries:
        buf.extend(f"{N},{T!r},{n},{float(e)!r}\n" for n, e in enumerate(levels, start=1))
    return "".join(buf)


def read_field_file(path):
    """Load a state text file as a :class:`WaveField`."""
    with open(path) as fh:
        state = parse_state(fh.read())
    return WaveField(state.geometry, state.positions)
