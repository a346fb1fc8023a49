#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# bcdbo: block-coordinate Bayesian optimization of base-station layouts
# Copyright (C) 2026 The bcdbo authors
"""Exhaustive lattice scan of the single-BS objective on a coarse grid.

Independent numpy implementation of the channel model. Prints the best
lattice value and its parameters; the result is frozen into
tests/reference_values.hpp.

    python3 tools/oracles/lattice_scan.py [--points 5] [--grid 10]
"""

import argparse
import itertools
import math

import numpy as np


def scene_defaults():
    bw = 20e6
    return dict(
        area=1000.0, h_bs=20.0, h_rx=1.5, bw=bw,
        noise_dbm=-174.0 + 10.0 * math.log10(bw),
        pl0=40.0, d0=1.0, n=3.0,
        gmax=15.0, az3=math.radians(65.0), el3=math.radians(30.0), am=30.0,
        pmin=10.0, pmax=40.0,
    )


def rot(yaw, pitch, roll):
    cz, sz = math.cos(yaw), math.sin(yaw)
    cy, sy = math.cos(pitch), math.sin(pitch)
    cx, sx = math.cos(roll), math.sin(roll)
    rz = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]])
    ry = np.array([[cy, 0, sy], [0, 1, 0], [-sy, 0, cy]])
    rx = np.array([[1, 0, 0], [0, cx, -sx], [0, sx, cx]])
    return rz @ ry @ rx


def wrap(a):
    # [-pi, pi)
    return (a + math.pi) % (2 * math.pi) - math.pi


def objective(s, rx, x, y, p, yaw, pitch, roll):
    d = np.column_stack([rx[:, 0] - x, rx[:, 1] - y, np.full(len(rx), s["h_rx"] - s["h_bs"])])
    dist = np.linalg.norm(d, axis=1)
    u = d / dist[:, None]
    local = u @ rot(wrap(yaw), pitch, wrap(roll))  # rows of R^T u
    psi = np.arccos(np.clip(local[:, 0], -1, 1))
    r = np.hypot(local[:, 1], local[:, 2])
    safe = np.where(r > 0, r, 1.0)
    az = np.where(r > 0, psi * local[:, 1] / safe, psi)
    el = np.where(r > 0, psi * local[:, 2] / safe, 0.0)
    gain = s["gmax"] - np.minimum(12 * (az / s["az3"]) ** 2 + 12 * (el / s["el3"]) ** 2, s["am"])
    pl = s["pl0"] + 10 * s["n"] * np.log10(np.maximum(dist, s["d0"]) / s["d0"])
    prx_mw = 10 ** ((p + gain - pl) / 10)
    sinr = prx_mw / 10 ** (s["noise_dbm"] / 10)
    return float(np.mean(s["bw"] * np.log2(1 + sinr)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--grid", type=int, default=10)
    a = ap.parse_args()
    s = scene_defaults()
    step = s["area"] / a.grid
    cs = (np.arange(a.grid) + 0.5) * step
    gx, gy = np.meshgrid(cs, cs)
    rx = np.column_stack([gx.ravel(), gy.ravel()])

    lo = [0, 0, s["pmin"], -math.pi, -math.pi / 2, -math.pi]
    hi = [s["area"], s["area"], s["pmax"], math.pi, math.pi / 2, math.pi]
    axes = [np.linspace(l, h, a.points) for l, h in zip(lo, hi)]
    best, arg = -1.0, None
    for v in itertools.product(*axes):
        f = objective(s, rx, *v)
        if f > best:
            best, arg = f, v
    print(f"best {best:.17g}")
    print("at " + " ".join(f"{t:.17g}" for t in arg))


if __name__ == "__main__":
    main()
