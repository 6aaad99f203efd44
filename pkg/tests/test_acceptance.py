"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed in the terminal summary (see ``conftest.py``) and also
when the module is run directly with ``python tests/test_acceptance.py``.
"""
import itertools
import os
import subprocess
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))
from conftest import CELL_STENCILS, block_cloud, block_complex  # noqa: E402

from mortonvox import complex as cx  # noqa: E402
from mortonvox import io, morton, operators as ops, sampling, shapes, sparse, stencil  # noqa: E402
from mortonvox.errors import BoundaryNotClosedError  # noqa: E402
from mortonvox.geometry import TriMesh  # noqa: E402
from mortonvox.voxelize import voxelate_point_cloud  # noqa: E402

RESULTS = {}


def report(n, title, ok, detail):
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def bit_encode(rho):
    """Reference interleave via per-bit string assembly."""
    bits = [format(int(c), "021b") for c in rho]
    return int("".join(bits[0][k] + bits[1][k] + bits[2][k] for k in range(21)), 2)


def bit_interleave(src, dst):
    s, d = format(src, "030b"), format(dst, "030b")
    return int("".join(d[k] + s[k] for k in range(30)), 2)


# 1 -------------------------------------------------------------------------------

def test_criterion_1_morton():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    rho = rng.integers(0, 1 << 21, (10_000, 3))
    codes = morton.encode3_array(rho)
    roundtrip = np.array_equal(morton.decode3_array(codes), rho)
    oracle_enc = all(int(c) == bit_encode(r) for c, r in zip(codes[:2000], rho[:2000]))

    a = rng.integers(0, 1 << 20, (10_000, 3))
    b = rng.integers(0, 1 << 20, (10_000, 3))
    s3 = morton.morton_sum3_array(morton.encode3_array(a), morton.encode3_array(b))
    sum3_ok = all(int(s) == bit_encode(x + y) for s, x, y in zip(s3, a, b))

    sa, da, sb, db = (rng.integers(0, 1 << 9, (10_000, 3)) for _ in range(4))
    enc = morton.encode3_array

    def e6(s, d):
        return morton.interleave2_array(enc(s), enc(d))

    s6 = morton.morton_sum6_array(e6(sa, da), e6(sb, db))
    sum6_ok = all(int(s) == bit_interleave(bit_encode(w + x), bit_encode(y + z))
                  for s, w, x, y, z in zip(s6, sa, sb, da, db))

    st = stencil.compile([[0, 0, 0], [0, 1, 0], [0, 1, 1], [0, 0, 1]],
                         [(0, 1), (1, 2), (2, 3), (3, 0)])
    worked = (st.cond_codes == (0b000, 0b010, 0b011, 0b001)
              and st.edge_codes == (0b001000, 0b001110, 0b000111, 0b000001))
    ok = roundtrip and oracle_enc and sum3_ok and sum6_ok and worked
    report(1, "Morton suite", ok,
           f"roundtrip={roundtrip} encode_oracle={oracle_enc} sum3={sum3_ok} sum6={sum6_ok} "
           f"worked_codes={worked} ({time.perf_counter() - t0:.1f}s)")


# 2 -------------------------------------------------------------------------------

def surface_chi(mesh, sigma):
    pts = sampling.sample_surface_mesh(mesh, None, sigma)
    cloud = voxelate_point_cloud(pts, None, sigma)
    st = [stencil.standard("face6")] + [stencil.standard(k) for k in CELL_STENCILS]
    X = cx.construct(cloud, st)
    return cx.euler_characteristic(X), X.counts


def test_criterion_2_topology():
    sphere = shapes.icosphere(4, 1.0, center=(0.013, -0.021, 0.007))
    torus = shapes.torus(1.0, 0.4, 96, 48, center=(0.011, 0.017, -0.009))
    chi_s, n_s = surface_chi(sphere, 2.0 / 16)
    chi_t, n_t = surface_chi(torus, 2.8 / 16)
    X = cx.construct(block_cloud(2, 2, 2), [stencil.standard("face6"), stencil.standard("cube8")])
    chi_cube = cx.euler_characteristic(X, cells=False)
    ok = chi_s == 2 and chi_t == 0 and chi_cube == 2
    report(2, "Topology suite", ok,
           f"sphere chi={chi_s} {n_s}; torus chi={chi_t} {n_t}; unit cube V-E+F={chi_cube}")


# 3 -------------------------------------------------------------------------------

def test_criterion_3_operator_identities():
    rng = np.random.default_rng(3)
    dims_list = [(2, 2, 2), (3, 5, 2), (4, 4, 4), (6, 3, 7), (8, 8, 8)]
    worst = {"L": 0.0, "L1": 0.0, "xLx": np.inf, "curl": 0.0}
    exact = True
    for dims in dims_list:
        X = block_complex(*dims, sigma=rng.uniform(0.5, 2.0, 3))
        G, D = ops.gradient(X), ops.divergence(X)
        exact &= D == sparse.transpose(G)
        L = sparse.multiply(D, G)
        Lw = ops.laplacian_weighted(X)
        worst["L"] = max(worst["L"], float(np.abs(L.toarray() - Lw.toarray()).max()))
        n = L.rows
        worst["L1"] = max(worst["L1"], float(np.abs(sparse.matvec(L, np.ones(n))).max()))
        x = rng.normal(size=(100, n))
        worst["xLx"] = min(worst["xLx"], float(np.einsum("ij,ij->i", x, (L.csr @ x.T).T).min()))
        exact &= sparse.multiply(X.M_FE, X.M_EV).nnz == 0
        U = block_complex(*dims, sigma=float(rng.uniform(0.5, 2.0)))
        f = rng.normal(size=len(U.vertex_ids))
        worst["curl"] = max(worst["curl"],
                            float(np.abs(ops.curl(U, sparse.matvec(ops.gradient(U), f))).max()))
    ok = exact and worst["L"] <= 1e-12 and worst["L1"] <= 1e-12 and worst["xLx"] >= -1e-12 \
        and worst["curl"] <= 1e-12
    report(3, "Operator identities", ok,
           f"D=G^T and OmegaM=0 exact={exact}; max|DG-M^T Xi^-2 M|={worst['L']:.2e}; "
           f"max|L1|={worst['L1']:.2e}; min xLx={worst['xLx']:.3g}; "
           f"max|curl grad|={worst['curl']:.2e}")


# 4 -------------------------------------------------------------------------------

def test_criterion_4_calculus():
    rng = np.random.default_rng(4)
    X = block_complex(6, 6, 6, sigma=rng.uniform(0.5, 2.0, 3), cells=False)
    x = X.positions
    a = rng.normal(size=3)
    E, xi = ops.edge_geometry(X)
    grad_err = float(np.abs(sparse.matvec(ops.gradient(X), x @ a + 0.3) - (E / xi[:, None]) @ a).max())

    vox = X.cloud.ioxels
    hi = vox.max(axis=0)
    inner = np.all((vox >= 1) & (vox <= hi - 1), axis=1)
    deep = np.all((vox >= 2) & (vox <= hi - 2), axis=1)
    A = rng.normal(size=(3, 3))
    jac_err = float(np.abs(ops.jacobian(X, x @ A.T)[inner] - A).max())
    B = rng.normal(size=(3, 3))
    Q = B + B.T
    f = np.einsum("ni,ij,nj->n", x, Q, x)
    hess_rel = float(np.abs(ops.hessian(X, f)[deep] - 2 * Q).max() / np.linalg.norm(Q))

    s = np.array([0.5, 1.25, 2.0])
    m, n, o = 4, 3, 5
    C = block_complex(m, n, o, sigma=s)
    vol = float(ops.integral_volume(C) @ np.ones(m * n * o))
    vol_ok = vol == (m - 1) * (n - 1) * (o - 1) * s.prod()
    path = cx.construct(block_cloud(7, 1, 1, sigma=0.75), stencil.standard("face6"))
    length = float(ops.integral_line(path) @ np.ones(7))
    len_ok = length == 6 * 0.75

    ok = grad_err <= 1e-12 and jac_err <= 1e-10 and hess_rel <= 0.1 and vol_ok and len_ok
    report(4, "Calculus exactness", ok,
           f"grad err={grad_err:.2e}; jacobian err={jac_err:.2e} ({inner.sum()} interior); "
           f"hessian rel err={hess_rel:.2e} ({deep.sum()} deep); s3(1)={vol} exact={vol_ok}; "
           f"s1(1)={length} exact={len_ok}")


# 5 -------------------------------------------------------------------------------

def test_criterion_5_sampling():
    r, sigma = 8.0, 1.0
    sphere = shapes.icosphere(5, r, center=(0.137, -0.241, 0.319))
    counts = {}
    for mode in sampling.MODES:
        pts = sampling.sample_volume_mesh(sphere, None, sigma, mode)
        counts[mode] = len(voxelate_point_cloud(pts, None, sigma))
    target = 4 / 3 * np.pi * r ** 3 / sigma ** 3
    vol_ok = all(abs(c - target) <= 0.1 * target for c in counts.values())

    try:
        sampling.sample_volume_mesh(shapes.box((0, 0, 0), (3, 3, 3), open_face=4), None, 1.0)
        open_ok = False
    except BoundaryNotClosedError as exc:
        open_ok = "boundary is not closed" in str(exc)

    Ns, rays, pairs = [8, 16, 32], [], []
    L = 2.0
    for N in Ns:
        s = L / (N - 1)
        m = shapes.icosphere(3, 0.495 * L, center=(L / 2,) * 3)
        _, st = sampling.sample_volume_mesh(m, None, s, return_stats=True)
        assert tuple(st.grid.dims + 1) == (N, N, N)
        rays.append(st.rays)
        pairs.append(st.tests)
    slope = float(np.polyfit(np.log(Ns), np.log(rays), 1)[0])
    cells_slope = float(np.polyfit(np.log(Ns), np.log(np.array(Ns, float) ** 3), 1)[0])
    pair_slope = float(np.polyfit(np.log(Ns), np.log(pairs), 1)[0])
    exp_ok = abs(slope - 2.0) <= 0.1

    ok = vol_ok and open_ok and exp_ok
    report(5, "Sampling correctness", ok,
           f"r/sigma=8 counts={counts} target={target:.1f}; open boundary raises={open_ok}; "
           f"rays={rays} at N={Ns} exponent={slope:.3f} (cells exponent {cells_slope:.1f}; "
           f"ray-triangle pairs {pairs}, exponent {pair_slope:.2f})")


# 6 -------------------------------------------------------------------------------

def _cli(*args):
    return subprocess.run([sys.executable, "-m", "mortonvox", *map(str, args)],
                          capture_output=True, text=True)


def test_criterion_6_determinism(tmp_path):
    obj = tmp_path / "sphere.obj"
    assert _cli("shape", "--kind", "icosphere", "--subdivisions", "3", "--out", obj).returncode == 0
    outs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        r = _cli("run", "--input", obj, "--kind", "surface", "--sigma", "0.125", "--cells",
                 "--out-dir", d, "--json")
        assert r.returncode == 0, r.stderr
        outs.append((d, r.stdout))
    names = sorted(os.listdir(outs[0][0]))
    same_names = names == sorted(os.listdir(outs[1][0]))
    diff = [n for n in names
            if (outs[0][0] / n).read_bytes() != (outs[1][0] / n).read_bytes()]
    ok = same_names and not diff and outs[0][1] == outs[1][1] and len(names) >= 10
    report(6, "Determinism", ok,
           f"{len(names)} files compared, differing={diff}, stdout identical={outs[0][1] == outs[1][1]}")


# 7 -------------------------------------------------------------------------------

def test_criterion_7_heat():
    rng = np.random.default_rng(7)
    X = block_complex(6, 6, 6, cells=False)
    vox = X.cloud.ioxels
    inner = np.all((vox >= 1) & (vox <= 4), axis=1)
    f0 = np.where(inner, rng.uniform(0, 1, len(vox)), 0.0)
    bound = ops.heat_dt_bound(X)
    f = ops.solve_heat(X, f0, 0.9 * bound, 1000)
    drift = abs(float(f.sum() - f0.sum()))
    rejected = []
    for dt in (bound, 1.01 * bound, 2 * bound):
        try:
            ops.solve_heat(X, f0, dt, 1)
            rejected.append(False)
        except ValueError:
            rejected.append(True)
    ok = drift <= 1e-9 and all(rejected) and np.all(np.isfinite(f))
    report(7, "Heat demo", ok,
           f"drift over 1000 steps={drift:.2e} (dt={0.9 * bound:.4g}, bound={bound:.4g}); "
           f"guard rejects dt>=bound: {all(rejected)}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
