import itertools
import sys

import numpy as np
import pytest

from mortonvox import complex as cx
from mortonvox import stencil
from mortonvox.voxelize import VoxelCloud

CELL_STENCILS = ("squareYZ", "squareZX", "squareXY", "cube8")


def block_voxels(m, n, o, offset=(0, 0, 0)):
    return np.array(list(itertools.product(range(m), range(n), range(o)))) + np.asarray(offset)


def block_cloud(m, n, o, sigma=1.0, offset=(0, 0, 0)):
    return VoxelCloud.from_voxels(block_voxels(m, n, o, offset), sigma)


def block_complex(m, n, o, sigma=1.0, cells=True, kind="face6"):
    st = [stencil.standard(kind)]
    if cells:
        st += [stencil.standard(k) for k in CELL_STENCILS]
    return cx.construct(block_cloud(m, n, o, sigma), st)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
