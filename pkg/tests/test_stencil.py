import numpy as np
import pytest

from mortonvox import morton, stencil
from mortonvox.stencil import compile as compile_stencil


def test_yz_square_worked_codes():
    st = compile_stencil([[0, 0, 0], [0, 1, 0], [0, 1, 1], [0, 0, 1]],
                         [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert st.cond_codes == (0b000, 0b010, 0b011, 0b001)
    assert st.edge_codes == (0b001000, 0b001110, 0b000111, 0b000001)


def test_trivial():
    st = compile_stencil([[0, 0, 0]], [])
    assert st.cond_codes == (0,)
    assert st.edge_codes == ()
    assert st.degree == 0


@pytest.mark.parametrize("kind,n", [("face6", 6), ("edge18", 18), ("vertex26", 26)])
def test_star_sizes(kind, n):
    st = stencil.standard(kind)
    assert len(st.cond) == n + 1
    assert len(st.edges) == n == st.degree
    assert all(i == 0 for i, _ in st.edges)


def test_face6_codes_match_encode_oracle():
    st = stencil.standard("face6")
    assert {tuple(c) for c in st.cond[1:]} == {
        (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)}
    for c, code in zip(st.cond, st.cond_codes):
        assert code == morton.encode_offset3(c)
        if np.all(c >= 0):
            assert code == morton.encode3(tuple(c))


def test_forward_edge_codes_deinterleave():
    for kind in stencil.KINDS:
        st = stencil.standard(kind)
        for (i, j), eps in zip(st.edges, st.edge_codes):
            if np.all(st.cond[i] >= 0) and np.all(st.cond[j] >= 0):
                assert morton.deinterleave2(eps) == (st.cond_codes[i], st.cond_codes[j])


def test_cube8():
    st = stencil.standard("cube8")
    assert {tuple(c) for c in st.cond} == {(i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)}
    assert len(st.cells) == 1 and len(st.cells[0]) == 8
    assert [tuple(c) for c in st.cell_corners()] == [(0, 0, 0)]


@pytest.mark.parametrize("kind,normal", [("squareYZ", 0), ("squareZX", 1), ("squareXY", 2)])
def test_squares(kind, normal):
    st = stencil.standard(kind)
    (corner, n), = st.face_frames()
    assert n == normal and tuple(corner) == (0, 0, 0)


def test_recompile_identical():
    for kind in stencil.KINDS:
        a, b = stencil.standard(kind), stencil.standard(kind)
        assert a.cond.tobytes() == b.cond.tobytes()
        assert (a.hyper_edges, a.cond_codes, a.edge_codes) == (b.hyper_edges, b.cond_codes, b.edge_codes)


@pytest.mark.parametrize("cond,edges", [
    ([[1, 0, 0]], []),                              # anchor missing
    ([[0, 0, 0], [1, 0, 0]], [(0, 2)]),             # index out of range
    ([[0, 0, 0], [1, 0, 0]], [(0, 0)]),             # repeated index
    ([[0, 0, 0], [1, 0, 0], [1, 0, 0]], []),        # duplicate offset
    ([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [(0, 1, 2)]),  # bad arity
    ([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 2, 0]], [(0, 1, 2, 3)]),  # not a unit square
])
def test_validation(cond, edges):
    with pytest.raises(ValueError):
        compile_stencil(cond, edges)


def test_unknown_kind():
    with pytest.raises(ValueError):
        stencil.standard("hex7")
