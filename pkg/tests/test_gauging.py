import random

import pytest

from scqm.colex import build_tetrahedral_colex, cube_colex, truncated_octahedron_colex
from scqm.gauging import (GaugingError, Surface, ancilla_product_identity, boundary_operator,
                          color_code_model, designated_terms, gauge_commutes, gauge_extend,
                          gauge_maps, gauss_charge, round_trip, terms_fixed,
                          verify_emergent_constraints)
from scqm.gcc import build_gcc, x_sector
from scqm.model import CodeModel, check_model
from scqm.pauli import PauliGroup, PauliOperator, commutes


@pytest.fixture(scope="module", params=["cube", "octahedron"])
def sphere(request):
    tc = cube_colex() if request.param == "cube" else truncated_octahedron_colex()
    return color_code_model(tc)


@pytest.fixture(scope="module")
def gcc_x():
    return x_sector(build_gcc(build_tetrahedral_colex(1)))


def test_color_code_model(sphere):
    assert all(check_model(sphere).values())
    assert sphere.k == 0


def test_extension_checks(sphere, gcc_x):
    for model in (sphere, gcc_x):
        _extension_ok(model)


def _extension_ok(model):
    ext = gauge_extend(model)
    assert ext.n == model.n + model.m
    assert round_trip(ext)
    assert terms_fixed(ext)
    assert gauge_maps(ext)
    assert gauge_commutes(ext)


def test_ancilla_identity_on_the_sphere(sphere):
    ext = gauge_extend(sphere)
    for pair in ("AB", "BC", "AC"):
        for kind in "XZ":
            ids = designated_terms(sphere, range(len(sphere.meta["surface"].faces)), pair, kind)
            assert ancilla_product_identity(ext, ids)


def test_ancilla_identity_on_gcc_cells(gcc_x):
    ext = gauge_extend(gcc_x)
    code = gcc_x.meta["code"]
    # faces of one color pair inside a cell give the cell operator; two
    # different decompositions of the same cell therefore multiply to one
    for c, col in enumerate(code.colex.cell_color):
        if col != code.b:
            continue
        ways = code.decompositions(c)
        for a, b in zip(ways, ways[1:]):
            assert ancilla_product_identity(ext, a + b)


def test_non_identity_products_rejected(sphere):
    ext = gauge_extend(sphere)
    with pytest.raises(GaugingError):
        ancilla_product_identity(ext, [0])


def test_non_css_terms_rejected():
    y = PauliOperator.single(1, 0, "Y")
    with pytest.raises(GaugingError):
        gauge_extend(CodeModel(None, [y], PauliGroup(1), []))


def test_closed_region_gives_identity(sphere):
    everything = range(len(sphere.meta["surface"].faces))
    for pair in ("AB", "BC", "AC"):
        rep = verify_emergent_constraints(sphere, everything, pair)
        assert rep.closed and rep.identity and rep.ok


def test_open_regions_leave_residue_on_the_rim(sphere):
    surf = Surface.of(sphere.meta["surface"])
    rng = random.Random(0)
    for _ in range(30):
        region = rng.sample(range(len(surf.face_qubits)), rng.randint(1, len(surf.face_qubits) - 1))
        for pair in ("AB", "BC", "AC"):
            rep = verify_emergent_constraints(sphere, region, pair)
            assert rep.ok


def test_gcc_cell_boundaries(gcc_x):
    code = gcc_x.meta["code"]
    for c in range(len(code.colex.cells)):
        for fs in code.decompositions(c):
            prod = boundary_operator(gcc_x, fs, [code.colex.face_color[fs[0]]])
            want = PauliOperator.from_support(gcc_x.n, xs=code.colex.cells[c])
            assert (prod.x, prod.z) == (want.x, want.z)


def test_gauss_law_on_the_sphere(sphere):
    surf = Surface.of(sphere.meta["surface"])
    rng = random.Random(1)
    for _ in range(100):
        region = rng.sample(range(len(surf.face_qubits)), rng.randint(1, len(surf.face_qubits)))
        err = PauliOperator(sphere.n, 0, rng.getrandbits(sphere.n))
        rep = gauss_charge(sphere, region, err, "AB", "X")
        assert rep.consistent
        h = boundary_operator(sphere, region, "AB", "X")
        assert (rep.boundary_eigenvalue == 1) == commutes(err, h)


def test_rim_of_a_single_face(sphere):
    surf = Surface.of(sphere.meta["surface"])
    assert sorted(surf.rim([0])) == sorted(surf.face_edges[0])
    assert surf.rim(range(len(surf.face_qubits))) == []
