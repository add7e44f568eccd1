import pytest

from scqm.colex import (COLORS, ColexError, build_tetrahedral_colex, cube_colex,
                        edge_color, outer_two_colex, read_colex,
                        truncated_octahedron_colex, validate_colex, write_colex)


def two_colex_problems(tc, closed=True):
    """Independent checker: valence and a proper 3-coloring of faces."""
    deg = [0] * tc.n_vertices
    for a, b in tc.edges:
        deg[a] += 1
        deg[b] += 1
    bad = [v for v, d in enumerate(deg) if (d != 3 if closed else d > 3)]
    for i in range(len(tc.faces)):
        for j in range(i + 1, len(tc.faces)):
            if len(set(tc.faces[i]) & set(tc.faces[j])) >= 2 and tc.colors[i] == tc.colors[j]:
                bad.append((i, j))
    return bad + ([] if len(set(tc.colors)) <= 3 else ["colors"])


@pytest.fixture(scope="module", params=[1, 2, 3])
def colex(request):
    return build_tetrahedral_colex(request.param)


def test_tetrahedral_colex_is_valid(colex):
    assert validate_colex(colex) == []


def test_qubits_are_four_valent(colex):
    deg = [0] * colex.n_qubits
    for e in colex.edges:
        for v in e:
            deg[v] += 1
    assert set(deg) == {4}


def test_interior_edges_have_one_color(colex):
    for e, vs in enumerate(colex.edges):
        if len(vs) == 2:
            assert len(edge_color(colex, e)) == 1


def test_cells_are_four_colored(colex):
    assert set(colex.cell_color) <= set(COLORS)
    for f in range(len(colex.faces)):
        owners = colex.face_cells(f)
        if len(owners) == 2:
            a, b = owners
            assert colex.cell_color[a] != colex.cell_color[b]


def test_outer_colex_is_a_two_colex(colex):
    tc = outer_two_colex(colex)
    assert two_colex_problems(tc, closed=False) == []
    assert tc.check(closed=False) == []
    assert set(tc.colors) == set("ABC")


def test_smallest_colex_sizes():
    cx = build_tetrahedral_colex(1)
    assert (cx.n_qubits, len(cx.faces), len(cx.cells)) == (15, 18, 4)


@pytest.mark.parametrize("make", [cube_colex, truncated_octahedron_colex])
def test_sphere_colexes(make):
    tc = make()
    assert two_colex_problems(tc) == []
    assert tc.check() == []
    # Euler characteristic of the sphere
    assert tc.n_vertices - len(tc.edges) + len(tc.faces) == 2


def test_file_round_trip(colex):
    again = read_colex(write_colex(colex))
    assert validate_colex(again) == []
    assert again.faces == colex.faces
    assert again.cells == colex.cells
    assert again.face_facets == colex.face_facets


@pytest.mark.parametrize("text, where", [
    ("0 1 2\nVERTICES\n2\n", "first section"),
    ("VERTICES\n2\nEDGES\n1 0 1\n", "expected id 0"),
    ("VERTICES\n2\nEDGES\n0 0 5\n", "out of range"),
    ("VERTICES\nx\n", "one integer"),
    ("VERTICES\n2\nVERTICES\n2\n", "duplicate"),
])
def test_bad_files(text, where):
    with pytest.raises(ColexError, match=where):
        read_colex(text)


def test_missing_colors_rejected():
    text = write_colex(build_tetrahedral_colex(1))
    head, _ = text.split("COLORS")
    with pytest.raises(ColexError):
        read_colex(head + "COLORS\n")


def test_validator_catches_bad_coloring():
    cx = build_tetrahedral_colex(1)
    cx.face_color[0] = "rg" if cx.face_color[0] != "rg" else "yb"
    assert validate_colex(cx)
