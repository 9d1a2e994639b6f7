from fractions import Fraction

import pytest

from cliquelab.errors import GraphParseError, InputError, InvariantViolation
from cliquelab.tilings import (
    FractionalTiling,
    Tiling,
    check_fractional,
    ensure_valid,
    format_fractional,
    format_tiling,
    parse_fractional,
    parse_tiling,
    read_fractional,
    read_tiling,
    write_fractional,
    write_tiling,
)


@pytest.fixture
def half_cycle():
    return FractionalTiling.from_weights(2, {(i, (i + 1) % 5): Fraction(1, 2) for i in range(5)})


def test_tiling_normalises_cliques():
    t = Tiling(2, [(1, 0), (3, 2)])
    assert t.cliques == ((0, 1), (2, 3))
    assert t.covered == {0, 1, 2, 3}
    assert t.covered_count == 4
    assert t.is_pure
    assert len(t) == 2


def test_spanning_needs_pure_parts(k4):
    assert Tiling(2, [(0, 1), (2, 3)]).is_spanning(k4)
    mixed = Tiling(2, [(0, 1, 2)])
    assert mixed.is_valid(k4)
    assert not mixed.is_valid(k4, pure=True)
    assert not mixed.is_spanning(k4)
    assert mixed.parts_of_size(3) == [(0, 1, 2)]


@pytest.mark.parametrize(
    "cliques,problem",
    [
        ([(0, 1), (1, 2)], "reuses vertices [1]"),
        ([(0, 1, 2, 3)], "has size 4"),
        ([(0, 7)], "outside [0, 4)"),
    ],
)
def test_tiling_problems(k4, cliques, problem):
    found = Tiling(2, cliques).problems(k4)
    assert any(problem in p for p in found), found


def test_non_clique_is_rejected(c5):
    with pytest.raises(InputError, match="is not a clique"):
        ensure_valid(c5, Tiling(2, [(0, 2)]))


def test_fractional_loads(c5, half_cycle):
    assert half_cycle.support[:2] == ((0, 1), (0, 4))
    assert half_cycle.total_weight == 5
    assert half_cycle.vertex_weight(3) == 1
    assert half_cycle.count_below(c5, Fraction(1)) == 0
    assert half_cycle.is_valid(c5)


def test_from_weights_drops_zero_weights():
    ft = FractionalTiling.from_weights(2, {(1, 0): Fraction(1, 3), (2, 1): Fraction(0)})
    assert ft.support == ((0, 1),)
    assert ft.vertex_weight(2) == 0


def test_overloaded_vertex_is_an_invariant_violation(c5):
    ft = FractionalTiling(2, ((0, 1), (1, 2)), (1, 1))
    assert any("vertex 1 carries load 2" in p for p in ft.problems(c5))
    with pytest.raises(InvariantViolation):
        check_fractional(c5, ft)


def test_fractional_shape_mismatch():
    with pytest.raises(InputError, match="same length"):
        FractionalTiling(2, ((0, 1),), ())


def test_tiling_text_format(tmp_path):
    t = Tiling(2, [(2, 3), (0, 1)]).sorted()
    assert format_tiling(t) == "# r=2\n0 1\n2 3\n"
    target = tmp_path / "out" / "tiling.txt"
    write_tiling(t, target)
    assert read_tiling(target) == t


def test_fractional_text_format(tmp_path, half_cycle):
    text = format_fractional(half_cycle)
    assert text.splitlines()[:2] == ["# r=2 fractional total=5/1", "1/2 0 1"]
    target = tmp_path / "frac.txt"
    write_fractional(half_cycle, target)
    assert read_fractional(target) == half_cycle


def test_parsers_skip_comments_and_blank_lines():
    t = parse_tiling(["# r=3", "", "# first part", "0 1 2"])
    assert t.cliques == ((0, 1, 2),)
    ft = parse_fractional(["# r=2 fractional", "1/4 1 0", ""])
    assert ft.weights == (Fraction(1, 4),)


@pytest.mark.parametrize(
    "parse,lines,line_number",
    [
        (parse_tiling, [], None),
        (parse_tiling, ["# r=three"], 1),
        (parse_tiling, ["# r=2", "0 1", "0 x"], 3),
        (parse_fractional, ["0 1"], 1),
        (parse_fractional, ["# r=2", "half 0 1"], 2),
    ],
)
def test_parse_errors_carry_line_number(parse, lines, line_number):
    with pytest.raises(GraphParseError) as excinfo:
        parse(lines)
    assert excinfo.value.line_number == line_number
