import pytest

from lattes_fsr import fsr, fundom
from lattes_fsr.lattes import MultiplierMatrix


def two_row_strip_rule() -> fsr.SubdivisionRule:
    """Hexagon-shaped strip (corners (0,0), (1,0), (2,0), (2,1), (1,1), (0,1))
    cut by the line y = 1/2 into two rows of the same shape.  The bottom row
    has edges inside two disjoint edges of the parent, so the pair graph has
    a self-loop, and edge type A never splits."""
    tile = fsr.TileType(
        "P", [("A", 1), ("A", -1), ("C", 1), ("B", 1), ("B", -1), ("C", -1)], 9,
        [[0, 1], [1, 2], [2, 6, 3], [3, 4], [4, 5], [5, 7, 0]],
        [fsr.Subtile("P", [0, 1, 2, 6, 8, 7]), fsr.Subtile("P", [3, 4, 5, 7, 8, 6])])
    edges = {"A": [("A", 1)], "B": [("A", 1)], "C": [("C", 1), ("C", -1)]}
    return fsr.SubdivisionRule(edges, {"P": tile}, name="two-row strip")


@pytest.fixture(scope="session")
def strip_rule():
    return two_row_strip_rule()


@pytest.fixture(scope="session")
def hex_domain():
    return fundom.build_hex_domain(MultiplierMatrix(5, -3, 2, 4), (0, 0))


@pytest.fixture(scope="session")
def hex_rule(hex_domain):
    return fundom.extract_rule(hex_domain)


@pytest.fixture(scope="session")
def gosper_rule():
    return fundom.extract_rule(fundom.build_from_template("gosper_2m312"))


@pytest.fixture(scope="session")
def quadratic_domain():
    return fundom.build_from_template("quadratic_sqrtm7")


@pytest.fixture(scope="session")
def quadratic_rule(quadratic_domain):
    return fundom.extract_rule(quadratic_domain)


@pytest.fixture(scope="session")
def parallelogram_rule():
    return fundom.extract_rule(fundom.build_parallelogram_domain(2, beta=(0, 0)))


def pytest_terminal_summary(terminalreporter):
    from criteria_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
