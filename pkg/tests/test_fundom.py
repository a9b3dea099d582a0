import pytest

from lattes_fsr import fsr, fundom
from lattes_fsr import hexplane as hp
from lattes_fsr.lattes import MultiplierMatrix, degree

M = MultiplierMatrix

# failing checks of the generic construction for the quadratic map, pinned
QUADRATIC_FAILURES = {
    (0, 0): ["c2", "c3", "c5", "c7", "c8", "area", "isotopy"],
    (1, 0): ["c2", "c3", "c5"],
}


class TestHexDomain:
    def test_degree_26_shape(self, hex_domain):
        assert hex_domain.kind == "hex"
        assert len(hex_domain.subtiles) == 26
        assert len(hex_domain.boundary) == 10
        assert sorted(hex_domain.corners) == ["P1", "P2", "Q1", "Q2", "R1", "R2"]
        assert len(hex_domain.marks) == 4

    def test_pairing(self, hex_domain):
        assert [p[:2] for p in hex_domain.pairing] == [(1, 2), (3, 4), (5, 10), (6, 7), (8, 9)]

    def test_all_checks_pass(self, hex_domain):
        report = fundom.verify_domain(hex_domain)
        assert set(report.checks) == set(fundom.HEX_CHECKS)
        assert report.ok and report.failing == []

    def test_one_hexagon_per_orbit(self, hex_domain):
        setup = hex_domain.data["setup"]
        keys = {fundom.gamma_orbit_key(setup, c) for c in hex_domain.subtiles}
        assert len(keys) == 26

    def test_moved_p1_breaks_c2(self, hex_domain):
        lc = hex_domain.data["construction"]
        # the corner where the first path leaves the edge through beta
        outside = lc.l1.corners[lc.l1.mid_index[lc.setup.beta_f]]
        report = fundom.verify_domain(fundom.with_p1(hex_domain, outside))
        assert not report.checks["c2"]

    def test_exceptional(self):
        with pytest.raises(fundom.ExceptionalAlpha):
            fundom.build_hex_domain(M(2, -3, 1, 2), (0, 0))

    @pytest.mark.parametrize("beta", [(0, 0), (1, 0)])
    def test_quadratic_fails(self, beta):
        with pytest.raises(fundom.ValidityCheckFailed) as info:
            fundom.build_hex_domain(M(0, -2, 1, 1), beta)
        assert info.value.report.failing == QUADRATIC_FAILURES[beta]

    def test_rule(self, hex_rule):
        assert list(hex_rule.tile_types) == ["T"]
        assert len(hex_rule.edge_types) == 5
        tile = hex_rule.tile_types["T"]
        assert tile.k == 10 and len(tile.subtiles) == 26
        signs = [o for _, o in tile.boundary]
        assert signs.count(1) == signs.count(-1) == 5


class TestParallelogram:
    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("beta", [(0, 0), (1, 0), (0, 1), (1, 1)])
    def test_counts_and_checks(self, n, beta):
        d = fundom.build_parallelogram_domain(n, beta=beta)
        assert len(d.subtiles) == n * n
        assert fundom.verify_domain(d).ok

    def test_rule_n2(self, parallelogram_rule):
        assert list(parallelogram_rule.tile_types) == ["P"]
        tile = parallelogram_rule.tile_types["P"]
        assert tile.k == 6 and len(tile.subtiles) == 4
        assert len(parallelogram_rule.edge_types) == 3

    def test_n1_rejected(self):
        with pytest.raises(ValueError):
            fundom.build_parallelogram_domain(1)


class TestTemplates:
    @pytest.mark.parametrize("name", fundom.TEMPLATE_NAMES)
    def test_template_builds_a_good_rule(self, name):
        d = fundom.build_from_template(name)
        rule = fundom.extract_rule(d)
        assert fundom.verify_domain(d).ok
        assert fsr.validate_rule(rule) == []
        assert fsr.mesh_approaches_zero(rule).ok
        assert fsr.bounded_valence(rule).bounded
        if d.kind == "hex":
            assert len(d.subtiles) == degree(d.matrix)

    def test_gosper(self):
        d = fundom.build_from_template("gosper_2m312")
        assert tuple(d.matrix) == (2, -3, 1, 2) and len(d.subtiles) == 7
        # a flower: one centre hexagon and its six neighbours
        centre = [c for c in d.subtiles
                  if all(hp.add(c, s) in d.subtiles for s in hp.CENTER_STEPS)]
        assert len(centre) == 1

    def test_case_0m411(self):
        d = fundom.build_from_template("case_0m411")
        assert tuple(d.matrix) == (0, -4, 1, 1) and tuple(d.beta) == (0, 0)
        assert len(d.subtiles) == 4

    def test_quadratic_two_tile(self, quadratic_domain, quadratic_rule):
        assert quadratic_domain.kind == "two_tile"
        assert quadratic_domain.data["identity"] == "1 - alpha = 2/alpha"
        assert sorted(quadratic_rule.tile_types) == ["pentagon", "triangle"]

    def test_unknown(self):
        with pytest.raises(fundom.UnknownTemplate):
            fundom.build_from_template("no_such_template")

    def test_lattes_rule_dispatch(self):
        assert len(fundom.lattes_rule(M(2, -3, 1, 2), (0, 0)).tile_types["T"].subtiles) == 7
        assert len(fundom.lattes_rule(M(3, 0, 0, 3), (0, 0)).tile_types["P"].subtiles) == 9
