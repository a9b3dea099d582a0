import copy

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattes_fsr import fsr
from lattes_fsr.fsr import CellComplex


def tree(n_vertices, edges, marked):
    labels = [f"m{v}" if v in marked else None for v in range(n_vertices)]
    return CellComplex(labels, [(t, h, "e") for t, h in edges], [])


def valences(c):
    out = [0] * c.V
    for t, h, _ in c.edges:
        out[t] += 1
        out[h] += 1
    return out


class TestValidation:
    def test_hex_rule_valid(self, hex_rule):
        assert fsr.validate_rule(hex_rule) == []

    def test_quadratic_rule_valid(self, quadratic_rule):
        assert fsr.validate_rule(quadratic_rule) == []

    def test_strip_rule_valid(self, strip_rule):
        assert fsr.validate_rule(strip_rule) == []

    def test_mismatched_pair(self, parallelogram_rule):
        broken = copy.deepcopy(parallelogram_rule)
        tile = broken.tile_types["P"]
        first = tile.edge_vertices[0]
        tile.edge_vertices[0] = [first[0], tile.vertex_count, *first[1:]]
        tile.vertex_count += 1
        problems = fsr.validate_rule(broken)
        assert problems == ["paired edges (P:0, P:1) of type A subdivide differently"]

    def test_unpaired_type(self, parallelogram_rule):
        broken = copy.deepcopy(parallelogram_rule)
        tile = broken.tile_types["P"]
        tile.boundary[1] = ("A", 1)
        assert any("orientations" in p for p in fsr.validate_rule(broken))

    def test_json_round_trip(self, hex_rule, quadratic_rule):
        for r in (hex_rule, quadratic_rule):
            assert fsr.SubdivisionRule.from_json(r.to_json()) == r

    def test_bad_schema(self, hex_rule):
        obj = hex_rule.to_json_obj()
        obj["schema_version"] = 99
        with pytest.raises(fsr.RuleError):
            fsr.SubdivisionRule.from_json_obj(obj)


class TestSubdivide:
    def test_gosper_level_two(self, gosper_rule):
        c = fsr.subdivide(fsr.sphere_complex(gosper_rule), gosper_rule, 2)
        assert c.F == 49
        assert c.is_sphere()

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_parallelogram_levels(self, parallelogram_rule, n):
        c = fsr.subdivide(fsr.sphere_complex(parallelogram_rule), parallelogram_rule, n)
        assert c.F == 4 ** n
        assert c.euler() == 2

    def test_level_zero_unchanged(self, hex_rule):
        base = fsr.sphere_complex(hex_rule)
        assert fsr.subdivide(base, hex_rule, 0).to_json() == base.to_json()

    def test_hex_level_one(self, hex_rule):
        c = fsr.subdivide(fsr.sphere_complex(hex_rule), hex_rule, 1)
        assert c.F == 26 and c.is_sphere()
        # labelled vertices are preimages of the four marked points: 4*26 minus
        # the 2*26 - 2 critical points, each of which absorbs one preimage
        assert len(c.marked()) == 4 * 26 - (2 * 26 - 2)

    def test_complex_json_round_trip(self, gosper_rule):
        c = fsr.subdivide(fsr.sphere_complex(gosper_rule), gosper_rule, 1)
        assert CellComplex.from_json(c.to_json()).to_json() == c.to_json()


class TestMesh:
    def test_condition1_parallelogram(self, parallelogram_rule):
        res = fsr.condition1(parallelogram_rule)
        assert res.ok and res.level == 1
        assert parallelogram_rule.edge_types["A"] == [("A", 1), ("A", -1)]

    def test_condition1_gosper(self, gosper_rule):
        res = fsr.condition1(gosper_rule)
        assert res.ok and res.level <= 3

    def test_condition1_fails_on_fixed_edge(self, strip_rule):
        res = fsr.condition1(strip_rule)
        assert not res.ok and res.lengths["A"] == 1

    def test_decagon_pair_graph_size(self, hex_rule):
        res = fsr.condition2_acyclic(hex_rule)
        assert len(res.graph.vertices) == 70
        assert res.acyclic and res.witness is None

    def test_strip_self_loop(self, strip_rule):
        res = fsr.condition2_acyclic(strip_rule)
        assert not res.acyclic
        assert ("P", 2, 5) in res.graph.arcs[("P", 2, 5)]
        assert res.witness[0] == res.witness[-1]

    def test_verdicts(self, hex_rule, strip_rule, quadratic_rule):
        assert fsr.mesh_approaches_zero(hex_rule).ok
        assert fsr.mesh_approaches_zero(quadratic_rule).ok
        bad = fsr.mesh_approaches_zero(strip_rule)
        assert not bad.ok and bad.condition2.witness

    def test_find_cycle(self):
        assert fsr.find_cycle({1: [2], 2: [3], 3: []}) is None
        assert fsr.find_cycle({1: [2], 2: [3], 3: [1]}) == [1, 2, 3, 1]


class TestValence:
    def test_hex(self, hex_rule):
        assert fsr.bounded_valence(hex_rule) == (True, 3)

    def test_parallelogram(self, parallelogram_rule):
        assert fsr.bounded_valence(parallelogram_rule) == (True, 4)

    def test_quadratic(self, quadratic_rule):
        res = fsr.bounded_valence(quadratic_rule)
        assert res.bounded and res.bound <= 6


class TestPrune:
    def test_already_pruned(self):
        path = tree(4, [(0, 1), (1, 2), (2, 3)], {0, 1, 2, 3})
        assert fsr.prune(path, {0, 1, 2, 3}).edges == path.edges

    def test_dangling_leaf(self):
        t = tree(5, [(0, 1), (1, 2), (2, 3), (1, 4)], {0, 1, 2, 3})
        out = fsr.prune(t, {0, 1, 2, 3})
        assert out.V == 4 and out.E == 3

    def test_smoothing(self):
        t = tree(5, [(0, 1), (1, 2), (2, 3), (3, 4)], {0, 1, 3, 4})
        out = fsr.prune(t, {0, 1, 3, 4})
        assert out.V == 4 and out.E == 3

    def test_not_a_tree(self):
        cyc = tree(3, [(0, 1), (1, 2), (2, 0)], {0})
        with pytest.raises(fsr.NotATree):
            fsr.prune(cyc, {0})

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_random_trees(self, data):
        n = data.draw(st.integers(2, 30))
        parents = [data.draw(st.integers(0, v - 1)) for v in range(1, n)]
        edges = [(p, v) for v, p in zip(range(1, n), parents)]
        marked = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
        once = fsr.prune(tree(n, edges, marked), marked)
        again = fsr.prune(once, once.marked())
        assert again.to_json() == once.to_json()
        assert len(once.marked()) == len(marked)
        for v, k in enumerate(valences(once)):
            if k <= 2 and once.V > 1:
                assert v in once.marked()


class TestClassify:
    def test_path(self):
        assert fsr.classify_tree(tree(4, [(0, 1), (1, 2), (2, 3)], {0, 1, 2, 3})) == 1

    def test_marked_centre(self):
        assert fsr.classify_tree(tree(4, [(0, 1), (0, 2), (0, 3)], {0, 1, 2, 3})) == 2

    def test_four_star(self):
        assert fsr.classify_tree(tree(5, [(0, 1), (0, 2), (0, 3), (0, 4)], {1, 2, 3, 4})) == 3

    def test_three_star_with_marked_arm(self):
        t = tree(5, [(0, 1), (1, 2), (0, 3), (0, 4)], {1, 2, 3, 4})
        assert fsr.classify_tree(t) == 4

    def test_h_tree(self):
        t = tree(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)], {2, 3, 4, 5})
        assert fsr.classify_tree(t) == 5

    def test_quotient_skeletons(self, hex_rule, parallelogram_rule):
        for rule, want in ((hex_rule, 5), (parallelogram_rule, 1)):
            q = fsr.quotient_skeleton(rule)
            assert fsr.classify_tree(fsr.prune(q, q.marked())) == want

    def test_quadratic_skeleton_shape(self, quadratic_rule):
        shape = fsr.skeleton_shape(fsr.sphere_complex(quadratic_rule))
        assert not shape.is_tree and not shape.is_circle
        assert shape.cycle and shape.dangling
