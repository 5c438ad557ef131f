"""Word parsing, resolution, and circle tracing."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings

from qannular.diagram import (
    Cap,
    Crossing,
    Cup,
    GradingData,
    TangleWord,
    parse_word,
    resolve,
    rotate_word,
    strand_counts,
    surgery_sites,
    trace_configuration,
    word_to_json,
)
from qannular.errors import BalanceError, RangeError, SchemaError

from .strategies import resolutions, tangle_words


def trace(word, u):
    return trace_configuration(resolve(word, u))


class TestParsing:
    def test_round_trip_frozen(self):
        text = '{"k":2,"r":3,"slices":[{"i":1,"s":1,"t":"x"},{"i":1,"t":"cup"},{"i":1,"t":"cap"}]}'
        w = parse_word(text)
        assert w.k == 2 and w.r == 3
        assert w.slices == (Crossing(1, 1), Cup(1), Cap(1))
        assert word_to_json(w) == text

    def test_dict_input(self):
        w = parse_word({"k": 1, "slices": []})
        assert w == TangleWord(1, (), 0)

    def test_schema_errors(self):
        with pytest.raises(SchemaError):
            parse_word("not json")
        with pytest.raises(SchemaError):
            parse_word('{"slices": []}')
        with pytest.raises(SchemaError):
            parse_word('{"k": 2, "slices": [{"t": "y", "i": 1}]}')
        with pytest.raises(SchemaError):
            parse_word('{"k": 2, "slices": [{"t": "x", "i": 1, "s": 2}]}')

    def test_balance_error(self):
        with pytest.raises(BalanceError):
            TangleWord(0, (Cup(1),))

    def test_range_errors(self):
        with pytest.raises(RangeError):
            TangleWord(2, (Crossing(2, 1),))
        with pytest.raises(RangeError):
            TangleWord(0, (Cap(1),))
        with pytest.raises(RangeError):
            TangleWord(-1, ())

    @given(tangle_words())
    def test_round_trip_random(self, w):
        assert parse_word(word_to_json(w)) == w

    @given(tangle_words())
    def test_serialization_is_canonical_json(self, w):
        doc = json.loads(word_to_json(w))
        assert doc["k"] == w.k and doc["r"] == w.r


class TestResolve:
    def test_positive_smoothings(self):
        w = TangleWord(2, (Crossing(1, 1),))
        r0 = resolve(w, (0,))
        assert r0.slices == ()
        assert r0.anchors[0].kind == "parallel"
        r1 = resolve(w, (1,))
        assert r1.slices == (Cap(1), Cup(1))
        assert r1.anchors[0].kind == "turnback"

    def test_negative_smoothings_swap(self):
        w = TangleWord(2, (Crossing(1, -1),))
        assert resolve(w, (0,)).slices == (Cap(1), Cup(1))
        assert resolve(w, (1,)).slices == ()

    def test_injective_on_u(self):
        # flat slice tuples can coincide ((1,0) and (0,1) both give cap-cup
        # here), but the resolution records always differ
        w = TangleWord(2, (Crossing(1, 1), Crossing(1, 1)))
        seen = set()
        for u in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            res = resolve(w, u)
            seen.add((res.slices, res.u))
        assert len(seen) == 4
        assert resolve(w, (0, 1)).slices == resolve(w, (1, 0)).slices

    @given(resolutions())
    def test_anchor_nodes_exist(self, wu):
        w, u = wu
        res = resolve(w, u)
        counts = strand_counts(res.slices, w.k)
        for a in res.anchors:
            for g, h in (a.end1, a.end2):
                assert 1 <= h <= counts[g]


class TestTrace:
    def test_identity_word(self):
        cfg = trace(TangleWord(2, ()), ())
        assert len(cfg.circles) == 2
        assert all(c.essential and c.winding == 1 for c in cfg.circles)
        assert [c.passes for c in cfg.ordered()] == [((1, 1),), ((2, 1),)]
        assert [a.side for a in cfg.ordered()[0].arcs] == ["T"]

    def test_seam_free_circle(self):
        cfg = trace(TangleWord(0, (Cup(1), Cap(1))), ())
        assert len(cfg.circles) == 1
        c = cfg.circles[0]
        assert not c.essential and c.passes == () and c.winding == 0
        assert [a.side for a in c.arcs] == ["O"]

    def test_two_pass_trivial(self):
        # 1-smoothing of sigma_1 on two strands: cap then cup
        cfg = trace(TangleWord(2, (Crossing(1, 1),)), (1,))
        assert len(cfg.circles) == 1
        c = cfg.circles[0]
        assert not c.essential and c.winding == 0
        assert sorted(s for s, _ in c.passes) == [1, 2]
        assert sorted(d for _, d in c.passes) == [-1, 1]
        assert sorted(a.side for a in c.arcs) == ["L", "R"]
        # canonical traversal: lowest slot crossed in the + direction
        assert dict(c.passes)[1] == 1

    def test_sigma1_squared_vertices(self):
        w = TangleWord(2, (Crossing(1, 1), Crossing(1, 1)))
        cfg00 = trace(w, (0, 0))
        assert len(cfg00.essentials) == 2 and not cfg00.trivials
        cfg11 = trace(w, (1, 1))
        assert not cfg11.essentials and len(cfg11.trivials) == 2
        passes = sorted(len(c.passes) for c in cfg11.trivials)
        assert passes == [0, 2]
        # seam-crossing trivial sorts before the seam-free bubble
        assert len(cfg11.trivials[0].passes) == 2

    def test_left_arc_nodes_on_left_edge(self):
        cfg = trace(TangleWord(2, (Crossing(1, 1),)), (1,))
        (c,) = cfg.circles
        for arc in c.arcs:
            if arc.side == "L":
                assert all(g == 0 for g, _ in arc.nodes)
            if arc.side == "R":
                assert all(g == len(cfg.resolution.slices) for g, _ in arc.nodes)

    @given(resolutions())
    @settings(max_examples=150)
    def test_census_invariants(self, wu):
        w, u = wu
        cfg = trace(w, u)
        # every seam slot used exactly once
        slots = sorted(s for c in cfg.circles for s, _ in c.passes)
        assert slots == list(range(1, w.k + 1))
        for c in cfg.circles:
            assert abs(c.winding) <= 1
            assert c.essential == (c.winding != 0)
        # winding additivity: algebraic seam count, k minus twice the
        # number of negative-direction passes
        neg = sum(1 for c in cfg.circles for _, d in c.passes if d == -1)
        assert sum(c.winding for c in cfg.circles) == w.k - 2 * neg

    @given(resolutions())
    @settings(max_examples=150)
    def test_arc_decomposition(self, wu):
        w, u = wu
        cfg = trace(w, u)
        for c in cfg.circles:
            if not c.passes:
                assert len(c.arcs) == 1 and c.arcs[0].side == "O"
                continue
            assert len(c.arcs) == len(c.passes)
            # arcs partition the nodes
            all_nodes = [n for a in c.arcs for n in a.nodes]
            assert sorted(all_nodes) == sorted(c.nodes)
            assert sum(1 for a in c.arcs if a.side == "L") == sum(1 for a in c.arcs if a.side == "R")
            m = len(cfg.resolution.slices)
            for a in c.arcs:
                if a.side == "L":
                    assert a.nodes[0][0] == 0 and a.nodes[-1][0] == 0
                elif a.side == "R":
                    assert a.nodes[0][0] == m and a.nodes[-1][0] == m

    @given(resolutions())
    @settings(max_examples=100)
    def test_locate(self, wu):
        w, u = wu
        cfg = trace(w, u)
        for c in cfg.circles:
            for n in c.nodes:
                circ, ai, pi = cfg.locate(n)
                assert circ is c
                assert circ.arcs[ai].nodes[pi] == n


class TestSurgerySites:
    def test_sites_only_for_zero_bits(self):
        w = TangleWord(2, (Crossing(1, 1), Crossing(1, 1)))
        assert [s.crossing for s in surgery_sites(w, (0, 0))] == [0, 1]
        assert [s.crossing for s in surgery_sites(w, (1, 0))] == [1]
        assert surgery_sites(w, (1, 1)) == []

    def test_kink_site_on_single_circle(self):
        # negative kink on one closed strand: 0-smoothing is the turnback
        w = TangleWord(1, (Cup(2), Crossing(1, -1), Cap(2)))
        cfg = trace(w, (0,))
        assert len(cfg.circles) == 1
        (site,) = surgery_sites(w, (0,))
        assert cfg.node_circle[site.end1] == cfg.node_circle[site.end2]

    @given(resolutions())
    @settings(max_examples=100)
    def test_site_ends_on_circles(self, wu):
        w, u = wu
        cfg = trace(w, u)
        for s in surgery_sites(w, u):
            assert s.end1 in cfg.node_circle
            assert s.end2 in cfg.node_circle


class TestHelpers:
    def test_strand_counts(self):
        w = TangleWord(1, (Cup(2), Crossing(1, -1), Cap(2)))
        assert strand_counts(w.slices, 1) == [1, 3, 3, 1]

    def test_rotate_word(self):
        w = TangleWord(2, (Crossing(1, 1), Cup(1), Cap(1)))
        r1 = rotate_word(w)
        assert r1.k == 2 and r1.slices == (Cup(1), Cap(1), Crossing(1, 1))
        r2 = rotate_word(w, 2)
        assert r2.k == 4 and r2.slices == (Cap(1), Crossing(1, 1), Cup(1))

    @given(tangle_words())
    def test_rotate_preserves_validity(self, w):
        for s in range(len(w.slices) + 1):
            rotate_word(w, s)  # constructor re-validates

    def test_gradings(self):
        w = TangleWord(2, (Crossing(1, 1), Crossing(1, -1)))
        g = GradingData.of(w)
        assert (g.n_plus, g.n_minus) == (1, 1)
        assert g.h((0, 0)) == -1 and g.h((1, 1)) == 1
        assert g.qshift((0, 0)) == -1 and g.qshift((1, 1)) == 1
