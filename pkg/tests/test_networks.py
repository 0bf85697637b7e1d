import json
import xml.etree.ElementTree as ET
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from rsnlab.errors import DomainError, InvariantError, ResourceError
from rsnlab.networks import (
    PeriodicExtension,
    SortingNetwork,
    edelman_greene,
    enumerate_networks,
    is_sorting_network,
    periodic_lookup,
    sample_network,
    shift,
    stanley_count,
    wire_positions,
    wiring_svg,
)
from rsnlab.tableaux import StandardTableau, count_syt, enumerate_syt, make_staircase, sample_syt

FIG_NET = (2, 1, 3, 2, 4, 3, 4, 1, 2, 1)
SVG_NS = "{http://www.w3.org/2000/svg}"


class TestValidation:
    @pytest.mark.parametrize("swaps,ok", [((1, 2, 1), True), ((2, 1, 2), True), ((1, 1, 2), False), ((1, 2), False)])
    def test_examples(self, swaps, ok):
        assert is_sorting_network(3, swaps) is ok

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            is_sorting_network(3, (1, 3, 1))

    def test_constructor_rejects_invalid(self):
        with pytest.raises(InvariantError):
            SortingNetwork(3, (1, 1, 2))

    def test_figure_network_valid(self):
        assert is_sorting_network(5, FIG_NET)

    def test_json(self):
        net = SortingNetwork(3, (1, 2, 1))
        assert json.loads(net.to_json()) == {"n": 3, "swaps": [1, 2, 1]}
        assert SortingNetwork.from_json(net.to_json()) == net


class TestCounting:
    @pytest.mark.parametrize("n,count", [(2, 1), (3, 2), (4, 16), (5, 768)])
    def test_stanley(self, n, count):
        assert stanley_count(n) == count

    @pytest.mark.parametrize("n", range(2, 9))
    def test_stanley_equals_staircase_count(self, n):
        assert stanley_count(n) == count_syt(make_staircase(n))

    def test_enumerate_three(self):
        assert {x.swaps for x in enumerate_networks(3)} == {(1, 2, 1), (2, 1, 2)}

    @pytest.mark.parametrize("n", [4, 5])
    def test_enumerate_counts(self, n):
        nets = enumerate_networks(n)
        assert len(nets) == len(set(nets)) == stanley_count(n)
        assert all(is_sorting_network(n, x.swaps) for x in nets)

    def test_enumerate_cap(self):
        with pytest.raises(ResourceError):
            enumerate_networks(6)


class TestEdelmanGreene:
    def test_hand_traces(self):
        s = make_staircase(3)
        assert edelman_greene(StandardTableau(s, [[1, 2], [3]])).swaps == (1, 2, 1)
        assert edelman_greene(StandardTableau(s, [[1, 3], [2]])).swaps == (2, 1, 2)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_bijection(self, n):
        images = [edelman_greene(T) for T in enumerate_syt(make_staircase(n))]
        assert len(set(images)) == len(images)
        assert set(images) == set(enumerate_networks(n))

    def test_non_staircase(self):
        with pytest.raises(DomainError):
            edelman_greene(StandardTableau.from_array(make_staircase(4).remove((3, 1)), np.array([[1, 2, 4], [3, 5, 0]])))

    @given(st.integers(2, 30), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_images_are_networks(self, n, seed):
        net = edelman_greene(sample_syt(make_staircase(n), seed))
        assert is_sorting_network(n, net.swaps)


class TestSampling:
    def test_uniform_over_sixteen(self):
        rng = np.random.default_rng(0)
        c = Counter(sample_network(4, rng) for _ in range(16000))
        assert len(c) == 16
        assert all(abs(v / 16000 - 1 / 16) < 0.01 for v in c.values())

    def test_three_half(self):
        rng = np.random.default_rng(1)
        hits = sum(sample_network(3, rng).swaps == (1, 2, 1) for _ in range(10000))
        assert abs(hits / 10000 - 0.5) < 0.02

    def test_seed(self):
        assert sample_network(12, 9) == sample_network(12, 9)

    def test_matches_tableau_route(self):
        assert sample_network(9, 3) == edelman_greene(sample_syt(make_staircase(9), 3))


class TestPeriodic:
    def test_examples(self):
        net = SortingNetwork(3, (1, 2, 1))
        assert periodic_lookup(net, 4) == 2
        assert periodic_lookup(net, 0) == 3 - net.swaps[-1]
        ext = PeriodicExtension(net)
        assert ext.window(1, 7) == [1, 2, 1, 2, 1, 2]

    @given(st.integers(-500, 500))
    @settings(max_examples=50, deadline=None)
    def test_reflection_and_period(self, t):
        net = SortingNetwork(5, FIG_NET)
        N = len(FIG_NET)
        assert periodic_lookup(net, t + N) == 5 - periodic_lookup(net, t)
        assert periodic_lookup(net, t + 2 * N) == periodic_lookup(net, t)

    def test_shift(self):
        assert shift(SortingNetwork(3, (1, 2, 1))).swaps == (2, 1, 2)

    @pytest.mark.parametrize("n", [3, 4])
    def test_shift_period(self, n):
        for net in enumerate_networks(n):
            cur = net
            for _ in range(2 * len(net.swaps)):
                cur = shift(cur)
            assert cur == net

    def test_shift_preserves_uniform(self):
        rng = np.random.default_rng(5)
        nets = enumerate_networks(4)
        idx = {x: i for i, x in enumerate(nets)}
        counts = np.zeros(16)
        for _ in range(16000):
            counts[idx[shift(sample_network(4, rng))]] += 1
        assert stats.chisquare(counts).pvalue > 1e-3


class TestWiring:
    def _parse(self, svg):
        return ET.fromstring(svg.split("\n", 1)[1])

    def test_figure_network(self):
        net = SortingNetwork(5, FIG_NET)
        root = self._parse(wiring_svg(net))
        wires = root.findall(f"{SVG_NS}polyline")
        swaps = root.findall(f"{SVG_NS}circle")
        assert len(wires) == 5
        assert len(swaps) == 10
        assert any(c.get("data-t") == "3" and c.get("data-k") == "3" for c in swaps)

    def test_two_wires(self):
        root = self._parse(wiring_svg(SortingNetwork(2, (1,))))
        assert len(root.findall(f"{SVG_NS}circle")) == 1
        assert len(root.findall(f"{SVG_NS}polyline")) == 2

    def test_deterministic(self):
        net = sample_network(6, 2)
        assert wiring_svg(net) == wiring_svg(net)

    def test_wires_end_reversed(self):
        pos = wire_positions(SortingNetwork(5, FIG_NET))
        assert list(pos[-1]) == [4, 3, 2, 1, 0]
