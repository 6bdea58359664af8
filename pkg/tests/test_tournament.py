"""Tournament selectors, greedy dominating sets, and the block variant."""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from compresslab import (
    DominatingSet,
    SelectorUndefinedError,
    ToyLanguage,
    block_selector,
    block_tournament,
    greedy_dominating_set,
    ideal_or_compression,
    noisy_or_compression,
    random_tournament,
    selector_from_compression,
    statistical_distance,
    verify_domination,
)
from compresslab.tournament import (
    DominatingSearchError,
    block_conditioned_distributions,
    partition_blocks,
)

F = Fraction


def _single_yes(n):
    return ToyLanguage(n, {"1" * n})


# -- selectors -----------------------------------------------------------------


def test_selector_all_no_edge_picks_minimum():
    lang = _single_yes(3)
    a = ideal_or_compression(lang, 3)
    s = selector_from_compression(a, lang.no_instances(), 3, delta=0.5)
    assert s.select(("010", "000", "001")) == "000"


def test_selector_skips_planted_yes_instance():
    lang = _single_yes(3)
    a = ideal_or_compression(lang, 3)
    s = selector_from_compression(a, lang.no_instances(), 3, delta=0.5)
    # an edge with exactly one yes-instance: its removal/insertion laws are
    # at distance one, so it can never be selected
    for edge in [("111", "000", "001"), ("010", "111", "011")]:
        rest = tuple(w for w in edge if w != "111")
        left = a.subset_output_distribution(rest)
        right = a.subset_output_distribution(rest, forced=("111",))
        assert statistical_distance(left, right) == 1
        assert s.select(edge) != "111"


def test_selector_singleton_edge():
    lang = _single_yes(2)
    a = ideal_or_compression(lang, 1)
    s = selector_from_compression(a, lang.no_instances(), 1, delta=0.5)
    assert s.select(("01",)) == "01"


def test_selector_undefined():
    lang = ToyLanguage(2, {"10", "11"})
    a = ideal_or_compression(lang, 2)
    s = selector_from_compression(a, ("00", "01"), 2, delta=0.3)
    with pytest.raises(SelectorUndefinedError):
        s.select(("10", "11"))  # two yes-instances, both sensitive


def test_selector_edge_size_validation():
    s = random_tournament(8, 3, seed=0)
    with pytest.raises(ValueError, match="expected 3"):
        s.select(("000", "001"))


def test_selection_is_order_invariant():
    s = random_tournament(10, 3, seed=4)
    v = s.select(("0001", "0100", "0011"))
    assert v == s.select(("0100", "0011", "0001"))


# -- greedy dominating sets ------------------------------------------------------


def test_greedy_single_vertex():
    s = random_tournament(1, 2, seed=0)
    dom = greedy_dominating_set(s)
    assert dom.elements == (("0",),)
    assert dom.size <= 2 * math.log2(2)


def test_greedy_ordinary_tournaments():
    for seed in range(10):
        s = random_tournament(8, 2, seed=seed)
        dom = greedy_dominating_set(s)
        assert dom.size <= 2 * math.log2(8)
        ok, undominated = verify_domination(s, dom)
        assert ok, undominated
        # brute-force domination check, independent of the helper
        for v in s.vertices:
            assert any(v in g or (len(g) == 1 and s.select(g + (v,)) == v) for g in dom.elements)


def test_greedy_trace_and_size_bounds():
    rng = np.random.default_rng(41)
    for _ in range(15):
        t = int(rng.integers(2, 5))
        n_v = int(rng.integers(max(t, 4), 33))
        s = random_tournament(n_v, t, seed=int(rng.integers(0, 2**31)))
        dom = greedy_dominating_set(s)
        assert dom.trace[0] == n_v
        for k, undominated in enumerate(dom.trace):
            assert undominated <= (1 - 1 / t) ** k * n_v + 1e-9
        assert dom.size <= t * math.log2(max(n_v, 2)) + 1e-9
        assert verify_domination(s, dom)[0]


def test_greedy_ideal_or_tournament():
    lang = _single_yes(3)
    a = ideal_or_compression(lang, 3)
    s = selector_from_compression(a, lang.no_instances(), 3, delta=0.5)
    dom = greedy_dominating_set(s)
    # the minimum-selection rule lets the lexicographically largest pair
    # dominate every vertex at once
    assert dom.size == 1
    assert verify_domination(s, dom)[0]


def test_greedy_sampled_search_path():
    for seed in range(5):
        s = random_tournament(20, 3, seed=seed)
        dom = greedy_dominating_set(s, exhaustive_limit=0, seed=7)
        assert verify_domination(s, dom)[0]
        again = greedy_dominating_set(s, exhaustive_limit=0, seed=7)
        assert dom == again  # deterministic in the sampling seed


def test_greedy_sampled_search_exhausts_its_cap():
    s = random_tournament(12, 3, seed=1)
    with pytest.raises(DominatingSearchError, match="fraction"):
        greedy_dominating_set(s, exhaustive_limit=0, sample_cap_factor=0)


def _dominated_by(s, g, v):
    if v in g:
        return True
    if len(g) != s.edge_size - 1:
        return False
    return s.select(g + (v,)) == v


def test_verify_domination_reports_missing():
    s = random_tournament(8, 2, seed=3)
    dom = greedy_dominating_set(s)
    empty = DominatingSet(2, dom.vertex_bits, (), (len(s.vertices),))
    ok, undominated = verify_domination(s, empty)
    assert not ok and set(undominated) == set(s.vertices)
    # drop one member: whatever only it dominated must resurface
    assert dom.size > 1
    clipped = DominatingSet(2, dom.vertex_bits, dom.elements[:-1], dom.trace)
    expected = [
        v for v in s.vertices if not any(_dominated_by(s, g, v) for g in clipped.elements)
    ]
    ok, undominated = verify_domination(s, clipped)
    assert undominated == expected
    assert ok == (not expected)
    assert not ok  # the greedy set has no redundant members


def test_dominating_set_json_round_trip():
    s = random_tournament(12, 3, seed=9)
    dom = greedy_dominating_set(s)
    obj = dom.to_json()
    assert set(obj) == {"t", "n", "elements", "trace"}
    assert DominatingSet.from_json(obj) == dom


# -- block variant ----------------------------------------------------------------


def test_partition_blocks():
    blocks = partition_blocks(("11", "00", "01", "10"), 2)
    assert blocks == (("00", "01"), ("10", "11"))
    with pytest.raises(ValueError, match="split"):
        partition_blocks(("00", "01", "10"), 2)


def test_block_distributions_micro():
    lang = _single_yes(3)
    a = ideal_or_compression(lang, 2)
    blocks = (("000", "001"), ("010", "011"))
    left, right = block_conditioned_distributions(a, blocks, "001")
    # oracle: enumerate the block choices by hand; everything is a no-set
    assert left.as_dict() == {"0": 1}
    assert right.as_dict() == {"0": 1}
    # plant the yes-instance in a block
    blocks_yes = (("000", "111"), ("010", "011"))
    left, right = block_conditioned_distributions(a, blocks_yes, "111")
    assert left.as_dict() == {"0": 1}
    assert right.as_dict() == {"1": 1}
    assert statistical_distance(left, right) == 1


def test_block_selector_examples():
    lang = _single_yes(3)
    a = ideal_or_compression(lang, 2)
    all_no = (("000", "001"), ("010", "011"))
    assert block_selector(a, all_no, delta=0.5) == "000"
    with_yes = (("000", "111"), ("010", "011"))
    assert block_selector(a, with_yes, delta=0.5) != "111"
    # degenerate: one block, two no-instances, arity-one compression
    a1 = ideal_or_compression(lang, 1)
    assert block_selector(a1, (("000", "001"),), delta=0.5) == "000"


def test_block_selector_disjointness_validation():
    lang = _single_yes(3)
    a = ideal_or_compression(lang, 2)
    with pytest.raises(ValueError, match="disjoint"):
        block_selector(a, (("000", "001"), ("001", "010")), delta=0.5)


def test_block_tournament_dominates():
    lang = _single_yes(3)
    a = ideal_or_compression(lang, 2)
    s = block_tournament(a, lang.no_instances(), 2, 2, delta=0.5)
    assert s.edge_size == 4
    dom = greedy_dominating_set(s)
    assert verify_domination(s, dom)[0]


def test_noisy_selector_distances_are_zero_on_no_edges():
    lang = ToyLanguage(4, {"1111"})
    a = noisy_or_compression(lang, 3, e_s=F(1, 8), e_c=F(1, 8), coin_bits=3)
    s = selector_from_compression(a, lang.no_instances(), 3, delta=0.3)
    for e in combinations(lang.no_instances()[:6], 3):
        assert s.select(e) == min(e)
