import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from bicausal.alignment import (MAX_WIDTH, AlignedDataset, UndefinedConditional, align, align_counter,
                                cond_prob, decode, encode)
from bicausal.dataset import BinaryDataset
from bicausal.simulate import benchmark_model, sample

small = st.tuples(st.integers(1, 200), st.integers(1, 8)).flatmap(
    lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


class TestEncode:
    def test_examples(self):
        assert encode((0, 0, 0)) == 0
        assert encode((1, 0, 1)) == 5
        assert encode([1] * 7) == 2**7 - 1

    def test_last_column_is_least_significant(self):
        assert encode((0, 0, 1)) == 1
        assert encode((1, 0, 0)) == 4

    @pytest.mark.parametrize("d", range(1, 17))
    def test_bijection_exhaustive(self, d):
        if d > 12:
            rows = [tuple(np.random.default_rng(d).integers(0, 2, d)) for _ in range(2000)]
            rows += [(0,) * d, (1,) * d]
        else:
            rows = list(itertools.product((0, 1), repeat=d))
            assert sorted(encode(r) for r in rows) == list(range(2**d))
        for r in rows:
            assert decode(encode(r), d) == tuple(r)

    def test_width_limit(self):
        assert encode([1] * MAX_WIDTH) == 2**MAX_WIDTH - 1
        with pytest.raises(ValueError):
            encode([0] * (MAX_WIDTH + 1))

    def test_non_binary(self):
        with pytest.raises(ValueError):
            encode((0, 2))


class TestAlign:
    def test_buckets(self, four_rows):
        assert align(four_rows).buckets == {3: 2, 2: 1, 0: 1}

    def test_identical_rows(self):
        ad = align(np.ones((9, 4), dtype=np.uint8))
        assert ad.buckets == {15: 9}

    def test_benchmark_mass(self):
        ad = align(sample(benchmark_model(0.3), 500, 0))
        assert ad.n == 500 and ad.d == 10

    def test_counter_agrees(self, four_rows):
        assert align_counter(four_rows.tolist()).buckets == align(four_rows).buckets

    def test_accepts_dataset(self, four_rows):
        assert align(BinaryDataset(four_rows)).buckets == align(four_rows).buckets

    def test_rejects_bad_buckets(self):
        with pytest.raises(ValueError):
            AlignedDataset(2, [1, 2], [0, 3])
        with pytest.raises(ValueError):
            AlignedDataset(2, [1, 1], [1, 3])

    def test_with_counts_drops_empty(self, four_rows):
        ad = align(four_rows)
        assert ad.with_counts([0, 1, 5]).buckets == {2: 1, 3: 5}

    @given(small)
    def test_invariants(self, values):
        ad = align(values)
        assert ad.n == len(values)
        assert all(c > 0 for c in ad.counts)
        got = sorted(map(tuple, ad.to_rows().tolist()))
        assert got == sorted(map(tuple, values.tolist()))

    @given(small, st.randoms())
    def test_row_order_invariant(self, values, rnd):
        perm = list(range(len(values)))
        rnd.shuffle(perm)
        assert align(values[perm]).buckets == align(values).buckets


class TestCondProb:
    def test_examples(self, four_rows):
        ad = align(four_rows)
        assert cond_prob(ad, {1: 1}, {0: 1}) == 2 / 3
        assert cond_prob(ad, {0: 1}) == 3 / 4

    def test_undefined(self):
        with pytest.raises(UndefinedConditional):
            cond_prob(align(np.array([[0, 0], [0, 1]], dtype=np.uint8)), {1: 1}, {0: 1})

    @pytest.mark.parametrize("y,z", [({}, {0: 1}), ({0: 1}, {0: 0}), ({5: 1}, None), ({0: 2}, None)])
    def test_preconditions(self, four_rows, y, z):
        with pytest.raises((ValueError, IndexError)):
            cond_prob(align(four_rows), y, z)

    def test_pairs_iterable(self, four_rows):
        assert cond_prob(align(four_rows), [(1, 1)], [(0, 1)]) == 2 / 3

    @given(small, st.data())
    def test_matches_row_scan_exactly(self, values, data):
        d = values.shape[1]
        idx = data.draw(st.permutations(range(d)))
        ny = data.draw(st.integers(1, d))
        nz = data.draw(st.integers(0, d - ny))
        y = {k: data.draw(st.integers(0, 1)) for k in idx[:ny]}
        z = {k: data.draw(st.integers(0, 1)) for k in idx[ny:ny + nz]}
        expected = oracles.prob(values.tolist(), list(y.items()), list(z.items()))
        ad = align(values)
        if expected is None:
            with pytest.raises(UndefinedConditional):
                cond_prob(ad, y, z)
        else:
            assert cond_prob(ad, y, z) == float(expected)

    @given(small, st.data())
    def test_complement_sums_to_one(self, values, data):
        d = values.shape[1]
        if d < 2:
            return
        i, k = data.draw(st.permutations(range(d)))[:2]
        z = {k: int(values[0, k])}
        ad = align(values)
        assert cond_prob(ad, {i: 1}, z) + cond_prob(ad, {i: 0}, z) == 1
