import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from bicausal.dataset import (BinaryDataset, CellDomainError, DatasetError, load_csv, mpi_index,
                              save_csv, validate)
from bicausal.simulate import benchmark_model, sample

binary_matrix = st.tuples(st.integers(1, 30), st.integers(2, 6)).flatmap(
    lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestBinaryDataset:
    def test_default_names(self):
        ds = BinaryDataset([[0, 1], [1, 1]])
        assert ds.column_names == ["X1", "X2"]
        assert (ds.n, ds.d) == (2, 2)

    def test_values_are_read_only(self):
        ds = BinaryDataset([[0, 1], [1, 1]])
        with pytest.raises(ValueError):
            ds.values[0, 0] = 1

    @pytest.mark.parametrize("values", [np.zeros((0, 3)), np.zeros((3, 1)), np.zeros(4)])
    def test_shape_invariants(self, values):
        with pytest.raises(DatasetError):
            BinaryDataset(values)

    def test_cell_domain_reports_coordinates(self):
        with pytest.raises(CellDomainError) as e:
            BinaryDataset([[0, 1], [1, 2]])
        assert (e.value.row, e.value.column) == (1, 1)

    @pytest.mark.parametrize("names", [["a", "a"], ["a", ""]])
    def test_bad_names(self, names):
        with pytest.raises(DatasetError):
            BinaryDataset([[0, 1]], names)

    def test_column_lookup_and_selection(self):
        ds = BinaryDataset([[0, 1, 1], [1, 1, 0]], ["a", "b", "c"])
        assert ds.column_index("c") == 2
        sub = ds.select_columns([2, 0])
        assert sub.column_names == ["c", "a"]
        assert sub.values.tolist() == [[1, 0], [0, 1]]


class TestLoadCsv:
    def test_header_and_rows(self, tmp_path):
        ds = load_csv(write(tmp_path, "a,b\n1,1\n0,1\n"))
        assert (ds.n, ds.d) == (2, 2)
        assert ds.column_names == ["a", "b"]
        assert ds.values.tolist() == [[1, 1], [0, 1]]

    def test_true_false_cells(self, tmp_path):
        ds = load_csv(write(tmp_path, "a,b\nTrue,false\n0,TRUE\n"))
        assert ds.values.tolist() == [[1, 0], [0, 1]]

    def test_no_header(self, tmp_path):
        ds = load_csv(write(tmp_path, "1,0,1\n0,0,1\n"), has_header=False)
        assert ds.column_names == ["X1", "X2", "X3"]
        assert ds.n == 2

    def test_cell_two_reports_position(self, tmp_path):
        with pytest.raises(CellDomainError) as e:
            load_csv(write(tmp_path, "a,b\n1,0\n0,2\n"))
        assert (e.value.row, e.value.column) == (1, 1)

    def test_ragged_row(self, tmp_path):
        with pytest.raises(DatasetError, match="line 3"):
            load_csv(write(tmp_path, "a,b\n1,0\n0\n"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(DatasetError, match="empty"):
            load_csv(write(tmp_path, ""))

    def test_missing_file_names_path(self, tmp_path):
        path = tmp_path / "nope.csv"
        with pytest.raises(DatasetError, match="nope.csv"):
            load_csv(path)

    def test_simulated_dataset_round_trips(self, tmp_path):
        ds = sample(benchmark_model(0.3), 500, 3)
        save_csv(ds, tmp_path / "x.csv")
        assert load_csv(tmp_path / "x.csv") == ds
        assert b"\r" not in (tmp_path / "x.csv").read_bytes()

    @given(binary_matrix)
    def test_round_trip_property(self, tmp_path_factory, values):
        path = tmp_path_factory.mktemp("rt") / "x.csv"
        ds = BinaryDataset(values)
        save_csv(ds, path)
        assert load_csv(path) == ds


class TestValidate:
    def test_constant_zero_column(self):
        rep = validate(BinaryDataset([[0, 1], [0, 0], [0, 1]]))
        assert rep.constant_columns == [0]
        assert not rep.ok

    def test_constant_zero_and_one(self):
        rep = validate(BinaryDataset([[0, 1, 1], [0, 0, 1], [0, 1, 1]]))
        assert rep.constant_columns == [0, 2]

    def test_benchmark_sample_is_clean(self):
        assert validate(sample(benchmark_model(0.3), 500, 11)).ok

    def test_raw_input_problems(self):
        rep = validate((np.array([[0, 3], [1, 0]]), ["a", "a"]))
        assert rep.cell_domain_errors == [(0, 1)]
        assert rep.duplicate_name_errors

    @given(binary_matrix)
    def test_empty_report_iff_no_constant_column(self, values):
        rep = validate(BinaryDataset(values))
        has_constant = any(len(set(values[:, k])) == 1 for k in range(values.shape[1]))
        assert rep.ok == (not has_constant)


class TestMpi:
    def test_all_zero(self):
        r = mpi_index(BinaryDataset(np.zeros((5, 4))), 0.3)
        assert (r.m0, r.q0, r.a0) == (0, 0, 0)

    def test_all_one(self):
        r = mpi_index(BinaryDataset(np.ones((5, 4))), 0.5)
        assert (r.m0, r.q0, r.a0) == (1, 1, 1)

    def test_four_row_hand_count(self):
        rows = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]]
        r = mpi_index(BinaryDataset(rows), 0.5)
        assert (r.q0, r.a0, r.m0) == (0.5, 0.875, 0.4375)
        assert r.per_row_deprivation.tolist() == [0.25, 0.5, 0.75, 1.0]

    def test_cutoff_is_strict(self):
        r = mpi_index(BinaryDataset([[1, 0], [1, 1]]), 0.5)
        assert r.q0 == 0.5

    @pytest.mark.parametrize("t", [0, 1, -0.1, 1.5])
    def test_threshold_domain(self, t):
        with pytest.raises(ValueError):
            mpi_index(BinaryDataset([[1, 0]]), t)

    @given(binary_matrix, st.sampled_from([0.1, 0.25, 0.5, 0.75, 0.9]), st.randoms())
    def test_properties(self, values, t, rnd):
        r = mpi_index(BinaryDataset(values), t)
        assert r.m0 == r.q0 * r.a0
        assert 0 <= r.m0 <= r.q0 <= 1
        if r.q0 > 0:
            assert r.m0 <= r.a0
        m0, q0, a0 = oracles.mpi(values.tolist(), t)
        assert r.q0 == float(q0)
        assert r.a0 == pytest.approx(float(a0), abs=1e-15)
        rows = list(range(values.shape[0]))
        cols = list(range(values.shape[1]))
        rnd.shuffle(rows)
        rnd.shuffle(cols)
        r2 = mpi_index(BinaryDataset(values[rows][:, cols]), t)
        assert (r2.q0, r2.a0) == pytest.approx((r.q0, r.a0), abs=1e-15)
