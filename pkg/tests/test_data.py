import numpy as np
import pytest

from localcausal import Dataset, DatasetError, contingency, load_csv, save_csv

from oracles import contingency_brute


def small_dataset():
    cols = np.array(
        [
            [0, 1, 0, 1, 1, 0],
            [1, 1, 0, 0, 1, 0],
            [0, 2, 1, 2, 0, 1],
        ],
        dtype=np.int32,
    )
    return Dataset(("a", "b", "c"), (2, 2, 3), cols)


def test_dataset_basic_properties():
    data = small_dataset()
    assert data.n_vars == 3
    assert data.n_rows == 6
    assert data.index_of("c") == 2
    assert list(data.column(1)) == [1, 1, 0, 0, 1, 0]
    with pytest.raises(DatasetError):
        data.index_of("nope")


def test_dataset_rejects_duplicate_names():
    cols = np.zeros((2, 3), dtype=np.int32)
    with pytest.raises(DatasetError, match="duplicate"):
        Dataset(("a", "a"), (2, 2), cols)


def test_dataset_rejects_small_cardinality():
    cols = np.zeros((1, 3), dtype=np.int32)
    with pytest.raises(DatasetError, match="at least 2"):
        Dataset(("a",), (1,), cols)


def test_dataset_rejects_out_of_range_codes():
    cols = np.array([[0, 3]], dtype=np.int32)
    with pytest.raises(DatasetError, match="outside range"):
        Dataset(("a",), (2,), cols)


def test_dataset_rejects_mismatched_cardinalities():
    cols = np.zeros((2, 3), dtype=np.int32)
    with pytest.raises(DatasetError, match="match variable count"):
        Dataset(("a", "b"), (2,), cols)


def test_load_csv_with_sidecar(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,y\n0,1\n1,0\n0,0\n")
    (tmp_path / "d.card").write_text("3\n2\n")
    data = load_csv(csv)
    assert data.names == ("x", "y")
    assert data.cardinalities == (3, 2)
    assert data.columns.tolist() == [[0, 1, 0], [1, 0, 0]]


def test_load_csv_infers_cardinalities(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,y\n0,2\n1,0\n")
    data = load_csv(csv)
    assert data.cardinalities == (2, 3)


def test_load_csv_inference_floors_at_two(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,y\n0,1\n0,0\n")
    data = load_csv(csv)
    assert data.cardinalities == (2, 2)


def test_load_csv_explicit_cardinalities_override(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x\n0\n1\n")
    (tmp_path / "d.card").write_text("2\n")
    data = load_csv(csv, cardinalities=(4,))
    assert data.cardinalities == (4,)


def test_load_csv_skips_blank_lines(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,y\n0,1\n\n1,0\n\n")
    data = load_csv(csv)
    assert data.n_rows == 2


def test_load_csv_reports_bad_row_width(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,y\n0,1\n0\n")
    with pytest.raises(DatasetError, match="row 2 has 1 cells, expected 2"):
        load_csv(csv)


def test_load_csv_reports_bad_cell(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,y\n0,1\n0,-1\n")
    with pytest.raises(DatasetError, match="row 2.*'y'.*'-1'"):
        load_csv(csv)


def test_load_csv_rejects_non_ascii_digits(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x\n١\n")
    with pytest.raises(DatasetError, match="not a nonnegative base-10"):
        load_csv(csv)


def test_load_csv_rejects_empty_file(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("")
    with pytest.raises(DatasetError, match="empty file"):
        load_csv(csv)


def test_load_csv_rejects_duplicate_header(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,x\n0,0\n")
    with pytest.raises(DatasetError, match="duplicate name"):
        load_csv(csv)


def test_load_csv_missing_file():
    with pytest.raises(DatasetError, match="cannot read"):
        load_csv("/nonexistent/path/d.csv")


def test_load_csv_bad_sidecar_count(tmp_path):
    csv = tmp_path / "d.csv"
    csv.write_text("x,y\n0,1\n")
    (tmp_path / "d.card").write_text("2\n")
    with pytest.raises(DatasetError, match="1 cardinalities for 2 variables"):
        load_csv(csv)


def test_save_csv_round_trip_exact(tmp_path):
    data = small_dataset()
    out = tmp_path / "out.csv"
    save_csv(data, out)
    text = out.read_text()
    assert text == "a,b,c\n0,1,0\n1,1,2\n0,0,1\n1,0,2\n1,1,0\n0,0,1\n"
    assert (tmp_path / "out.card").read_text() == "2\n2\n3\n"
    back = load_csv(out)
    assert back.names == data.names
    assert back.cardinalities == data.cardinalities
    assert np.array_equal(back.columns, data.columns)


def test_save_csv_without_sidecar(tmp_path):
    data = small_dataset()
    out = tmp_path / "out.csv"
    save_csv(data, out, sidecar=False)
    assert not (tmp_path / "out.card").exists()


def test_contingency_unconditional():
    data = small_dataset()
    table = contingency(data, 0, 1)
    assert table.dims == (2, 2, 1)
    assert table.strata == ((),)
    assert table.n == 6
    # rows of (a, b): (0,1) (1,1) (0,0) (1,0) (1,1) (0,0)
    assert table.counts[:, :, 0].tolist() == [[2, 1], [1, 2]]


def test_contingency_conditional_strata_in_order():
    data = small_dataset()
    table = contingency(data, 0, 1, (2,))
    # c takes values 0, 1, 2; all observed.
    assert table.strata == ((0,), (1,), (2,))
    assert table.counts.sum() == 6
    # stratum c=2 has rows 1 and 3: (a,b) = (1,1) and (1,0)
    assert table.counts[:, :, 2].tolist() == [[0, 0], [1, 1]]


def test_contingency_skips_unobserved_strata():
    cols = np.array([[0, 1], [1, 0], [2, 2]], dtype=np.int32)
    data = Dataset(("a", "b", "c"), (2, 2, 3), cols)
    table = contingency(data, 0, 1, (2,))
    assert table.strata == ((2,),)
    assert table.dims == (2, 2, 1)


def test_contingency_rejects_overlap():
    data = small_dataset()
    with pytest.raises(DatasetError):
        contingency(data, 0, 0)
    with pytest.raises(DatasetError):
        contingency(data, 0, 1, (1,))


def test_contingency_empty_dataset():
    data = Dataset(("a", "b"), (2, 2), np.empty((2, 0), dtype=np.int32))
    table = contingency(data, 0, 1)
    assert table.n == 0
    assert table.counts.sum() == 0


def test_contingency_matches_brute_force():
    rng = np.random.Generator(np.random.PCG64(7))
    cards = (2, 3, 2, 4, 2)
    cols = np.stack([rng.integers(0, r, size=80) for r in cards]).astype(np.int32)
    data = Dataset(tuple("abcde"), cards, cols)
    for _ in range(40):
        x, y = rng.choice(5, size=2, replace=False)
        pool = [v for v in range(5) if v not in (x, y)]
        k = int(rng.integers(0, 3))
        z = tuple(rng.choice(pool, size=k, replace=False))
        table = contingency(data, int(x), int(y), z)
        brute = contingency_brute(cols, cards, int(x), int(y), z)
        assert set(table.strata) == set(brute)
        for s, key in enumerate(table.strata):
            assert np.array_equal(table.counts[:, :, s], brute[key])
        assert list(table.strata) == sorted(table.strata)
