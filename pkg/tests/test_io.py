import numpy as np
import pytest

from ddd import (
    ConfusionMatrix,
    CorrelationReport,
    DistanceMatrix,
    EmbeddingRecord,
    SimilarityMatrix,
    build_dataset,
    compute_centroids,
    compute_distance_matrix,
    similarity_from_datasets,
)
from ddd.errors import (
    DuplicateSampleId,
    NegativeProbability,
    NonFiniteValue,
    ParseError,
    RaggedRow,
    RowSumOutOfTolerance,
)
from ddd.io import (
    read_embeddings,
    read_matrix,
    read_predictions,
    read_report,
    write_embeddings,
    write_matrix,
    write_predictions,
    write_report,
)

from conftest import make_dataset, random_dataset


def datasets_equal(a, b):
    assert a.role == b.role
    assert a.dimension == b.dimension
    assert a.labels == b.labels
    assert len(a.records) == len(b.records)
    for ra, rb in zip(a.records, b.records):
        assert ra == rb


# ---------------------------------------------------------------------------
# embeddings CSV


def test_minimal_csv(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("id,class,domain,e0,e1\ns1,A,d1,1.0,0.0\n")
    ds = read_embeddings(path, "train")
    assert len(ds.records) == 1
    assert ds.dimension == 2
    assert ds.labels == ("A",)
    assert ds.records[0].domain_label == "d1"


def test_csv_crlf_accepted(tmp_path):
    path = tmp_path / "e.csv"
    path.write_bytes(b"id,class,domain,e0\r\ns1,A,,1.5\r\ns2,B,,2.5\r\n")
    ds = read_embeddings(path, "test")
    assert len(ds.records) == 2
    assert ds.records[0].vector == (1.5,)


def test_ragged_row(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("id,class,domain,e0,e1\ns1,A,d,1.0,0.0,9.0\n")
    with pytest.raises(RaggedRow):
        read_embeddings(path, "train")


def test_duplicate_sample_id(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("id,class,domain,e0\ns1,A,,1.0\ns1,B,,2.0\n")
    with pytest.raises(DuplicateSampleId):
        read_embeddings(path, "train")


def test_non_finite_value(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("id,class,domain,e0\ns1,A,,nan\n")
    with pytest.raises(NonFiniteValue):
        read_embeddings(path, "train")


def test_bad_float_reports_line(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("id,class,domain,e0\ns1,A,,1.0\ns2,A,,oops\n")
    with pytest.raises(ParseError, match=":3"):
        read_embeddings(path, "train")


def test_bad_header(tmp_path):
    path = tmp_path / "e.csv"
    path.write_text("sample,cls,dom,e0\ns1,A,,1.0\n")
    with pytest.raises(ParseError):
        read_embeddings(path, "train")


def test_csv_roundtrip_arbitrary_doubles(tmp_path, rng):
    ds = random_dataset(rng, class_count=3, dim=5, per_class=4, scale=123.456)
    path = tmp_path / "e.csv"
    write_embeddings(ds, path, "csv")
    back = read_embeddings(path, "train")
    datasets_equal(ds, back)


def test_shuffled_csv_gives_identical_downstream(tmp_path, rng):
    ds = random_dataset(rng, class_count=3, dim=4, per_class=5)
    path = tmp_path / "e.csv"
    write_embeddings(ds, path, "csv")
    lines = path.read_text().splitlines()
    shuffled = [lines[0]] + list(reversed(lines[1:]))
    path2 = tmp_path / "shuffled.csv"
    path2.write_text("\n".join(shuffled) + "\n")
    a = read_embeddings(path, "train")
    b = read_embeddings(path2, "train")
    datasets_equal(a, b)
    test_ds = random_dataset(rng, role="test")
    La, Sa = similarity_from_datasets(a, test_ds, 1.0)
    Lb, Sb = similarity_from_datasets(b, test_ds, 1.0)
    assert La.values.tobytes() == Lb.values.tobytes()
    assert Sa.values.tobytes() == Sb.values.tobytes()


# ---------------------------------------------------------------------------
# embeddings binary


def f32_dataset(rng, **kw):
    ds = random_dataset(rng, **kw)
    records = [
        EmbeddingRecord(
            r.sample_id,
            r.class_label,
            r.domain_label,
            tuple(float(np.float32(x)) for x in r.vector),
        )
        for r in ds.records
    ]
    return build_dataset(records, ds.role)


def test_binary_roundtrip(tmp_path, rng):
    ds = f32_dataset(rng, class_count=4, dim=7, per_class=3)
    path = tmp_path / "e.bin"
    write_embeddings(ds, path, "binary")
    back = read_embeddings(path, "train")
    datasets_equal(ds, back)


def test_binary_sniffed_by_magic(tmp_path, rng):
    ds = f32_dataset(rng)
    path = tmp_path / "anything.dat"
    write_embeddings(ds, path, "binary")
    back = read_embeddings(path, "train")
    datasets_equal(ds, back)


def test_binary_truncated(tmp_path, rng):
    ds = f32_dataset(rng)
    path = tmp_path / "e.bin"
    write_embeddings(ds, path, "binary")
    blob = path.read_bytes()
    path.write_bytes(blob[:-3])
    with pytest.raises(ParseError):
        read_embeddings(path, "train")


def test_binary_trailing_garbage(tmp_path, rng):
    ds = f32_dataset(rng)
    path = tmp_path / "e.bin"
    write_embeddings(ds, path, "binary")
    path.write_bytes(path.read_bytes() + b"xx")
    with pytest.raises(ParseError):
        read_embeddings(path, "train")


def test_binary_bad_magic(tmp_path):
    path = tmp_path / "e.bin"
    path.write_bytes(b"NOPE" + b"\x00" * 16)
    with pytest.raises(ParseError):
        read_embeddings(path, "train", format="binary")


# ---------------------------------------------------------------------------
# predictions


def test_read_hard_predictions(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("id,true,pred\ns1,A,A\ns2,A,B\n")
    pf = read_predictions(path)
    assert pf.mode == "hard"
    assert len(pf.records) == 2
    assert pf.records[0].hard_label == "A"


def test_read_soft_predictions(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("id,true,p_A,p_B\ns1,A,0.9,0.1\n")
    pf = read_predictions(path)
    assert pf.mode == "soft"
    assert pf.labels == ("A", "B")
    assert pf.records[0].probabilities == {"A": 0.9, "B": 0.1}


def test_soft_row_sum_out_of_tolerance(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("id,true,p_A,p_B\ns1,A,0.7,0.1\n")
    with pytest.raises(RowSumOutOfTolerance):
        read_predictions(path)


def test_negative_probability(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("id,true,p_A,p_B\ns1,A,1.2,-0.2\n")
    with pytest.raises(NegativeProbability):
        read_predictions(path)


def test_bad_predictions_header(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("id,label,guess\ns1,A,A\n")
    with pytest.raises(ParseError):
        read_predictions(path)


def test_predictions_roundtrip(tmp_path):
    from ddd import PredictionRecord

    records = [
        PredictionRecord("s1", "A", probabilities={"A": 0.25, "B": 0.75}),
        PredictionRecord("s2", "B", probabilities={"A": 0.5, "B": 0.5}),
    ]
    path = tmp_path / "p.csv"
    write_predictions(records, path, labels=("A", "B"))
    pf = read_predictions(path)
    assert pf.mode == "soft"
    assert list(pf.records) == records


# ---------------------------------------------------------------------------
# matrices


def matrices_equal(a, b):
    assert type(a) is type(b)
    assert a.values.tobytes() == b.values.tobytes()


def sample_matrices(rng):
    train = random_dataset(rng, role="train")
    test = random_dataset(rng, role="test")
    L = compute_distance_matrix(train, compute_centroids(test))
    _, S = similarity_from_datasets(train, test, 1.75)
    P = ConfusionMatrix(
        labels=("a", "b"),
        values=np.array([[0.5, 0.5], [0.0, 1.0]]),
        mode="soft",
        support=np.array([4, 2], dtype=np.int64),
    )
    return L, S, P


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_matrix_roundtrip(tmp_path, rng, fmt):
    for matrix in sample_matrices(rng):
        path = tmp_path / f"m.{fmt}"
        write_matrix(matrix, path, fmt)
        back = read_matrix(path)
        matrices_equal(matrix, back)
        if isinstance(matrix, SimilarityMatrix):
            assert back.alpha == matrix.alpha
        if isinstance(matrix, DistanceMatrix):
            assert back.train_labels == matrix.train_labels
            assert back.test_labels == matrix.test_labels
        if isinstance(matrix, ConfusionMatrix):
            assert back.mode == matrix.mode
            assert back.support.tolist() == matrix.support.tolist()


def test_matrix_csv_shape(tmp_path):
    S = SimilarityMatrix(
        alpha=1.0,
        train_labels=("a", "b"),
        test_labels=("x", "y"),
        values=np.array([[0.6, 0.4], [0.4, 0.6]]),
    )
    path = tmp_path / "s.csv"
    write_matrix(S, path, "csv")
    lines = [
        ln for ln in path.read_text().splitlines() if not ln.startswith("#")
    ]
    assert len(lines) == 3  # header + 2 rows
    assert lines[0] == ",x,y"


def test_generic_matrix_csv(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text(",x,y\nrow1,1.0,2.0\nrow2,3.0,4.0\n")
    m = read_matrix(path)
    assert m.row_labels == ("row1", "row2")
    assert m.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]


def test_unknown_matrix_format(tmp_path, rng):
    L, _, _ = sample_matrices(rng)
    with pytest.raises(ValueError):
        write_matrix(L, tmp_path / "m.xml", "xml")


# ---------------------------------------------------------------------------
# reports


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_report_roundtrip(tmp_path, fmt):
    report = CorrelationReport(
        aggregate_R=0.12345678901234567,
        per_class={"a": 0.9, "b": 1 / 3},
        alpha=1.0,
        pairing="transpose",
        excluded_classes=(("c", "zero support"),),
    )
    path = tmp_path / f"r.{fmt}"
    write_report(report, path, fmt)
    back = read_report(path)
    assert back == report  # dataclass equality, floats bit-exact


def test_report_unknown_format(tmp_path):
    report = CorrelationReport(1.0, {}, 1.0, "literal", ())
    with pytest.raises(ValueError):
        write_report(report, tmp_path / "r.bin", "bin")
