import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urysohn import FormatError
from urysohn.kernel import PCK, PLK, CascadeModel, UrysohnOperator
from urysohn.modelfile import deserialize, dumps, load, loads, save, serialize


@settings(max_examples=100)
@given(st.integers(1, 4), st.integers(2, 6), st.sampled_from([PCK, PLK]), st.integers(0, 2 ** 32 - 1))
def test_round_trip_is_exact(m, n, mode, seed):
    rng = np.random.default_rng(seed)
    # awkward magnitudes to exercise shortest-repr printing
    U = rng.normal(size=(m, n)) * 10.0 ** rng.integers(-300, 300, size=(m, n))
    op = UrysohnOperator(U, -np.pi, np.e, mode)
    back = deserialize(serialize(op))
    assert back == op
    assert back.U.tobytes() == op.U.tobytes()


def test_cascade_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    model = CascadeModel(UrysohnOperator(rng.normal(size=(3, 4)), 0, 1, PLK),
                         UrysohnOperator(rng.normal(size=(2, 5)), -1.5, 2.5, PCK))
    path = tmp_path / "m.txt"
    save(model, path)
    assert load(path) == model
    assert path.read_text().splitlines()[0] == "CASCADE v1"


def test_format_layout():
    op = UrysohnOperator([[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]], 0, 1, PCK)
    assert dumps(op).splitlines() == [
        "URYSOHN v1",
        "mode=PCK m=2 n=3 xmin=0.0 xmax=1.0",
        "0.1 0.2 0.3",
        "0.4 0.5 0.6",
    ]


def test_truncated_stream():
    text = dumps(UrysohnOperator([[1.0, 2.0], [3.0, 4.0]]))
    cut = text.encode()[: text.index("3.0")]
    with pytest.raises(FormatError) as err:
        deserialize(cut)
    assert err.value.offset == len(cut)


def test_missing_values_are_reported():
    with pytest.raises(FormatError, match="expected 6 matrix values.*found 5"):
        loads("URYSOHN v1\nmode=PLK m=2 n=3 xmin=0 xmax=1\n1 2 3\n4 5\n")


@pytest.mark.parametrize("text, needle", [
    ("", "empty"),
    ("URYSOHN v2\n", "header"),
    ("URYSOHN v1\nmode=PLK m=2 n=3\n", "parameter line"),
    ("URYSOHN v1\nmode=XYZ m=1 n=2 xmin=0 xmax=1\n1 2\n", "unknown mode"),
    ("URYSOHN v1\nmode=PCK m=1 n=2 xmin=1 xmax=0\n1 2\n", "range"),
    ("URYSOHN v1\nmode=PCK m=1 n=2 xmin=0 xmax=1\n1 nan\n", "non-finite"),
    ("URYSOHN v1\nmode=PCK m=1 n=2 xmin=0 xmax=1\n1 2\nextra\n", "trailing"),
    ("URYSOHN v1\nmode=PCK m=2 n=2 xmin=0 xmax=1\n1 2 3\n4\n", "row 1"),
])
def test_malformed_files(text, needle):
    with pytest.raises(FormatError, match=needle):
        loads(text)


def test_error_offset_points_at_bad_line():
    text = "URYSOHN v1\nmode=PCK m=1 n=2 xmin=0 xmax=1\n1 inf\n"
    with pytest.raises(FormatError) as err:
        loads(text)
    assert err.value.offset == text.index("1 inf")
    assert "byte" in str(err.value)


def test_crlf_accepted():
    text = "URYSOHN v1\r\nmode=PLK m=1 n=2 xmin=0 xmax=1\r\n1 2\r\n"
    assert loads(text) == UrysohnOperator([[1.0, 2.0]], 0, 1, PLK)
