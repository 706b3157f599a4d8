import itertools

import numpy as np
import pytest

from urysohn import ConfigError, InputError
from urysohn.kernel import PCK, PLK, UrysohnOperator, evaluate
from urysohn.objects import (
    GeneralSISO,
    Hammerstein,
    SingleUrysohn,
    Theorem,
    TwoUrysohn,
    UrysohnRectifier,
    UrysohnRelay,
    Wiener,
    gen_dataset,
    gen_sign_changing_kernel,
    gen_smooth_kernel,
    gen_two_urysohn,
    load_object,
    make_lookup_second_block,
    make_theorem_kernel,
    miso_map,
    save_object,
    theorem_offset,
    windows,
)


def test_windows_are_newest_first():
    w = windows([1, 2, 3, 4], 3)
    assert w.tolist() == [[3, 2, 1], [4, 3, 2]]


def test_wiener_with_identity_is_fir():
    rng = np.random.default_rng(0)
    h = np.array([0.5, -0.2, 0.1])
    x = rng.uniform(-1, 1, 50)
    assert Wiener(h).simulate(x) == pytest.approx(np.convolve(x, h)[2:50])


def test_simulate_rejects_short_input():
    with pytest.raises(InputError):
        Wiener([1, 2, 3]).simulate([0.1, 0.2])


def test_relay_outputs_are_plus_minus_one():
    obj = UrysohnRelay(gen_sign_changing_kernel(4, 10, 0))
    z = obj.simulate(np.random.default_rng(1).uniform(0, 1, 3000))
    assert set(np.unique(z)) == {-1.0, 1.0}


def test_rectifier_is_absolute_value():
    first = gen_sign_changing_kernel(3, 10, 2)
    x = np.random.default_rng(2).uniform(0, 1, 200)
    assert UrysohnRectifier(first).simulate(x).tolist() == np.abs(first.predict(x)).tolist()


def test_hammerstein_embeds_in_urysohn():
    h = np.array([1.0, 0.6, -0.3, 0.1])
    n = 50
    nodes = np.linspace(-1, 1, n)
    # piecewise-linear u, so the grid embedding is exact up to rounding
    u = lambda x: np.interp(x, nodes, np.sin(3 * nodes) + nodes ** 2)
    ham = Hammerstein(h, u)
    emb = ham.as_urysohn(n, -1, 1, PLK)
    lo, hi = emb.output_bounds()
    ident = UrysohnOperator([[lo, hi]], lo, hi, PLK)
    x = np.random.default_rng(3).uniform(-1, 1, 10 ** 4)
    assert emb.predict(x) == pytest.approx(ham.simulate(x), abs=1e-12)
    assert TwoUrysohn(emb, ident).simulate(x) == pytest.approx(ham.simulate(x), abs=1e-12)


def test_simulate_is_deterministic():
    obj = gen_two_urysohn(3, 10, 2, 8, 7)
    x = np.random.default_rng(4).uniform(0, 1, 100)
    assert obj.simulate(x).tobytes() == obj.simulate(x).tobytes()


# ------------------------------------------------------------ theorem


def test_theorem_kernel_examples():
    assert make_theorem_kernel(2, 2).U.tolist() == [[1, 2], [2, 4]]
    assert make_theorem_kernel(3, 1).U.tolist() == [[1, 2, 3]]


def all_windows(n, m):
    return [list(map(float, w)) for w in itertools.product(range(1, n + 1), repeat=m)]


def test_theorem_n4_m3_consecutive_outputs():
    op = make_theorem_kernel(4, 3)
    outs = sorted(evaluate(op, w) for w in all_windows(4, 3))
    assert outs == list(range(21, 85))


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("m", range(1, 5))
def test_theorem_distinctness(n, m):
    op = make_theorem_kernel(n, m)
    outs = sorted(int(evaluate(op, w)) for w in all_windows(n, m))
    shift = sum(n ** j for j in range(1, m))
    assert [o - shift for o in outs] == list(range(1, n ** m + 1))
    assert outs[0] == theorem_offset(n, m)


def test_theorem_capacity_guard():
    with pytest.raises(ConfigError):
        make_theorem_kernel(10, 16)
    make_theorem_kernel(2, 50)


@pytest.mark.parametrize("F, n, m", [
    (lambda w: np.full(len(w), 2.5), 3, 2),
    (lambda w: w.sum(axis=1), 2, 2),
    (lambda w: w.prod(axis=1), 3, 2),
    (lambda w: np.sin(w[:, 0]) * w[:, -1] ** 2, 4, 3),
])
def test_lookup_cascade_reproduces_F(F, n, m):
    obj = Theorem(n, m, F)
    for w in all_windows(n, m):
        assert obj.model(w) == F(np.array([w]))[0]


def test_lookup_requires_theorem_kernel():
    with pytest.raises(ConfigError):
        make_lookup_second_block(UrysohnOperator.zeros(2, 3, 1, 3, PCK), lambda w: w[:, 0])


def test_quantized_object_matches_on_grid_inputs():
    F = lambda w: np.maximum(w[:, 0], w[:, 1]) - w[:, 2]
    obj = Theorem(3, 3, F)
    x = np.random.default_rng(5).integers(1, 4, 300).astype(float)
    assert obj.simulate(x).tolist() == F(windows(x, 3)).tolist()


def test_miso_map():
    assert miso_map((1, 1), 3) == 1
    assert miso_map((3, 3), 3) == 9
    codes = {miso_map(p, 3) for p in itertools.product(range(1, 4), repeat=2)}
    assert codes == set(range(1, 10))
    with pytest.raises(InputError):
        miso_map((0, 2), 3)


# ------------------------------------------------------------ generators


def test_smooth_kernel_is_seeded():
    assert gen_smooth_kernel(3, 20, 11) == gen_smooth_kernel(3, 20, 11)
    assert gen_smooth_kernel(3, 20, 11) != gen_smooth_kernel(3, 20, 12)


@pytest.mark.parametrize("seed", range(10))
def test_smooth_kernel_shape(seed):
    op = gen_smooth_kernel(5, 50, seed, extrema_count=3)
    for row in op.U:
        d = np.sign(np.diff(row))
        assert np.count_nonzero(d[1:] != d[:-1]) >= 2
    peaks = np.abs(op.U).max(axis=1)
    assert np.all(np.diff(peaks) <= 1e-12)


def test_smooth_kernel_validation():
    with pytest.raises(ConfigError):
        gen_smooth_kernel(2, 10, 0, extrema_count=1)


def test_two_urysohn_second_range_is_reachable_range():
    obj = gen_two_urysohn(4, 12, 1, 10, 3)
    lo, hi = obj.first.output_bounds()
    assert (obj.second.x_min, obj.second.x_max) == (lo, hi)


def test_sign_changing_kernel_changes_sign():
    y = gen_sign_changing_kernel(4, 20, 1).predict(np.random.default_rng(0).uniform(0, 1, 5000))
    assert 0.2 < np.mean(y > 0) < 0.8


def test_gen_dataset_alignment():
    obj = SingleUrysohn(gen_smooth_kernel(3, 6, 0))
    data = gen_dataset(obj, 100, 0, 1, 5)
    assert len(data) == 100
    assert data.outputs[2:].tolist() == obj.simulate(data.inputs).tolist()


def test_general_siso():
    obj = GeneralSISO(lambda w: w[:, 0] * w[:, 1], 2)
    assert obj.simulate([1.0, 2.0, 3.0]).tolist() == [2.0, 6.0]


@pytest.mark.parametrize("obj", [
    gen_two_urysohn(3, 6, 2, 5, 1),
    UrysohnRectifier(gen_sign_changing_kernel(3, 6, 1)),
    UrysohnRelay(gen_sign_changing_kernel(3, 6, 1, mode=PCK)),
    SingleUrysohn(gen_smooth_kernel(3, 6, 1)),
])
def test_object_files_round_trip(obj, tmp_path):
    path = tmp_path / "obj.txt"
    save_object(obj, path)
    back = load_object(path)
    assert type(back) is type(obj)
    x = np.random.default_rng(0).uniform(0, 1, 50)
    assert back.simulate(x).tolist() == obj.simulate(x).tolist()
