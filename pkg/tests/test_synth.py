import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tradehurst import synth
from tradehurst.synth import EmbeddingError, SynthSpec, fgn_autocovariance, generate, shuffle, superpose

N16 = 2 ** 16


def lag_autocov(x, lag):
    return float(np.mean(x[:-lag] * x[lag:]))


def test_autocovariance_formula():
    assert fgn_autocovariance(0.8, 1) == pytest.approx(0.5 * (2 ** 1.6 - 2))
    assert fgn_autocovariance(0.8, 1) == pytest.approx(0.5157, abs=1e-4)
    np.testing.assert_allclose(fgn_autocovariance(0.5, np.arange(1, 20)), 0.0, atol=1e-15)
    assert fgn_autocovariance(0.3, 0) == 1.0


def test_white_lag1():
    x = generate(SynthSpec("fgn", 0.5, N16, 17))
    assert abs(np.corrcoef(x[:-1], x[1:])[0, 1]) < 0.01


def test_h08_lag1_over_seeds():
    vals = [lag_autocov(generate(SynthSpec("fgn", 0.8, 4096, s)), 1) for s in range(50)]
    assert np.mean(vals) == pytest.approx(0.5157, abs=0.02)


def test_exact_covariance_structure():
    # ensemble covariance over many short draws against the target matrix
    H, n, reps = 0.75, 8, 20000
    rng = synth.make_rng(4)
    draws = np.array([synth.fgn(H, n, rng) for _ in range(reps)])
    emp = draws.T @ draws / reps
    k = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    target = fgn_autocovariance(H, k)
    assert np.max(np.abs(emp - target)) < 5 * math.sqrt(2 / reps)


def test_white_moments():
    x = generate(SynthSpec("white", 0.5, N16, 1))
    assert abs(x.mean()) < 0.02 and abs(x.var() - 1) < 0.05


@pytest.mark.parametrize("H", [0.6, 0.7, 0.8])
def test_fgn_moments(H):
    # the sample mean of fGn has standard deviation N**(H-1), which shrinks slowly
    x = generate(SynthSpec("fgn", H, N16, 2))
    assert abs(x.mean()) < 3 * N16 ** (H - 1)
    assert abs(x.var() - 1) < 0.05


def test_determinism_and_independence():
    a = generate(SynthSpec("fgn", 0.7, 1000, 5))
    b = generate(SynthSpec("fgn", 0.7, 1000, 5))
    c = generate(SynthSpec("fgn", 0.7, 1000, 6))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_spec_validation():
    with pytest.raises(ValueError, match="target_H"):
        SynthSpec("fgn", 1.2)
    with pytest.raises(ValueError, match="mix_weight"):
        SynthSpec("superposition", 0.8, mix_weight=1.5)
    with pytest.raises(ValueError, match="length"):
        SynthSpec("white", 0.5, 1)
    with pytest.raises(ValueError, match="kind"):
        SynthSpec("pink")


def test_embedding_failure(monkeypatch):
    monkeypatch.setattr(synth, "_circulant_eigenvalues", lambda H, n: (np.array([1.0, -0.5, 1.0]), 4))
    with pytest.raises(EmbeddingError, match="H=0.7, N=10"):
        synth.fgn(0.7, 10, synth.make_rng(0))


class TestShuffle:
    def test_length_one(self):
        np.testing.assert_array_equal(shuffle([3.5], 1), [3.5])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-1e9, 1e9), max_size=200), st.integers(0, 2 ** 63))
    def test_permutation(self, xs, seed):
        out = shuffle(xs, seed)
        assert sorted(out) == sorted(xs)
        assert math.fsum(out) == math.fsum(xs)
        assert math.fsum(v * v for v in out) == math.fsum(v * v for v in xs)

    def test_deterministic(self):
        x = np.arange(100.0)
        np.testing.assert_array_equal(shuffle(x, 3), shuffle(x, 3))
        assert not np.array_equal(shuffle(x, 3), shuffle(x, 4))

    def test_uniform_positions(self):
        # every element is equally likely to land in every slot
        n, reps = 5, 20000
        counts = np.zeros((n, n))
        for s in range(reps):
            out = shuffle(np.arange(n, dtype=float), s).astype(int)
            counts[out, np.arange(n)] += 1
        expected = reps / n
        chi2 = ((counts - expected) ** 2 / expected).sum()
        assert chi2 < 60  # 16 dof; p ~ 1e-6


class TestSuperpose:
    def test_degenerate_weights(self):
        w0 = superpose(SynthSpec("superposition", 0.8, 4096, 9, 0.0))
        w1 = superpose(SynthSpec("superposition", 0.8, 4096, 9, 1.0))
        white_seq, fgn_seq = np.random.SeedSequence(9).spawn(2)
        np.testing.assert_array_equal(w0, synth.make_rng(white_seq).standard_normal(4096))
        np.testing.assert_array_equal(w1, synth.fgn(0.8, 4096, synth.make_rng(fgn_seq)))

    @pytest.mark.parametrize("w", [0.1, 0.5, 0.9])
    def test_unit_variance(self, w):
        x = superpose(SynthSpec("superposition", 0.8, N16, 3, w))
        assert x.var() == pytest.approx(1.0, rel=0.03)

    def test_kind_checks(self):
        with pytest.raises(ValueError):
            superpose(SynthSpec("fgn", 0.8))
        with pytest.raises(ValueError):
            synth.fgn_generate(SynthSpec("superposition", 0.8))


def test_tape_from_values():
    tape = synth.tape_from_values([0.0, 1.0, -1.0], "ABC")
    assert [float(r.price) for r in tape.records] == [50.0, 55.0, 45.0]
    assert [r.timestamp for r in tape.records] == [34200.0, 34201.0, 34202.0]
    with pytest.raises(ValueError):
        synth.tape_from_values([-20.0])
