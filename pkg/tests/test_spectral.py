import io
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from vilenkin.core import GroupPoint, RadixSequence, character
from vilenkin.io import read_samples_csv, spectrum_from_json, spectrum_to_json, write_samples_csv
from vilenkin.spectral import (
    SampledFunction,
    SparseSpectrum,
    SummationGuardError,
    character_table,
    dirichlet,
    fejer_kernel,
    fejer_mean,
    fejer_mean_oracle,
    forward,
    inverse,
    lp_norm,
    maximal_truncated,
    naive_forward,
    paley_dirichlet,
    partial_sum,
)


def random_function(radix, level, rng):
    M = radix.scale(level)
    return SampledFunction(radix, level, rng.normal(size=M) + 1j * rng.normal(size=M))


def random_spectrum(radix, rng, support=32, below=64):
    keys = rng.sample(range(below), rng.randint(1, support))
    return SparseSpectrum(radix, {k: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for k in keys})


class TestForward:
    def test_constant_is_delta(self, any_radix):
        level = 3
        f = SampledFunction(any_radix, level, np.ones(any_radix.scale(level)))
        c = forward(f)
        assert abs(c[0] - 1) < 1e-14
        assert np.max(np.abs(c[1:])) < 1e-14

    def test_character_is_unit_vector(self, any_radix):
        level = 3
        for j in range(any_radix.scale(level)):
            f = SampledFunction.from_callable(any_radix, level, lambda x: character(j, x))
            c = forward(f)
            expected = np.zeros_like(c)
            expected[j] = 1
            assert np.max(np.abs(c - expected)) < 1e-12

    def test_random_m12_matches_oracle(self, m23):
        rng = np.random.default_rng(0)
        m = oracles.radix_fn((2, 3))
        level = 3  # M = 12
        assert m23.scale(level) == 12
        f = random_function(m23, level, rng)
        ref = np.array(oracles.naive_dft(m, level, list(f.values)))
        assert np.max(np.abs(forward(f) - ref)) < 1e-10

    def test_naive_forward_matches_oracle(self, any_radix):
        rng = np.random.default_rng(1)
        m = oracles.radix_fn(any_radix.period, any_radix.prefix)
        f = random_function(any_radix, 2, rng)
        ref = np.array(oracles.naive_dft(m, 2, list(f.values)))
        assert np.max(np.abs(naive_forward(f) - ref)) < 1e-12

    @pytest.mark.parametrize(
        "radix,level",
        [(RadixSequence.walsh(), 8), (RadixSequence(period=(2, 3)), 5), (RadixSequence(period=(4, 3)), 4)],
    )
    def test_matches_naive_up_to_256(self, radix, level):
        rng = np.random.default_rng(level)
        assert radix.scale(level) <= 256
        for _ in range(3):
            f = random_function(radix, level, rng)
            assert np.max(np.abs(forward(f) - naive_forward(f))) < 1e-10

    def test_batched_rows(self, m23):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(4, 36))
        out = forward(X, m23)
        for row, x in zip(out, X):
            assert np.allclose(row, forward(SampledFunction(m23, 4, x)), atol=1e-14)

    def test_bad_length(self, m23):
        with pytest.raises(ValueError):
            forward(np.ones(10), m23)


class TestInverse:
    def test_delta_gives_character(self, m23):
        level = 3
        c = np.zeros(12, dtype=complex)
        c[7] = 1
        f = inverse(c, m23)
        for t, x in enumerate(f.points()):
            assert abs(f.values[t] - character(7, x)) < 1e-14

    def test_roundtrip(self, any_radix):
        rng = np.random.default_rng(3)
        f = random_function(any_radix, 4, rng)
        assert np.max(np.abs(inverse(forward(f), any_radix).values - f.values)) < 1e-9

    def test_zero(self, walsh):
        assert not np.any(inverse(np.zeros(16), walsh).values)

    def test_length_checked(self, walsh):
        with pytest.raises(ValueError):
            inverse(np.zeros(12), walsh)


class TestKernels:
    def test_dirichlet_examples(self, walsh, m23):
        assert dirichlet(1, GroupPoint(m23, (1, 2))) == 1
        assert dirichlet(3, GroupPoint(walsh, (1, 0, 0))) == 1

    @pytest.mark.parametrize("radix", [RadixSequence.walsh(), RadixSequence(period=(2, 3))])
    def test_paley_lemma(self, radix):
        N = 6
        for n in range(N + 1):
            for t in range(radix.scale(N)):
                x = GroupPoint.from_cell(radix, t, N)
                expected = radix.scale(n) if all(d == 0 for d in x.digits[:n]) else 0
                assert abs(dirichlet(radix.scale(n), x) - expected) <= 1e-10
                assert paley_dirichlet(n, x) == expected

    def test_paley_examples(self, m23):
        assert paley_dirichlet(3, GroupPoint.zero(m23, 3)) == 12
        assert paley_dirichlet(2, GroupPoint(m23, (1, 0))) == 0
        assert paley_dirichlet(0, GroupPoint(m23, (1, 2))) == 1

    def test_dirichlet_guard(self, walsh):
        with pytest.raises(SummationGuardError):
            dirichlet(10**6 + 1, GroupPoint.zero(walsh))
        with pytest.raises(ValueError):
            dirichlet(0, GroupPoint.zero(walsh))

    def test_fejer_kernel_examples(self, m23):
        rng = random.Random(4)
        for _ in range(10):
            x = GroupPoint(m23, (rng.randrange(2), rng.randrange(3), rng.randrange(2)))
            assert abs(fejer_kernel(1, x) - 1) < 1e-15
            assert abs(fejer_kernel(2, x) - (1 + character(1, x) / 2)) < 1e-14
        for n in range(1, 40):
            assert abs(fejer_kernel(n, GroupPoint.zero(m23)) - (n + 1) / 2) < 1e-12

    def test_fejer_kernel_is_average_of_dirichlet(self, m23):
        x = GroupPoint(m23, (1, 1, 0, 2))
        for n in range(1, 30):
            avg = sum(dirichlet(k, x) for k in range(1, n + 1)) / n
            assert abs(fejer_kernel(n, x) - avg) < 1e-12


class TestSums:
    def test_partial_sum_examples(self, m23):
        rng = random.Random(5)
        f = random_spectrum(m23, rng)
        x = GroupPoint(m23, (1, 2, 1, 0, 1, 2))
        assert partial_sum(f, 0, x) == 0
        m = oracles.radix_fn((2, 3))
        full = oracles.synth(m, 6, {k.value: a for k, a in f.items()}, list(x.digits))
        assert abs(partial_sum(f, 10**50, x) - full) < 1e-10

    def test_partial_sum_big_n_cost(self, walsh):
        f = SparseSpectrum(walsh, {2**300 + 1: 1.0, 3: 2.0})
        x = GroupPoint(walsh, (1, 1))
        assert partial_sum(f, 2**300, x) == 2 * character(3, x)
        assert partial_sum(f, 2**301, x) == 2 * character(3, x) + character(2**300 + 1, x)

    def test_fejer_mean_examples(self, m23):
        x = GroupPoint(m23, (1, 2))
        f = SparseSpectrum(m23, {0: 0.5 - 2j})
        for n in (1, 2, 17, 10**40):
            assert fejer_mean(f, n, x) == 0.5 - 2j
        g = SparseSpectrum(m23, {0: 1, 1: 1})
        oracle = (partial_sum(g, 1, x) + partial_sum(g, 2, x)) / 2
        assert abs(fejer_mean(g, 2, x) - (1 + character(1, x) / 2)) < 1e-15
        assert abs(fejer_mean(g, 2, x) - oracle) < 1e-15

    def test_oracle_n1(self, m23):
        f = SparseSpectrum(m23, {0: 3.0, 5: 1.0})
        assert fejer_mean_oracle(f, 1, GroupPoint(m23, (1,))) == 3.0

    def test_oracle_guard(self, walsh):
        with pytest.raises(SummationGuardError):
            fejer_mean_oracle(SparseSpectrum(walsh, {0: 1}), 10**4 + 1, GroupPoint.zero(walsh))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32), radix=st.sampled_from([RadixSequence.walsh(), RadixSequence(period=(2, 3))]))
    def test_fejer_convention(self, seed, radix):
        rng = random.Random(seed)
        f = random_spectrum(radix, rng)
        x = GroupPoint(radix, tuple(rng.randrange(radix[k]) for k in range(7)))
        for n in range(1, 65):
            assert abs(fejer_mean(f, n, x) - fejer_mean_oracle(f, n, x)) < 1e-10

    def test_sparse_dense_agreement(self, m23):
        rng = random.Random(6)
        level = 4  # M = 36
        f = random_spectrum(m23, rng, support=20, below=36)
        dense = f.to_dense(level)
        for n in (1, 5, 17, 36):
            Sn = inverse(np.where(np.arange(36) < n, dense, 0), m23)
            sigma = inverse(np.where(np.arange(36) < n, (1 - np.arange(36) / n) * dense, 0), m23)
            for t, x in enumerate(Sn.points()):
                assert abs(partial_sum(f, n, x) - Sn.values[t]) < 1e-9
                assert abs(fejer_mean(f, n, x) - sigma.values[t]) < 1e-9

    def test_weight_rounded_once(self):
        rng = random.Random(7)
        for _ in range(500):
            n = rng.getrandbits(128) | 1
            k = rng.randrange(n)
            w = (n - k) / n
            exact = Fraction(n - k, n)
            assert abs(Fraction(w) - exact) <= exact * Fraction(1, 2**52)


class TestMaximal:
    def test_single_and_monotone(self, m23):
        rng = random.Random(8)
        f = random_spectrum(m23, rng)
        x = GroupPoint(m23, (1, 0, 1))
        assert maximal_truncated(f, x, [7]) == abs(fejer_mean(f, 7, x))
        assert maximal_truncated(f, x, [7], kind="partial") == abs(partial_sum(f, 7, x))
        small = maximal_truncated(f, x, [3, 9])
        assert maximal_truncated(f, x, [3, 9, 20, 41]) >= small

    def test_empty(self, m23):
        with pytest.raises(ValueError):
            maximal_truncated(SparseSpectrum(m23, {0: 1}), GroupPoint.zero(m23), [])


class TestNorms:
    def test_examples(self, walsh, m23):
        assert lp_norm(SampledFunction(m23, 3, np.ones(12)), 3) == pytest.approx(1, abs=1e-15)
        ind = SampledFunction.from_callable(walsh, 3, lambda x: 1.0 if x.digit(0) == 0 else 0.0)
        assert lp_norm(ind, 1) == 0.5
        psi = SampledFunction.from_callable(m23, 4, lambda x: character(29, x))
        assert lp_norm(psi, 2.5) == pytest.approx(1, abs=1e-14)

    def test_p_below_one(self, walsh):
        with pytest.raises(ValueError):
            lp_norm(SampledFunction(walsh, 1, [1, 1]), 0.5)


def test_orthonormality(any_radix):
    level = 4
    T = character_table(any_radix, level)
    G = T @ T.conj().T / T.shape[1]
    assert np.max(np.abs(G - np.eye(T.shape[0]))) < 1e-9


def test_character_table_matches_scalar(m23):
    T = character_table(m23, 3)
    for k in range(12):
        for t in range(12):
            assert T[k, t] == character(k, GroupPoint.from_cell(m23, t, 3))


class TestSparseSpectrum:
    def test_pruning(self, walsh):
        s = SparseSpectrum.from_dense([1, 1e-15, 0, -2], walsh)
        assert [k.value for k in s] == [0, 3]

    def test_zero_entries_dropped_and_duplicates(self, walsh):
        assert len(SparseSpectrum(walsh, {1: 0, 2: 1})) == 1
        with pytest.raises(ValueError):
            SparseSpectrum(walsh, [(1, 1.0), (1, 2.0)])

    def test_json_roundtrip(self, walsh):
        s = SparseSpectrum(walsh, {2**200 + 3: 0.25 - 1j, 5: 1.0})
        obj = spectrum_to_json(s)
        assert obj[1]["index"] == str(2**200 + 3)
        back = spectrum_from_json(obj, walsh)
        assert dict(back) == dict(s)

    def test_samples_csv_roundtrip(self, m23):
        f = random_function(m23, 3, np.random.default_rng(9))
        buf = io.StringIO()
        write_samples_csv(f, buf)
        assert buf.getvalue().startswith("cell_index,re,im\n")
        back = read_samples_csv(io.StringIO(buf.getvalue()), m23)
        assert np.array_equal(back.values, f.values)
