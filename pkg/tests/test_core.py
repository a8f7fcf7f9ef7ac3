import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from vilenkin.core import (
    GroupPoint,
    RadixSequence,
    SpectralIndex,
    VilenkinInterval,
    character,
    digit_complement,
    from_digits,
    group_add,
    group_negate,
    oplus,
    rademacher,
    scale,
    to_digits,
)

RADICES = [
    RadixSequence.walsh(),
    RadixSequence(period=(2, 3)),
    RadixSequence(period=(3,)),
    RadixSequence(period=(2, 4), prefix=(3, 5)),
    RadixSequence(period=(5, 2, 7)),
]


def points(radix, max_level=12):
    @st.composite
    def build(draw):
        level = draw(st.integers(0, max_level))
        return GroupPoint(radix, tuple(draw(st.integers(0, radix[k] - 1)) for k in range(level)))

    return build()


radix_st = st.sampled_from(RADICES)


class TestRadixSequence:
    def test_rejects_small_radices(self):
        with pytest.raises(ValueError):
            RadixSequence(period=(2, 1))
        with pytest.raises(ValueError):
            RadixSequence(period=())

    def test_periodic_extension(self):
        r = RadixSequence(period=(2, 4), prefix=(3, 5))
        assert [r[k] for k in range(7)] == [3, 5, 2, 4, 2, 4, 2]
        assert r.bound == 5

    def test_json_roundtrip(self):
        r = RadixSequence(period=(2, 4), prefix=(3,))
        assert RadixSequence.from_json(r.to_json()) == r
        assert r.to_json() == {"prefix": [3], "period": [2, 4]}

    def test_json_rejects_unknown(self):
        with pytest.raises(ValueError):
            RadixSequence.from_json({"period": [2], "bogus": 1})


class TestScale:
    def test_examples(self, m23, walsh):
        assert scale(m23, 0) == 1
        assert scale(m23, 3) == 12
        assert scale(walsh, 10) == 1024

    @pytest.mark.parametrize("radix", RADICES)
    def test_matches_running_product(self, radix):
        m = oracles.radix_fn(radix.period, radix.prefix)
        for k in range(60):
            assert radix.scale(k) == oracles.scale(m, k)

    def test_strictly_increasing(self, any_radix):
        vals = [any_radix.scale(k) for k in range(30)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_level_of(self, m23):
        assert m23.level_of(216) == 6
        with pytest.raises(ValueError):
            m23.level_of(100)


class TestDigits:
    def test_examples(self, m23, walsh):
        assert to_digits(m23, 0) == ()
        assert dict(to_digits(m23, 5)) == {0: 1, 1: 2}
        assert dict(to_digits(walsh, 6)) == {1: 1, 2: 1}

    def test_negative_rejected(self, walsh):
        with pytest.raises(ValueError):
            to_digits(walsh, -1)

    @settings(max_examples=200)
    @given(radix=radix_st, n=st.integers(0, 10**40))
    def test_roundtrip(self, radix, n):
        d = to_digits(radix, n)
        assert from_digits(radix, d) == n
        assert all(0 < digit < radix[pos] for pos, digit in d)

    def test_from_digits_range(self, walsh):
        with pytest.raises(ValueError):
            from_digits(walsh, {0: 2})


class TestOplus:
    def test_examples(self, m23, walsh):
        assert oplus(m23, 7, 0) == 7
        assert oplus(m23, 1, 3) == 2
        assert oplus(walsh, 1, 1) == 0

    @given(radix=radix_st, a=st.integers(0, 10**30), b=st.integers(0, 10**30), c=st.integers(0, 10**30))
    def test_group_laws(self, radix, a, b, c):
        assert oplus(radix, a, b) == oplus(radix, b, a)
        assert oplus(radix, oplus(radix, a, b), c) == oplus(radix, a, oplus(radix, b, c))
        assert oplus(radix, a, 0) == a

    def test_disjoint_digits_add(self, walsh):
        assert oplus(walsh, 2**40, 5).value == 2**40 + 5


class TestComplement:
    def test_examples(self, m23, walsh):
        assert digit_complement(m23, 0) == 0
        assert digit_complement(m23, 2) == 4
        for n in range(40):
            assert digit_complement(walsh, n) == n

    @given(radix=radix_st, n=st.integers(0, 10**30))
    def test_inverse(self, radix, n):
        assert oplus(radix, n, digit_complement(radix, n)) == 0


class TestGroupOps:
    def test_examples(self, m23):
        x = GroupPoint(m23, (1, 2))
        assert group_add(x, GroupPoint.zero(m23)) == x
        assert group_add(x, x).digits == (0, 1)
        assert group_negate(GroupPoint.zero(m23, 3)) == GroupPoint.zero(m23, 3)

    def test_digit_range(self, m23):
        with pytest.raises(ValueError):
            GroupPoint(m23, (2,))

    @given(data=st.data(), radix=radix_st)
    def test_inverse(self, data, radix):
        x = data.draw(points(radix))
        assert all(d == 0 for d in (x + (-x)).digits)

    def test_cell_roundtrip(self, any_radix):
        for t in range(any_radix.scale(4)):
            assert GroupPoint.from_cell(any_radix, t, 4).cell(4) == t


class TestInterval:
    def test_measure_and_membership(self, m23):
        y = GroupPoint(m23, (1, 2, 0, 1))
        I = VilenkinInterval(y, 2)
        assert I.measure == Fraction(1, 6)
        assert I.contains(GroupPoint(m23, (1, 2, 1)))
        assert not I.contains(GroupPoint(m23, (1, 1)))
        assert I.anchor.digits == (1, 2)

    def test_includes(self, walsh):
        big = VilenkinInterval(GroupPoint(walsh, (1,)), 1)
        small = VilenkinInterval(GroupPoint(walsh, (1, 0, 1)), 3)
        assert big.includes(small) and not small.includes(big)


class TestCharacters:
    def test_rademacher_examples(self, walsh):
        m3 = RadixSequence(period=(3,))
        assert rademacher(0, GroupPoint(walsh, (0,))) == 1
        assert rademacher(0, GroupPoint(walsh, (1,))) == -1
        assert abs(rademacher(0, GroupPoint(m3, (1,))) - cmath.exp(2j * math.pi / 3)) < 1e-15

    def test_character_examples(self, walsh):
        for t in range(8):
            assert character(0, GroupPoint.from_cell(walsh, t, 3)) == 1
        assert character(1, GroupPoint(walsh, (1, 0, 0))) == -1

    @pytest.mark.parametrize("radix", RADICES)
    def test_matches_oracle(self, radix):
        m = oracles.radix_fn(radix.period, radix.prefix)
        level = 4
        for n in range(0, radix.scale(level), 3):
            for t in range(0, radix.scale(level), 5):
                x = GroupPoint.from_cell(radix, t, level)
                assert abs(character(n, x) - oracles.char(m, n, list(x.digits), level)) < 1e-12

    def test_cost_independent_of_magnitude(self, walsh):
        n = SpectralIndex.from_int(2**5000 + 2**3, walsh)
        assert len(n.digits) == 2
        x = GroupPoint(walsh, (0, 0, 0, 1))
        assert character(n, x) == -1

    @settings(max_examples=150)
    @given(data=st.data(), radix=radix_st, n=st.integers(0, 10**24))
    def test_unit_modulus(self, data, radix, n):
        x = data.draw(points(radix, 90))
        assert abs(abs(character(n, x)) - 1) < 1e-12

    @settings(max_examples=150)
    @given(data=st.data(), radix=radix_st, n=st.integers(0, 10**12))
    def test_multiplicative_in_x(self, data, radix, n):
        x, y = data.draw(points(radix, 40)), data.draw(points(radix, 40))
        assert abs(character(n, x + y) - character(n, x) * character(n, y)) < 1e-12

    @settings(max_examples=150)
    @given(data=st.data(), radix=radix_st, n=st.integers(0, 10**12))
    def test_conjugation(self, data, radix, n):
        x = data.draw(points(radix, 40))
        v = character(n, x)
        assert abs(character(n, -x) - v.conjugate()) < 1e-12
        assert abs(character(digit_complement(radix, n), x) - v.conjugate()) < 1e-12

    @settings(max_examples=150)
    @given(data=st.data(), radix=radix_st, n=st.integers(0, 10**12), k=st.integers(0, 10**12))
    def test_multiplicative_in_n(self, data, radix, n, k):
        x = data.draw(points(radix, 40))
        assert abs(character(oplus(radix, n, k), x) - character(n, x) * character(k, x)) < 1e-12
