import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwalk.arithmetic import (
    QuadraticForm,
    compute_g,
    is_perfect_square,
    is_quadratic_integer,
    is_squarefree,
    nearest_integer,
    recognize_quadratic_pair,
    squarefree_decompose,
)
from qwalk.errors import InputError

LIMIT = 10**6


def largest_square_divisor_table(limit):
    """sq[D] = largest k*k dividing D, by sieving over k (independent of trial division)."""
    sq = np.ones(limit + 1, dtype=np.int64)
    for k in range(2, math.isqrt(limit) + 1):
        sq[k * k :: k * k] = k * k
    return sq


def test_squarefree_examples():
    assert squarefree_decompose(32) == (4, 2)
    assert squarefree_decompose(12) == (2, 3)
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(73) == (1, 73)
    assert squarefree_decompose(1009**2 * 6) == (1009, 6)
    assert squarefree_decompose(1013 * 1019) == (1, 1013 * 1019)


@pytest.mark.parametrize("bad", [0, -4, 2.5])
def test_squarefree_rejects(bad):
    with pytest.raises(InputError):
        squarefree_decompose(bad)


def test_squarefree_exhaustive():
    sq = largest_square_divisor_table(LIMIT)
    for D in range(1, LIMIT + 1):
        a, b = squarefree_decompose(D)
        assert a * a * b == D
        assert a * a == sq[D], D


def test_perfect_square():
    assert not is_perfect_square((6 + 3 - 2) ** 2 + 4 * 6)  # 73
    assert is_perfect_square(0) and is_perfect_square(49)
    assert not is_perfect_square(-1)


def test_gap_law_exhaustive():
    for r in range(2, 101):
        for q in range(1, 2 * r + 1):
            D = (q + r - 2) ** 2 + 4 * q
            assert (q + r - 2) ** 2 < D < (q + r + 2) ** 2
            assert D != (q + r) ** 2
            assert not is_perfect_square(D)
    # degree one is the only case where D hits (q + r)**2
    assert all((q - 1) ** 2 + 4 * q == (q + 1) ** 2 for q in range(0, 3))


class TestRecognition:
    def test_c4_pair(self):
        pair = recognize_quadratic_pair(4 + 2 * math.sqrt(2), 4 - 2 * math.sqrt(2))
        assert pair.plus == QuadraticForm(8, 4, 2) and pair.minus == QuadraticForm(8, -4, 2)
        assert pair.algebraic_integers

    def test_golden_ratio(self):
        pair = recognize_quadratic_pair((1 + math.sqrt(5)) / 2, (1 - math.sqrt(5)) / 2)
        assert pair.plus.to_dict() == {"a": 1, "b": 1, "delta": 5}
        assert pair.algebraic_integers

    def test_not_integer(self):
        pair = recognize_quadratic_pair((1 + math.sqrt(2)) / 2, (1 - math.sqrt(2)) / 2)
        assert pair.plus.delta == 2 and not pair.algebraic_integers

    def test_failure_value(self):
        assert recognize_quadratic_pair(math.pi, 1.0) is None
        assert recognize_quadratic_pair(math.sqrt(2) + 0.3, 0.1) is None

    def test_degenerate_integer(self):
        pair = recognize_quadratic_pair(3.0, 3.0)
        assert pair.plus == pair.minus == QuadraticForm(6, 0, 1)
        assert pair.plus.value == 3.0 and pair.algebraic_integers

    def test_rational_pair_folds(self):
        pair = recognize_quadratic_pair(5.0, 1.0)
        assert pair.plus == QuadraticForm(10, 0, 1) and pair.minus == QuadraticForm(2, 0, 1)

    def test_order(self):
        with pytest.raises(InputError):
            recognize_quadratic_pair(1.0, 2.0)

    def test_parity_rules(self):
        assert is_quadratic_integer(1, 1, 5) and is_quadratic_integer(2, 4, 5)
        assert not is_quadratic_integer(1, 2, 5)
        assert is_quadratic_integer(2, 2, 3) and not is_quadratic_integer(1, 1, 3)
        assert is_quadratic_integer(4, 0, 1) and not is_quadratic_integer(3, 0, 1)

    def test_form_validation(self):
        with pytest.raises(ValueError):
            QuadraticForm(1, 1, 8)


@given(st.integers(-40, 40), st.integers(1, 30), st.sampled_from([2, 3, 5, 6, 7, 10, 13, 17, 73]))
def test_recognition_roundtrip(a, b, delta):
    hi, lo = (a + b * math.sqrt(delta)) / 2, (a - b * math.sqrt(delta)) / 2
    pair = recognize_quadratic_pair(hi, lo)
    assert pair is not None
    assert (pair.plus.a, pair.plus.b, pair.plus.delta) == (a, b, delta)
    assert abs(pair.plus.value - hi) < 1e-9 and abs(pair.minus.value - lo) < 1e-9
    assert pair.algebraic_integers == is_quadratic_integer(a, b, delta)


class TestG:
    def test_c4(self):
        assert compute_g([4, 2, 0], 4) == 2

    def test_cube(self):
        assert compute_g([6, 4, 2, 0], 6) == 2

    def test_cocktail3(self):
        assert compute_g([8, 4, 2], 8) == 2

    def test_quadratic(self):
        r2 = math.sqrt(2)
        assert compute_g([r2, 0.0, -r2], r2, delta=2) == 1

    def test_trivial(self):
        with pytest.raises(InputError, match="trivial"):
            compute_g([5], 5)

    def test_not_integral(self):
        with pytest.raises(InputError):
            compute_g([4, 1.5], 4)

    @given(st.lists(st.integers(0, 200), min_size=2, max_size=6))
    def test_divides(self, qs):
        q0 = max(qs)
        if all(q == q0 for q in qs):
            return
        g = compute_g(qs, q0)
        assert all((q0 - q) % g == 0 for q in qs)


def test_nearest_integer():
    assert nearest_integer(2.99999999) == 3
    assert nearest_integer(2.9999) is None
    assert is_squarefree(30) and not is_squarefree(12)
