import pytest
from hypothesis import given, settings, strategies as st

from parry_ac.errors import DigitRange
from parry_ac.numeration import (
    Numeration,
    format_digits,
    greedy_urep,
    is_canonical,
    parse_digits,
    prefix_from_digits,
    prefix_parikh,
    urep_value,
)
from parry_ac.oracle import parikh
from parry_ac.substitution import FIBONACCI, TRIBONACCI, ParrySubstitution, apply, fixed_point_prefix, show

NONSIMPLE = ParrySubstitution.nonsimple(1, 1, (2, 1))
ALL = [FIBONACCI, TRIBONACCI, NONSIMPLE]


def satisfies_greedy_condition(us, digits):
    """Every lower-order tail sum_{i<=j} d_i U_i stays below U_{j+1}."""
    k = len(digits) - 1
    tail = 0
    for j in range(k + 1):
        tail += digits[k - j] * us[j]
        if tail >= us[j + 1]:
            return False
    return True


def test_examples():
    assert greedy_urep(Numeration(FIBONACCI), 7) == (1, 0, 1, 0)
    assert greedy_urep((1, 2, 3, 5, 8), 7) == (1, 0, 1, 0)
    assert Numeration(NONSIMPLE).values(2) == (1, 3, 8)
    assert greedy_urep(Numeration(NONSIMPLE), 5) == (1, 2)
    assert greedy_urep(Numeration(TRIBONACCI), 0) == ()


def test_value_examples():
    num = Numeration(FIBONACCI)
    assert urep_value(num, (1, 0, 1, 0)) == 7
    assert urep_value(num, (1,)) == 1
    assert urep_value(num, ()) == 0


def test_value_digit_range():
    with pytest.raises(DigitRange):
        urep_value(Numeration(FIBONACCI), (2,))
    with pytest.raises(DigitRange):
        urep_value((1, 2, 3), (1, -1))


def test_short_explicit_sequence():
    with pytest.raises(ValueError):
        greedy_urep((1, 2, 3), 3)


@pytest.mark.parametrize("sub", ALL)
def test_greedy_characterization(sub):
    num = Numeration(sub)
    us = num.values(30)
    for n in range(1, 3000):
        digits = greedy_urep(num, n)
        assert digits[0] >= 1
        assert all(0 <= d <= sub.alpha0 for d in digits)
        assert satisfies_greedy_condition(us, digits)
        assert urep_value(num, digits) == n


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(ALL), st.integers(1, 10**30))
def test_round_trip_large(sub, n):
    num = Numeration(sub)
    digits = greedy_urep(num, n)
    assert urep_value(num, digits) == n
    assert digits[0] != 0 and max(digits) <= sub.alpha0


def test_canonical_predicate():
    num = Numeration(FIBONACCI)
    assert is_canonical(num, (1, 0, 1))
    assert not is_canonical(num, (1, 1))  # value 3, greedy "100"
    assert not is_canonical(num, (0, 1))
    assert is_canonical(num, ())


def test_prefix_examples():
    assert show(prefix_from_digits(FIBONACCI, (1, 0, 1, 0))) == "0100101"
    assert show(prefix_from_digits(FIBONACCI, (1,))) == "0"
    assert prefix_from_digits(FIBONACCI, ()) == b""
    assert prefix_parikh(FIBONACCI, (1, 0, 1, 0)) == (4, 3)
    assert prefix_parikh(FIBONACCI, (1,)) == (1, 0)
    assert prefix_parikh(TRIBONACCI, (1, 0)) == (1, 1, 0)


@pytest.mark.parametrize("sub", ALL)
def test_prefix_parikh_agrees(sub):
    num = Numeration(sub)
    u = fixed_point_prefix(sub, 10_001)
    for n in range(0, 10_001, 7):
        digits = greedy_urep(num, n)
        assert prefix_parikh(num, digits) == parikh(u[:n], sub.size)


@pytest.mark.parametrize("sub", ALL)
def test_append_digit(sub):
    num = Numeration(sub)
    for n in range(0, 1001):
        rep = greedy_urep(num, n)
        for d in range(sub.alpha0 + 1):
            ext = rep + (d,)
            if not ext or ext[0] == 0 or not is_canonical(num, ext):
                continue
            N = urep_value(num, ext)
            assert fixed_point_prefix(sub, N) == apply(sub, fixed_point_prefix(sub, n)) + b"\x00" * d


def test_format():
    assert format_digits((1, 0, 1, 0)) == "1010"
    assert format_digits((10, 3, 0)) == "10,3,0"
    assert format_digits((1, 0), alpha0=12) == "1,0"
    assert parse_digits("10,3,0") == (10, 3, 0)
    assert parse_digits("1010") == (1, 0, 1, 0)
    assert parse_digits("") == ()
