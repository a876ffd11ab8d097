import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parry_ac.errors import ConstraintViolation, ExponentRangeError, ResourceLimit, SpecSyntaxError
from parry_ac.oracle import parikh
from parry_ac.substitution import (
    FIBONACCI,
    TRIBONACCI,
    Balance,
    ParrySubstitution,
    apply,
    characteristic_polynomial,
    fixed_point_prefix,
    incidence_matrix,
    parse_spec,
    power_image,
    show,
    spectral_balance_check,
    u_sequence,
    validate,
    vec_mat,
    word,
)

NONSIMPLE = ParrySubstitution.nonsimple(1, 1, (2, 1))


def naive_images(sub):
    """Rules written out as strings, independently of ParrySubstitution.images."""
    A = sub.size
    rules = {}
    for l, a in enumerate(sub.alphas):
        if l < A - 1:
            rules[str(l)] = "0" * a + str(l + 1)
        elif sub.kind == "simple":
            rules[str(l)] = "0" * a
        else:
            rules[str(l)] = "0" * a + str(sub.m)
    return rules


def naive_iterate(sub, w, k):
    rules = naive_images(sub)
    for _ in range(k):
        w = "".join(rules[ch] for ch in w)
    return w


class TestParse:
    def test_simple(self):
        sub = parse_spec('{"kind":"simple","alphas":[1,1]}')
        assert sub == ParrySubstitution("simple", 2, 0, (1, 1))

    def test_nonsimple(self):
        sub = parse_spec({"kind": "nonsimple", "m": 1, "p": 1, "alphas": [2, 1]})
        assert (sub.kind, sub.m, sub.p, sub.alphas) == ("nonsimple", 1, 1, (2, 1))

    def test_empty_alphabet(self):
        with pytest.raises(SpecSyntaxError):
            parse_spec('{"kind":"simple","alphas":[]}')

    @pytest.mark.parametrize(
        "text",
        ["{not json", '{"kind":"weird","alphas":[1]}', '{"kind":"nonsimple","alphas":[1,1]}', "simple:a,b", "foo"],
    )
    def test_malformed(self, text):
        with pytest.raises(SpecSyntaxError):
            parse_spec(text)

    @pytest.mark.parametrize(
        "doc",
        [
            {"kind": "simple", "alphas": [1, -1]},
            {"kind": "nonsimple", "m": 0, "p": 2, "alphas": [1, 1]},
            {"kind": "nonsimple", "m": 2, "p": -1, "alphas": [1]},
        ],
    )
    def test_range(self, doc):
        with pytest.raises(ExponentRangeError):
            parse_spec(doc)

    def test_mp_must_match_length(self):
        with pytest.raises(SpecSyntaxError):
            parse_spec({"kind": "nonsimple", "m": 1, "p": 2, "alphas": [2, 1]})

    def test_shorthand(self):
        assert parse_spec("simple:1,1") == FIBONACCI
        assert parse_spec("nonsimple:m=1,p=1:2,1") == NONSIMPLE

    @pytest.mark.parametrize("sub", [FIBONACCI, TRIBONACCI, NONSIMPLE])
    def test_round_trip(self, sub):
        assert parse_spec(json.dumps(sub.to_dict())) == sub
        assert parse_spec(sub.shorthand()) == sub


class TestValidate:
    def test_fibonacci_ok(self):
        validate(FIBONACCI)
        validate(TRIBONACCI)
        validate(NONSIMPLE)

    @pytest.mark.parametrize(
        "sub, failed",
        [
            (ParrySubstitution.simple((1, 0)), "alpha_{m-1}>=1"),
            (ParrySubstitution.simple((1, 2)), "alpha_l<=alpha_0"),
            (ParrySubstitution.simple((0, 0)), "alpha_0>=1"),
            (ParrySubstitution.nonsimple(1, 2, (2, 0, 0)), "alpha_l>=1 for some l in m..m+p-1"),
        ],
    )
    def test_violations(self, sub, failed):
        with pytest.raises(ConstraintViolation) as info:
            validate(sub)
        assert info.value.constraint == failed


class TestImages:
    def test_apply(self):
        assert show(apply(FIBONACCI, word("0"))) == "01"
        assert show(apply(FIBONACCI, word("01"))) == "010"
        assert apply(TRIBONACCI, b"") == b""

    def test_power_image(self):
        assert show(power_image(FIBONACCI, 0, 3)) == "01001"
        assert show(power_image(TRIBONACCI, 0, 2)) == "0102"
        assert power_image(TRIBONACCI, 2, 0) == bytes([2])

    @pytest.mark.parametrize("sub", [FIBONACCI, TRIBONACCI, NONSIMPLE])
    def test_power_image_matches_naive(self, sub):
        for letter in range(sub.size):
            for k in range(8):
                assert show(power_image(sub, letter, k)) == naive_iterate(sub, str(letter), k)

    def test_power_image_cap(self):
        with pytest.raises(ResourceLimit):
            power_image(FIBONACCI, 0, 40, cap=1000)

    def test_fixed_point_prefix(self):
        assert show(fixed_point_prefix(FIBONACCI, 5)) == "01001"
        assert show(fixed_point_prefix(TRIBONACCI, 7)) == "0102010"
        assert fixed_point_prefix(NONSIMPLE, 1) == b"\x00"
        assert fixed_point_prefix(FIBONACCI, 0) == b""

    def test_prefix_cap(self):
        with pytest.raises(ResourceLimit):
            fixed_point_prefix(FIBONACCI, 10**6, cap=1000)

    @pytest.mark.parametrize("sub", [FIBONACCI, TRIBONACCI, NONSIMPLE])
    def test_prefix_consistency(self, sub):
        long = fixed_point_prefix(sub, 5000)
        for n in (0, 1, 17, 999, 4999):
            assert fixed_point_prefix(sub, n) == long[:n]
        for k, U in enumerate(u_sequence(sub, 12)):
            assert fixed_point_prefix(sub, U) == power_image(sub, 0, k)


class TestMatrix:
    def test_examples(self):
        assert incidence_matrix(FIBONACCI) == ((1, 1), (1, 0))
        assert incidence_matrix(TRIBONACCI) == ((1, 1, 0), (1, 0, 1), (1, 0, 0))
        assert incidence_matrix(NONSIMPLE) == ((2, 1), (1, 1))

    @pytest.mark.parametrize("sub", [FIBONACCI, TRIBONACCI, NONSIMPLE])
    def test_rows(self, sub):
        M = incidence_matrix(sub)
        for l, row in enumerate(M):
            assert sum(row) == len(sub.images[l])
            assert row[0] == sub.alphas[l]

    @settings(max_examples=60, deadline=None)
    @given(
        st.sampled_from([FIBONACCI, TRIBONACCI, NONSIMPLE, ParrySubstitution.simple((3, 2, 3))]),
        st.data(),
    )
    def test_parikh_morphism(self, sub, data):
        w = bytes(data.draw(st.lists(st.integers(0, sub.size - 1), max_size=1000)))
        image = apply(sub, w)
        expected = vec_mat(parikh(w, sub.size), incidence_matrix(sub))
        assert parikh(image, sub.size) == expected
        assert len(image) == sum(expected)


class TestUSequence:
    def test_examples(self):
        assert u_sequence(FIBONACCI, 4) == (1, 2, 3, 5, 8)
        assert u_sequence(TRIBONACCI, 3) == (1, 2, 4, 7)
        assert u_sequence(NONSIMPLE, 0) == (1,)

    @pytest.mark.parametrize("sub", [FIBONACCI, TRIBONACCI, NONSIMPLE])
    def test_lengths_and_recurrence(self, sub):
        us = u_sequence(sub, 25)
        assert all(a < b for a, b in zip(us, us[1:]))
        for k in range(10):
            assert us[k] == len(power_image(sub, 0, k))
        # Cayley-Hamilton: U obeys the recurrence of the characteristic polynomial
        poly = characteristic_polynomial(incidence_matrix(sub))
        deg = len(poly) - 1
        for j in range(deg, 21):
            assert sum(poly[i] * us[j - i] for i in range(deg + 1)) == 0

    def test_big_integers(self):
        us = u_sequence(FIBONACCI, 200)
        assert us[200] > 2**63
        assert us[200] == us[199] + us[198]


class TestSpectral:
    @pytest.mark.parametrize("sub", [FIBONACCI, TRIBONACCI, NONSIMPLE, ParrySubstitution.simple((2, 1, 2))])
    def test_charpoly_roots_match_eigvals(self, sub):
        M = np.array(incidence_matrix(sub), dtype=float)
        roots = np.sort_complex(np.roots(characteristic_polynomial(incidence_matrix(sub))))
        assert np.allclose(roots, np.sort_complex(np.linalg.eigvals(M)), atol=1e-9)

    def test_charpoly_examples(self):
        assert characteristic_polynomial(incidence_matrix(FIBONACCI)) == [1, -1, -1]
        assert characteristic_polynomial(incidence_matrix(TRIBONACCI)) == [1, -1, -1, -1]
        assert characteristic_polynomial(incidence_matrix(NONSIMPLE)) == [1, -3, 1]

    @pytest.mark.parametrize("sub", [FIBONACCI, TRIBONACCI, NONSIMPLE])
    def test_certified(self, sub):
        assert spectral_balance_check(sub) is Balance.CERTIFIED

    def test_inconclusive_outside_disc(self):
        # x^8 - x^7 - 1 has non-dominant roots of modulus > 1
        sub = ParrySubstitution.simple((1, 0, 0, 0, 0, 0, 0, 1))
        moduli = sorted(abs(np.linalg.eigvals(np.array(incidence_matrix(sub), dtype=float))))
        assert moduli[-2] > 1
        assert spectral_balance_check(sub) is Balance.INCONCLUSIVE

    def test_inconclusive_on_circle(self):
        sub = ParrySubstitution.simple((1, 1, 0, 1))
        moduli = sorted(abs(np.linalg.eigvals(np.array(incidence_matrix(sub), dtype=float))))
        assert moduli[-2] == pytest.approx(1.0, abs=1e-9)
        assert spectral_balance_check(sub) is Balance.INCONCLUSIVE

    def test_tolerance_boundary(self):
        # second modulus ~0.618 is certified only when the tolerance leaves room
        assert spectral_balance_check(FIBONACCI, tol=0.3) is Balance.CERTIFIED
        assert spectral_balance_check(FIBONACCI, tol=0.4) is Balance.INCONCLUSIVE


def test_words_render():
    assert show(word("0102")) == "0102"
    assert word("10,3,0") == bytes([10, 3, 0])
    assert show(bytes([10, 3])) == "10,3"
    rng = random.Random(1)
    w = bytes(rng.randrange(3) for _ in range(50))
    assert word(show(w)) == w
