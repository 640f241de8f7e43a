from pdtoda.rationals import Q, as_q, q_from_str, q_str

import pytest


def test_reduction_and_positive_denominator():
    q = Q(4, -6)
    assert q.numerator == -2 and q.denominator == 3
    assert Q(0, 5) == Q(0, 1)


def test_parse_and_format_roundtrip():
    for text in ["3/4", "-7/2", "5", "0", "-12"]:
        assert q_str(q_from_str(text)) == text
    assert q_str(Q(10, 5)) == "2"


def test_as_q_rejects_floats():
    with pytest.raises(TypeError):
        as_q(0.5)


def test_as_q_accepts_fractions():
    from fractions import Fraction

    assert as_q(Fraction(3, 9)) == Q(1, 3)
