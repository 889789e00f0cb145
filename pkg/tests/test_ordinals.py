from fractions import Fraction

import pytest

from ordlines.ordinals import (
    cnf, ZERO, OMEGA, from_int, to_int, omega_pow, cnf_cmp, cnf_add,
    succ, pred, is_zero, is_successor, is_limit, fund_seq, cnf_str, parse_cnf,
)


def test_basic_shapes():
    assert from_int(0) == ZERO
    assert to_int(from_int(7)) == 7
    assert to_int(OMEGA) is None
    assert cnf((2, 3), (0, 1)) == ((2, 3), (0, 1))
    with pytest.raises(ValueError):
        cnf((0, 1), (2, 3))
    with pytest.raises(ValueError):
        cnf((1, 0))


def test_cmp():
    assert cnf_cmp(ZERO, ZERO) == 0
    assert cnf_cmp(from_int(2), from_int(5)) == -1
    assert cnf_cmp(OMEGA, from_int(100)) == 1
    assert cnf_cmp(omega_pow(2), cnf_add(OMEGA, from_int(99))) == 1
    assert cnf_cmp(cnf((1, 2)), cnf((1, 1), (0, 5))) == 1


def test_add():
    assert cnf_add(from_int(2), from_int(3)) == from_int(5)
    # left-absorption: 3 + w == w
    assert cnf_add(from_int(3), OMEGA) == OMEGA
    assert cnf_add(OMEGA, from_int(1)) == cnf((1, 1), (0, 1))
    assert cnf_add(OMEGA, OMEGA) == cnf((1, 2))
    assert cnf_add(cnf((1, 1), (0, 4)), OMEGA) == cnf((1, 2))
    assert cnf_add(omega_pow(2), cnf_add(OMEGA, from_int(1))) == \
        cnf((2, 1), (1, 1), (0, 1))


def test_succ_pred():
    assert succ(ZERO) == from_int(1)
    assert pred(from_int(1)) == ZERO
    assert pred(ZERO) is None
    assert pred(OMEGA) is None
    assert pred(succ(OMEGA)) == OMEGA
    assert is_limit(OMEGA) and not is_limit(from_int(3)) and not is_limit(ZERO)
    assert is_successor(from_int(3)) and not is_successor(OMEGA)
    assert is_zero(ZERO)


def test_fund_seq():
    assert fund_seq(OMEGA, 0) == ZERO
    assert fund_seq(OMEGA, 3) == from_int(3)
    s = [fund_seq(omega_pow(2), k) for k in range(4)]
    assert s[0] == ZERO
    assert s[1] == OMEGA
    assert s[2] == cnf((1, 2))
    for a, b in zip(s, s[1:]):
        assert cnf_cmp(a, b) == -1
        assert cnf_cmp(b, omega_pow(2)) == -1
    # w*2: sequence w+k
    assert fund_seq(cnf((1, 2)), 5) == cnf((1, 1), (0, 5))
    with pytest.raises(ValueError):
        fund_seq(from_int(3), 0)


def test_str_roundtrip():
    vals = [ZERO, from_int(9), OMEGA, cnf((1, 2), (0, 1)),
            cnf((3, 2), (1, 1), (0, 7)), omega_pow(5)]
    for v in vals:
        assert parse_cnf(cnf_str(v)) == v
    assert cnf_str(cnf((2, 1), (0, 3))) == "w^2+3"
    assert parse_cnf("w*2+1") == cnf((1, 2), (0, 1))
