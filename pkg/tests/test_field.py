from __future__ import annotations

import numpy as np
import pytest

from fpharmonics.field import (MultChar, cached_field, eval_add_char,
                               eval_mult_char, new_field)


def test_primitive_root_p7():
    ctx = new_field(7)
    assert ctx.g == 3
    assert ctx.dlog[3] == 1
    assert ctx.dlog[2] == 2


def test_primitive_root_p5():
    ctx = new_field(5)
    assert ctx.g == 2
    # 2 generates {2, 4, 3, 1}
    assert [ctx.pow_g[a] for a in range(4)] == [1, 2, 4, 3]


def test_composite_rejected_with_witness():
    with pytest.raises(ValueError, match="3"):
        new_field(9)


def test_add_char_fixtures():
    assert eval_add_char(cached_field(7), 0, 5) == pytest.approx(1)
    assert eval_add_char(cached_field(5), 1, 1) == pytest.approx(
        np.exp(2j * np.pi / 5))
    # r=3, x=2 -> e_p(6)
    assert eval_add_char(cached_field(7), 3, 2) == pytest.approx(
        np.exp(2j * np.pi * 6 / 7))


def test_mult_char_fixtures():
    ctx5 = cached_field(5)
    assert eval_mult_char(cached_field(7), MultChar(0), 4) == pytest.approx(1)
    # dlog_2(4) = 2, e(2*2/4) = 1
    assert eval_mult_char(ctx5, MultChar(2), 4) == pytest.approx(1)
    # chi(0) = 1 convention
    assert eval_mult_char(ctx5, MultChar(1), 0) == pytest.approx(1)


def test_dlog_pow_inverse():
    ctx = cached_field(31)
    for x in range(1, 31):
        assert ctx.pow_g[ctx.dlog[x]] == x


def test_tables_unit_modulus():
    ctx = cached_field(13)
    assert np.allclose(np.abs(ctx.roots_p), 1)
    assert np.allclose(np.abs(ctx.roots_pm1), 1)
