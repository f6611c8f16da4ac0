"""Parameter validation, coexistence conditions, and the config format."""

import pytest
from hypothesis import given, strategies as st

from wetlandsim.errors import InvalidParams, MalformedData
from wetlandsim.params import (
    ModelParams,
    check_e1_condition,
    check_e2_condition,
    check_persistence_condition,
    format_params,
    parse_params,
)


def mk(**kw):
    base = dict(d1=1.0, d2=1.0, c=1.0, alpha=0.5, m=1.0, d=0.9, h1=0.0, h2=0.0, r=1.0)
    base.update(kw)
    return ModelParams(**base)


class TestValidation:
    @pytest.mark.parametrize("name", ["d1", "d2", "c", "alpha", "m", "d", "r"])
    def test_strictly_positive_scalars(self, name):
        with pytest.raises(InvalidParams):
            mk(**{name: 0.0})
        with pytest.raises(InvalidParams):
            mk(**{name: -1.0})

    @pytest.mark.parametrize("name", ["h1", "h2"])
    def test_interference_may_be_zero(self, name):
        assert getattr(mk(**{name: 0.0}), name) == 0.0
        with pytest.raises(InvalidParams):
            mk(**{name: -0.1})


class TestConditions:
    def test_human_free_benchmark_set(self):
        assert check_e1_condition(mk()) is True

    def test_boundary_d_equals_m_excluded(self):
        assert check_e1_condition(mk(d=1.0, m=1.0)) is False

    def test_low_death_rate_fails(self):
        # d/m = 0.3 < 1 - alpha/c = 0.5
        assert check_e1_condition(mk(d=0.3)) is False

    def test_overdev_benchmark_set(self):
        assert check_e2_condition(mk(h1=0.1, h2=0.01)) is True

    def test_e2_boundary_excluded(self):
        assert check_e2_condition(mk(h1=0.1, h2=0.1, d=0.9, m=1.0)) is False

    @given(
        c=st.floats(0.1, 5.0),
        alpha=st.floats(0.1, 5.0),
        m=st.floats(0.1, 5.0),
        d=st.floats(0.01, 5.0),
    )
    def test_e2_reduces_to_e1_without_humans(self, c, alpha, m, d):
        p = mk(c=c, alpha=alpha, m=m, d=d, h1=0.0, h2=0.0)
        assert check_e2_condition(p) == check_e1_condition(p)

    def test_persistence_example(self):
        p = mk(c=0.4, alpha=1.0, h1=0.1, h2=0.1, d=0.3, m=1.0)
        assert check_persistence_condition(p) is True

    def test_persistence_fails_for_strong_predation(self):
        # c/alpha = 2 makes the fish lower bound negative
        assert check_persistence_condition(mk()) is False

    def test_persistence_boundary_excluded(self):
        p = mk(c=0.4, alpha=1.0, h1=0.1, h2=0.7, d=0.3, m=1.0)  # h2 = m - d
        assert check_persistence_condition(p) is False


class TestConfigFormat:
    def test_roundtrip(self):
        p = mk(d1=0.25, h2=0.125, r=6.044)
        assert parse_params(format_params(p)) == p

    def test_comments_and_blanks(self):
        text = """
        # benchmark parameters
        d1 = 1.0   # fish diffusion
        d2 = 1.0
        c = 1.0
        alpha = 0.5

        m = 1.0
        d = 0.9
        h1 = 0.0
        h2 = 0.0
        r = 1.0
        """
        assert parse_params(text) == mk()

    def test_unknown_key_rejected(self):
        with pytest.raises(MalformedData, match="unknown parameter"):
            parse_params("bogus = 1\n")

    def test_missing_keys_named(self):
        with pytest.raises(MalformedData, match="missing parameters"):
            parse_params("d1 = 1\n")

    def test_bad_value_with_line_number(self):
        text = format_params(mk()).replace("r = 1.0", "r = forty")
        with pytest.raises(MalformedData, match="cannot parse value"):
            parse_params(text)

    def test_duplicate_rejected(self):
        with pytest.raises(MalformedData, match="duplicate"):
            parse_params(format_params(mk()) + "d1 = 2\n")

    def test_invalid_values_surface_as_malformed(self):
        text = format_params(mk()).replace("d = 0.9", "d = -0.9")
        with pytest.raises(MalformedData):
            parse_params(text)
