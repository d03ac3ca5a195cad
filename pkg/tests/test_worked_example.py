"""
Tests for the embedded worked examples and their golden data.
"""

import sympy
import pytest

from exactalg import RATIONAL, FieldSpec, determinant, rank
from graph import named_graph
from isotropic import ias_matrix
from multimatroid import column_matroid, fano, mm_isomorphic
from worked_example import (
    TRIANGLE_M,
    W5_SUBMATRIX,
    bw3_fano_transversal,
    example_pair,
    run_checks,
    triangle_matrix,
    w5_determinant,
    w5_displayed_submatrix,
    w5_symbolic_determinant,
)


@pytest.mark.integration
class TestRunChecks:
    """Test the full self-check."""

    def test_all_pass(self):
        """Test that every golden fixture is reproduced."""
        checks = run_checks()
        failed = [c.name for c in checks if not c.passed]
        assert failed == []
        assert len({c.name for c in checks}) == len(checks)

    @pytest.mark.parametrize("field", ["gf3", "gf5", "rational"])
    def test_with_shelter_checks(self, field):
        """Test the extra shelter checks over a chosen field."""
        spec = FieldSpec.parse(field)
        checks = run_checks(spec)
        names = {c.name for c in checks}
        assert f"shelters_ad_{spec.name}" in names
        assert all(c.passed for c in checks)


@pytest.mark.unit
class TestExamplePieces:
    """Test the individual constructions behind the checks."""

    def test_kappa_pair_words(self):
        """Test the kappa partner of the example."""
        s, s_tilde = example_pair("ad")
        assert s.system.words() == ["abcdbacd"]
        assert s_tilde.system.words() == ["abcdcabd"]
        assert s.gamma.base == s_tilde.gamma.base

    def test_triangle(self):
        """Test the determinant-3 matrix and its rank drop over GF(3)."""
        m = triangle_matrix()
        assert m.to_lists() == TRIANGLE_M
        assert determinant(m) == 3
        assert rank(m.over(FieldSpec.parse("gf3"))) == 2

    def test_w5_submatrix(self):
        """Test the rank-3 submatrix of IAS(W5)."""
        m = w5_displayed_submatrix()
        assert m.to_lists() == W5_SUBMATRIX
        assert rank(m) == 3

    def test_w5_symbolic_determinant(self):
        """Test det = 2bdfhj."""
        b, d, f, h, j = sympy.symbols("b d f h j")
        assert sympy.expand(w5_symbolic_determinant() - 2 * b * d * f * h * j) == 0

    def test_w5_determinant_vanishes_in_characteristic_two(self):
        """Test that every nonzero choice gives 0 over GF(2) and 2 over the rationals."""
        assert w5_determinant((1, 1, 1, 1, 1), FieldSpec.parse("gf2")) == 0
        assert w5_determinant((1, 1, 1, 1, 1), RATIONAL) == 2

    @pytest.mark.slow
    def test_bw3_fano_transversal(self):
        """Test that some phi / chi transversal of BW3 is a Fano matroid."""
        t = bw3_fano_transversal()
        assert t is not None
        assert len(t) == 7
        columns = column_matroid(ias_matrix(named_graph("BW3")), sorted(t, key=str))
        assert mm_isomorphic(columns, column_matroid(fano().matrix)) is not None
