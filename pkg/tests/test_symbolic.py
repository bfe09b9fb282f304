"""Parser, weight bookkeeping, canonicalizer, and numeric evaluation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinorwave.core.spinor import ComponentSpinor, random_spinor
from spinorwave.core.indices import spinor_signature
from spinorwave.errors import (
    ParseError,
    UnsupportedExpressionError,
    WeightError,
)
from spinorwave.symbolic import (
    KernelTable,
    Parser,
    canonicalize,
    component_eval,
    expr_weight,
)

RNG = np.random.default_rng(99)


def fresh():
    table = KernelTable()
    return table, Parser(table)


class TestParser:
    def test_scalar_contraction_has_no_free_indices(self):
        table, parser = fresh()
        expr = parser.parse_expression("eps^{A B} eps_{A B}")
        assert expr.free_indices() == {}

    def test_mixed_phi_free_set_and_weight(self):
        table, parser = fresh()
        expr = parser.parse_expression("phi_{A}^{B}")
        free = expr.free_indices()
        assert sorted(free) == ["A", "B"]
        assert not free["A"].up and free["B"].up
        assert expr_weight(expr, table) == (0, 0)

    def test_mixed_free_sets_rejected(self):
        table, parser = fresh()
        with pytest.raises(ParseError, match="mixed free-index"):
            parser.parse_expression("phi_{A}^{B} + psi_{A C}")

    def test_unbalanced_dummy_rejected(self):
        table, parser = fresh()
        with pytest.raises(ParseError, match="unbalanced|equal variance"):
            parser.parse_expression("theta_{A A}")

    def test_syntax_error_carries_position(self):
        table, parser = fresh()
        with pytest.raises(ParseError, match="position"):
            parser.parse_expression("phi_{A}^{B} +")

    def test_weight_inhomogeneous_sum_rejected(self):
        table, parser = fresh()
        with pytest.raises(WeightError):
            parser.parse_expression("theta_{A B} + phi_{A B}")

    def test_rational_coefficients(self):
        table, parser = fresh()
        expr = parser.parse_expression("2/3 R - 1/6 R")
        out = canonicalize(expr, table)
        assert len(out.terms) == 1
        assert str(out.terms[0].coeff) == "1/2"

    def test_parenthesized_operator_sum(self):
        table, parser = fresh()
        a = parser.parse_expression("(Box + 1/3 R) phi_{A}^{B}")
        b = parser.parse_expression("Box phi_{A}^{B} + 1/3 R phi_{A}^{B}")
        assert canonicalize(a - b, table).is_zero


class TestWeights:
    def test_declared_weights(self):
        table, parser = fresh()
        cases = {
            "phi_{A}^{B}": (0, 0),
            "phi_{A B}": (-1, 0),
            "Delta^{A B}": (1, 0),
            "vartheta_sym_{a (B C)}": (-1, 0),
            "vartheta_sym_{a}^{(B C)}": (1, 0),
            "eps_{A B}": (-1, 0),
            "eps^{A B}": (1, 0),
            "Box phi_{A}^{B}": (0, 0),
        }
        for text, weight in cases.items():
            assert expr_weight(parser.parse_expression(text), table) == weight, text

    def test_primed_sector_antiweight(self):
        table, parser = fresh()
        assert expr_weight(parser.parse_expression("phi_p_{A' B'}"), table) == (0, -1)
        assert expr_weight(parser.parse_expression("eps^{A' B'}"), table) == (0, 1)


class TestCanonicalize:
    def test_eps_contraction_scalar(self):
        table, parser = fresh()
        out = canonicalize(parser.parse_expression("eps^{A B} eps_{A B}"), table)
        assert len(out.terms) == 1 and out.terms[0].coeff == 2 and not out.terms[0].factors

    def test_antisymmetrized_symmetric_kernel_vanishes(self):
        table, parser = fresh()
        assert canonicalize(parser.parse_expression("phi_{[A B]}"), table).is_zero

    def test_decomposition_identity(self):
        table, parser = fresh()
        lhs, rhs = parser.parse_identity(
            "theta_{A B} == theta_{(A B)} + 1/2 eps_{A B} theta_{C}^{C}"
        )
        assert canonicalize(lhs - rhs, table).is_zero

    def test_idempotent(self):
        table, parser = fresh()
        expr = parser.parse_expression(
            "theta_{A B} - theta_{(A B)} + eps_{A B} theta_{C}^{C}"
        )
        once = canonicalize(expr, table)
        assert canonicalize(once, table) == once

    @settings(max_examples=20, deadline=None)
    @given(perm=st.permutations(["C", "D", "H"]))
    def test_dummy_relabel_invariance(self, perm):
        table, parser = fresh()
        c, d, _ = perm
        base = f"Psi_{{A {d}}}^{{B {c}}} phi_{{{c}}}^{{{d}}}"
        ref = "Psi_{A D}^{B C} phi_{C}^{D}"
        e1 = canonicalize(parser.parse_expression(base), table)
        e2 = canonicalize(parser.parse_expression(ref), table)
        assert e1 == e2

    def test_eps_symmetric_contraction_term_dropped(self):
        table, parser = fresh()
        out = canonicalize(parser.parse_expression("phi_{A B} eps^{A B}"), table)
        assert out.is_zero


class TestComponentEval:
    def test_eps_contraction_value(self):
        table, parser = fresh()
        out = component_eval(parser.parse_expression("eps^{A B} eps_{A B}"), {}, table)
        assert out.data == pytest.approx(2.0)

    def test_curvature_action_reduces_at_unit_coefficient(self):
        # with the totally symmetric curvature set to zero and R = 6 the
        # curvature action is the bare metric-spinor term
        table, parser = fresh()
        rhs = parser.parse_expression(
            "1/6 R M^{B D} phi_{D}^{C} - omega^{(A B C D)} phi_{A}^{H} M_{H D}"
        )
        bare = parser.parse_expression("M^{B D} phi_{D}^{C}")
        low = RNG.standard_normal((2, 2)) + 1j * RNG.standard_normal((2, 2))
        phi = ComponentSpinor(spinor_signature("uu"), 0.5 * (low + low.T))
        bindings = {
            "R": 6.0,
            "phi": phi,
            "omega": ComponentSpinor.zeros(spinor_signature("uuuu")),
        }
        got = component_eval(rhs, bindings, table)
        want = component_eval(bare, {"phi": phi}, table)
        assert got.allclose(want, atol=1e-12)

    def test_verified_identity_holds_numerically(self):
        table, parser = fresh()
        lhs, rhs = parser.parse_identity(
            "theta_{A B} == theta_{(A B)} + 1/2 eps_{A B} theta_{C}^{C}"
        )
        diff = lhs - rhs
        worst = 0.0
        for _ in range(100):
            theta = random_spinor(spinor_signature("uu"), RNG)
            worst = max(worst, component_eval(diff, {"theta": theta}, table).max_abs())
        assert worst < 1e-10

    def test_unbound_kernel_rejected(self):
        table, parser = fresh()
        with pytest.raises(UnsupportedExpressionError, match="unbound"):
            component_eval(parser.parse_expression("phi_{A B}"), {}, table)

    def test_derivative_rejected(self):
        table, parser = fresh()
        expr = parser.parse_expression("Box phi_{A}^{B}")
        with pytest.raises(UnsupportedExpressionError, match="operator"):
            component_eval(expr, {"phi": ComponentSpinor.zeros(spinor_signature("uu"))}, table)
