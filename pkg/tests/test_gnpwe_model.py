"""
Tests for src/model/gnpwe.py
"""
from fractions import Fraction

import pytest

from src.errors import InvalidDimensionError, JetDomainError
from src.jet import DerivIndex, DiffPolynomial
from src.model.gnpwe import (
    Characteristic,
    adjoint_residual,
    bind_parameters,
    build_equation,
    build_fluxes,
    characteristic_residual,
    closed_form_residual,
    derive_phi_system,
    divergence_residual,
    is_nontrivial,
    split_characteristic_residual,
)

t = DiffPolynomial.var("t")
x = DiffPolynomial.var("x")
y1 = DiffPolynomial.var("y1")
a = DiffPolynomial.param("a")
b = DiffPolynomial.param("b")
u = DiffPolynomial.jet()
jet = DiffPolynomial.jet
f0, f1, f2 = (DiffPolynomial.fsym(k) for k in range(3))


def chi_of(p) -> Characteristic:
    return Characteristic(p)


@pytest.fixture
def eq1():
    return build_equation(1)


class TestEquation:
    def test_delta_n1(self, eq1):
        expected = jet("tx") + f2 * jet("t") ** 2 + f1 * jet("tt") + a * jet("ttt") + b * jet("y1y1")
        assert eq1.delta == expected

    @pytest.mark.parametrize("n", [2, 3])
    def test_delta_has_full_laplacian(self, n):
        delta = build_equation(n).delta
        laplacian = sum((b * jet(f"y{j}y{j}") for j in range(1, n + 1)), DiffPolynomial.zero())
        assert delta == jet("tx") + f2 * jet("t") ** 2 + f1 * jet("tt") + a * jet("ttt") + laplacian

    def test_n_must_be_positive(self):
        with pytest.raises(InvalidDimensionError):
            build_equation(0)


class TestCharacteristicResidual:
    @pytest.mark.parametrize(
        "chi,expected",
        [
            (t, DiffPolynomial.zero()),
            (x * t, DiffPolynomial.constant(1)),
            (x * t - Fraction(1, 2) * y1**2 * DiffPolynomial.param("b", -1), DiffPolynomial.zero()),
            (t**2, 2 * f1),
            (t**3, 6 * f1 * t - 6 * a),
        ],
    )
    def test_examples(self, eq1, chi, expected):
        assert characteristic_residual(eq1, chi_of(chi)) == expected

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_abstract_characteristic(self, n):
        """E_u(chi * Delta) for an arbitrary chi(t, x, y1..yn)."""
        eq = build_equation(n)
        chi = Characteristic.abstract()
        fn = DiffPolynomial.function
        laplacian = sum(
            (fn("chi", DerivIndex(iy=(0,) * (j - 1) + (2,))) for j in range(2, n + 1)),
            fn("chi", DerivIndex(iy=(2,))),
        )
        expected = (
            fn("chi", DerivIndex(1, 1))
            + f1 * fn("chi", DerivIndex(2))
            - a * fn("chi", DerivIndex(3))
            + b * laplacian
        )
        assert len(expected.terms) == 3 + n
        assert characteristic_residual(eq, chi) == expected
        assert adjoint_residual(eq, chi) == expected

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_adjoint_matches_closed_form(self, poly_factory, n):
        eq = build_equation(n)
        for _ in range(20):
            chi = chi_of(poly_factory.base(min(n, 2)))
            assert adjoint_residual(eq, chi) == characteristic_residual(eq, chi)

    def test_jet_dependent_chi_rejected(self, eq1):
        with pytest.raises(JetDomainError):
            characteristic_residual(eq1, chi_of(u * t))

    def test_y_index_beyond_n(self, eq1):
        with pytest.raises(InvalidDimensionError):
            characteristic_residual(eq1, chi_of(DiffPolynomial.var("y2")))


class TestFluxes:
    def test_constant_multiplier(self, eq1):
        law = build_fluxes(eq1, chi_of(DiffPolynomial.constant(1)))
        assert law.rho == jet("x") + f1 * jet("t") + a * jet("tt")
        assert law.sigma.is_zero
        assert law.zeta == (b * jet("y1"),)

    def test_time_multiplier(self, eq1):
        law = build_fluxes(eq1, chi_of(t))
        assert law.rho == t * (jet("x") + f1 * jet("t") + a * jet("tt")) - a * jet("t") - f0
        assert law.sigma == -u
        assert law.zeta == (b * t * jet("y1"),)
        assert divergence_residual(eq1, law).is_zero

    def test_components_order(self):
        law = build_fluxes(build_equation(2), chi_of(t))
        assert len(law.components()) == 4
        assert law.components()[0] == law.rho

    @pytest.mark.parametrize(
        "chi,expected",
        [
            (t, DiffPolynomial.zero()),
            (x * t, -u),
            (t**2, -2 * (a * jet("t") + f0)),
        ],
    )
    def test_divergence_residual_examples(self, eq1, chi, expected):
        law = build_fluxes(eq1, chi_of(chi))
        assert divergence_residual(eq1, law) == expected

    @pytest.mark.parametrize("n", [1, 2])
    def test_residual_equals_closed_form(self, poly_factory, n):
        """For every base-only chi the flux residual is -(a u_t + f) chi_tt - u (chi_xt + b Delta chi)."""
        eq = build_equation(n)
        for _ in range(25):
            chi = chi_of(poly_factory.base(n))
            law = build_fluxes(eq, chi)
            assert divergence_residual(eq, law) == closed_form_residual(eq, chi)

    def test_linear_in_chi(self, poly_factory):
        eq = build_equation(2)
        q = Fraction(3, 7)
        for _ in range(10):
            p1, p2 = poly_factory.base(2), poly_factory.base(2)
            combined = build_fluxes(eq, chi_of(p1 + p2 * q)).components()
            first = build_fluxes(eq, chi_of(p1)).components()
            second = build_fluxes(eq, chi_of(p2)).components()
            assert combined == tuple(c1 + c2 * q for c1, c2 in zip(first, second))

    def test_jet_dependent_chi_rejected(self, eq1):
        with pytest.raises(JetDomainError):
            build_fluxes(eq1, chi_of(jet("t")))
        with pytest.raises(JetDomainError):
            build_fluxes(eq1, chi_of(f0))

    def test_is_nontrivial(self):
        assert is_nontrivial(chi_of(t))
        assert not is_nontrivial(chi_of(DiffPolynomial.zero()))

    def test_bind_parameters(self, eq1):
        law = bind_parameters(build_fluxes(eq1, chi_of(DiffPolynomial.constant(1))), 2, 3)
        assert law.rho == jet("x") + f1 * jet("t") + 2 * jet("tt")
        assert law.zeta == (3 * jet("y1"),)

    def test_bind_parameters_partial(self, eq1):
        law = bind_parameters(build_fluxes(eq1, chi_of(t)), b_val=5)
        assert law.zeta == (5 * t * jet("y1"),)
        assert law.rho.has_params


class TestSplitting:
    def test_split_abstract_characteristic(self, eq1):
        fn = DiffPolynomial.function
        coeff, free = split_characteristic_residual(eq1, Characteristic.abstract())
        assert coeff == fn("chi", DerivIndex(2))
        assert free == fn("chi", DerivIndex(1, 1)) - a * fn("chi", DerivIndex(3)) + b * fn("chi", DerivIndex(iy=(2,)))

    def test_phi_system(self, eq1):
        fn = DiffPolynomial.function
        constant, linear = derive_phi_system(eq1)
        assert constant == fn("phi1", DerivIndex(ix=1)) + b * fn("phi0", DerivIndex(iy=(2,)))
        assert linear == b * fn("phi1", DerivIndex(iy=(2,)))

    def test_phi_system_n2(self):
        fn = DiffPolynomial.function
        _, linear = derive_phi_system(build_equation(2))
        assert linear == b * (fn("phi1", DerivIndex(iy=(2,))) + fn("phi1", DerivIndex(iy=(0, 2))))
