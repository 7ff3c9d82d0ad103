"""
The generalized nonlinear progressive wave equation

    u_tx + (f(u))_tt + a u_ttt + b (u_y1y1 + ... + u_ynyn) = 0

and the conservation laws generated by characteristics chi(t, x, y).

Conservation laws are stored as the off-shell identity

    D_t rho + D_x sigma + sum_j D_yj zeta_j = chi * Delta,

so verifying a law is an exact polynomial identity with no rewriting modulo the
equation.
"""
from dataclasses import dataclass

from src.errors import InvalidDimensionError, JetDomainError
from src.jet.euler import euler_operator
from src.jet.index import DerivIndex
from src.jet.polynomial import (
    DiffPolynomial,
    laplacian_y,
    slot_power_split,
    split_by_f_symbols,
    substitute_params,
    total_derivative,
)

A = DiffPolynomial.param("a")
B = DiffPolynomial.param("b")
U = DiffPolynomial.jet(DerivIndex())
F0 = DiffPolynomial.fsym(0)
F1 = DiffPolynomial.fsym(1)


@dataclass(frozen=True)
class GnpweEquation:
    n: int
    delta: DiffPolynomial


@dataclass(frozen=True)
class Characteristic:
    """A multiplier chi. Base-only characteristics carry no jets and no f-symbols."""

    chi: DiffPolynomial

    @classmethod
    def abstract(cls, name: str = "chi") -> "Characteristic":
        return cls(DiffPolynomial.function(name))

    @property
    def is_base_only(self) -> bool:
        return not self.chi.has_jets and not self.chi.has_fsyms

    def require_base_only(self):
        if not self.is_base_only:
            raise JetDomainError(f"Characteristic must depend on t, x, y only, got {self.chi}")

    def __str__(self):
        return str(self.chi)


@dataclass(frozen=True)
class ConservationLaw:
    rho: DiffPolynomial
    sigma: DiffPolynomial
    zeta: tuple[DiffPolynomial, ...]
    chi: Characteristic

    def components(self) -> tuple[DiffPolynomial, ...]:
        return (self.rho, self.sigma, *self.zeta)


def build_equation(n: int) -> GnpweEquation:
    if n < 1:
        raise InvalidDimensionError(f"n must be a positive integer, got {n}")
    f_tt = total_derivative(total_derivative(F0, "t"), "t")
    delta = (
        DiffPolynomial.jet("tx")
        + f_tt
        + A * DiffPolynomial.jet("ttt")
        + B * laplacian_y(U, n)
    )
    return GnpweEquation(n=n, delta=delta)


def _check_dimension(eq: GnpweEquation, chi: Characteristic):
    if chi.chi.max_y_index() > eq.n:
        raise InvalidDimensionError(f"Characteristic uses y{chi.chi.max_y_index()} but n={eq.n}")


def _d(p: DiffPolynomial, *steps: str) -> DiffPolynomial:
    for step in steps:
        p = total_derivative(p, step)
    return p


def characteristic_residual(eq: GnpweEquation, chi: Characteristic) -> DiffPolynomial:
    """chi_xt + f'(u) chi_tt - a chi_ttt + b Delta_y chi; zero iff chi is a characteristic."""
    chi.require_base_only()
    _check_dimension(eq, chi)
    c = chi.chi
    return _d(c, "x", "t") + F1 * _d(c, "t", "t") - A * _d(c, "t", "t", "t") + B * laplacian_y(c, eq.n)


def adjoint_residual(eq: GnpweEquation, chi: Characteristic) -> DiffPolynomial:
    """E_u(chi * Delta). Accepts jet-dependent chi, which the jet-ansatz check needs."""
    _check_dimension(eq, chi)
    return euler_operator(chi.chi * eq.delta, eq.n)


def build_fluxes(eq: GnpweEquation, chi: Characteristic) -> ConservationLaw:
    chi.require_base_only()
    _check_dimension(eq, chi)
    c = chi.chi
    c_t = _d(c, "t")
    rho = (
        (DiffPolynomial.jet("x") + F1 * DiffPolynomial.jet("t") + A * DiffPolynomial.jet("tt")) * c
        - (A * DiffPolynomial.jet("t") + F0) * c_t
    )
    sigma = -U * c_t
    zeta = tuple(
        B * (DiffPolynomial.jet(f"y{j}") * c - U * _d(c, f"y{j}")) for j in range(1, eq.n + 1)
    )
    return ConservationLaw(rho=rho, sigma=sigma, zeta=zeta, chi=chi)


def divergence(eq: GnpweEquation, cl: ConservationLaw) -> DiffPolynomial:
    div = total_derivative(cl.rho, "t") + total_derivative(cl.sigma, "x")
    for j, zeta_j in enumerate(cl.zeta, start=1):
        div = div + total_derivative(zeta_j, f"y{j}", eq.n)
    return div


def divergence_residual(eq: GnpweEquation, cl: ConservationLaw) -> DiffPolynomial:
    """D_t rho + D_x sigma + sum_j D_yj zeta_j - chi * Delta."""
    return divergence(eq, cl) - cl.chi.chi * eq.delta


def closed_form_residual(eq: GnpweEquation, chi: Characteristic) -> DiffPolynomial:
    """What divergence_residual(build_fluxes(chi)) equals for any base-only chi."""
    chi.require_base_only()
    c = chi.chi
    return -(A * DiffPolynomial.jet("t") + F0) * _d(c, "t", "t") - U * (
        _d(c, "x", "t") + B * laplacian_y(c, eq.n)
    )


def is_nontrivial(chi: Characteristic) -> bool:
    return not chi.chi.is_zero


def split_characteristic_residual(eq: GnpweEquation, chi: Characteristic) -> tuple[DiffPolynomial, DiffPolynomial]:
    """
    Split the residual on the independent functions 1 and f'(u):
    returns (coefficient of f', f-free part), i.e. chi_tt and chi_xt - a chi_ttt + b Delta_y chi.
    """
    parts = split_by_f_symbols(characteristic_residual(eq, chi))
    return parts.get(((1, 1),), DiffPolynomial.zero()), parts.get((), DiffPolynomial.zero())


def derive_phi_system(eq: GnpweEquation) -> tuple[DiffPolynomial, DiffPolynomial]:
    """
    Substitute chi = phi0 + t*phi1 (phi independent of t) into the f-free equation and
    split by powers of t: returns ((phi1)_x + b Delta_y phi0, b Delta_y phi1).
    """
    chi = Characteristic(DiffPolynomial.function("phi0") + DiffPolynomial.var("t") * DiffPolynomial.function("phi1"))
    coeff_f1, free = split_characteristic_residual(eq, chi)
    if not coeff_f1.is_zero:
        raise JetDomainError("chi = phi0 + t*phi1 must satisfy chi_tt = 0 identically")
    powers = slot_power_split(free, "t")
    zero = DiffPolynomial.zero()
    return powers.get(0, zero), powers.get(1, zero)


def bind_parameters(cl: ConservationLaw, a_val=None, b_val=None) -> ConservationLaw:
    """The same law with a and/or b replaced by rationals."""
    return ConservationLaw(
        rho=substitute_params(cl.rho, a_val, b_val),
        sigma=substitute_params(cl.sigma, a_val, b_val),
        zeta=tuple(substitute_params(z, a_val, b_val) for z in cl.zeta),
        chi=Characteristic(substitute_params(cl.chi.chi, a_val, b_val)),
    )
