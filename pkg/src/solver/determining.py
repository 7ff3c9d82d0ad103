"""
Bounded-degree solution of the determining problem.

chi is taken as a linear combination of ansatz monomials with unknown rational
coefficients. The residual of every monomial (the characteristic residual, or E_u(chi * Delta) when the
ansatz contains jet coordinates) is expanded with a, b substituted, and every monomial
signature of the combined residual becomes one linear row. Treating f-symbol powers,
jets and powers of t as independent splits the residual more finely than the
two-function split on 1 and f'(u), which is valid for generic nonlinear f.
"""
import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from rich.console import Console

from src.errors import EmptySystemError, InvalidDimensionError, JetDomainError, ParameterDivisionError
from src.jet.index import DerivIndex
from src.jet.polynomial import DiffPolynomial, laplacian_y, signature_key, slot_power_split, substitute_params, total_derivative
from src.model.gnpwe import (
    Characteristic,
    ConservationLaw,
    adjoint_residual,
    build_equation,
    build_fluxes,
    characteristic_residual,
    divergence_residual,
)
from src.solver.linalg import in_row_space, null_space_vectors, rank

console = Console(stderr=True)

ORDER_HYPOTHESIS_NOTE = (
    "The restriction of characteristics to functions of (t, x, y) is imported from an "
    "external theorem; a jet-ansatz run is bounded-order evidence for it, not a proof."
)


def default_jet_vars(n: int) -> tuple[str, ...]:
    return ("u", "u_t", "u_x") + tuple(f"u_y{j}" for j in range(1, n + 1))


@dataclass(frozen=True)
class AnsatzSpec:
    n: int
    deg_t: int
    deg_x: int
    deg_y: int
    jet_vars: tuple[str, ...] = ()
    jet_deg: int = 0
    a_val: Fraction = Fraction(1)
    b_val: Fraction = Fraction(1)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidDimensionError(f"n must be a positive integer, got {self.n}")
        if min(self.deg_t, self.deg_x, self.deg_y, self.jet_deg) < 0:
            raise JetDomainError("Degree caps must be nonnegative")
        object.__setattr__(self, "a_val", Fraction(self.a_val))
        object.__setattr__(self, "b_val", Fraction(self.b_val))
        if self.b_val == 0:
            raise ParameterDivisionError("b must be nonzero")

    @property
    def uses_jets(self) -> bool:
        return bool(self.jet_vars) and self.jet_deg > 0

    def base_monomials(self) -> list[DiffPolynomial]:
        """t^i x^k y^m with i <= deg_t, k <= deg_x and total y-degree <= deg_y."""
        t, x = DiffPolynomial.var("t"), DiffPolynomial.var("x")
        ys = [DiffPolynomial.var(f"y{j}") for j in range(1, self.n + 1)]
        y_parts = []
        for exps in itertools.product(range(self.deg_y + 1), repeat=self.n):
            if sum(exps) <= self.deg_y:
                part = DiffPolynomial.constant(1)
                for y, e in zip(ys, exps):
                    part = part * y**e
                y_parts.append(part)
        return [t**i * x**k * y for i in range(self.deg_t + 1) for k in range(self.deg_x + 1) for y in y_parts]

    def jet_monomials(self) -> list[DiffPolynomial]:
        if not self.uses_jets:
            return [DiffPolynomial.constant(1)]
        factors = [_jet_var(name, self.n) for name in self.jet_vars]
        out = []
        for degree in range(self.jet_deg + 1):
            for combo in itertools.combinations_with_replacement(factors, degree):
                mono = DiffPolynomial.constant(1)
                for factor in combo:
                    mono = mono * factor
                out.append(mono)
        return out

    def monomials(self) -> list[DiffPolynomial]:
        monos = {m * j for m in self.base_monomials() for j in self.jet_monomials()}
        return sorted(monos, key=lambda m: signature_key(m.terms[0].signature))


def _jet_var(name: str, n: int) -> DiffPolynomial:
    if name == "u":
        return DiffPolynomial.jet()
    if not name.startswith("u_"):
        raise JetDomainError(f"Unknown jet variable {name!r}")
    poly = DiffPolynomial.jet(name[2:])
    if poly.max_y_index() > n:
        raise JetDomainError(f"Jet variable {name} out of range for n={n}")
    return poly


@dataclass(frozen=True)
class DeterminingSystem:
    spec: AnsatzSpec
    unknowns: tuple[DiffPolynomial, ...]
    signatures: tuple[tuple, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f"c{i}" for i in range(len(self.unknowns)))

    @property
    def rank(self) -> int:
        return rank(self.rows, len(self.unknowns))


@dataclass(frozen=True)
class CharacteristicBasis:
    basis: tuple[Characteristic, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class N1FamilyInput:
    eta0: DiffPolynomial = field(default_factory=DiffPolynomial.zero)
    eta1: DiffPolynomial = field(default_factory=DiffPolynomial.zero)
    xi0: DiffPolynomial = field(default_factory=DiffPolynomial.zero)
    xi1: DiffPolynomial = field(default_factory=DiffPolynomial.zero)

    def __post_init__(self):
        for name in ("eta0", "eta1", "xi0", "xi1"):
            poly = getattr(self, name)
            if not isinstance(poly, DiffPolynomial):
                poly = DiffPolynomial.constant(poly)
                object.__setattr__(self, name, poly)
            if poly.has_jets or poly.has_fsyms or poly.has_functions or poly.has_params:
                raise JetDomainError(f"{name} must be a rational polynomial in x, got {poly}")
            for (_, _, base, _, _, _), _ in poly.items():
                if len(base) > 2 or (base and base[0]):
                    raise JetDomainError(f"{name} must depend on x only, got {poly}")


def monomial_residual(spec: AnsatzSpec, eq, monomial: DiffPolynomial) -> DiffPolynomial:
    chi = Characteristic(monomial)
    if spec.uses_jets:
        residual = adjoint_residual(eq, chi)
    else:
        residual = characteristic_residual(eq, chi)
    return substitute_params(residual, spec.a_val, spec.b_val)


def assemble_determining_system(spec: AnsatzSpec, monomials: list[DiffPolynomial] | None = None) -> DeterminingSystem:
    unknowns = spec.monomials() if monomials is None else list(monomials)
    if not unknowns:
        raise EmptySystemError("The ansatz contains no monomials")
    eq = build_equation(spec.n)
    console.print(f"[dim]Assembling {len(unknowns)} ansatz columns (n={spec.n})...[/dim]")

    columns = [monomial_residual(spec, eq, m) for m in unknowns]
    signatures = sorted({sig for col in columns for sig, _ in col.items()}, key=signature_key)
    rows = tuple(tuple(col.coefficient(sig) for col in columns) for sig in signatures)
    return DeterminingSystem(spec=spec, unknowns=tuple(unknowns), signatures=tuple(signatures), rows=rows)


def _combine(unknowns, vector) -> DiffPolynomial:
    result = DiffPolynomial.zero()
    for mono, coeff in zip(unknowns, vector):
        if coeff:
            result = result + mono * coeff
    return result


def null_space(system: DeterminingSystem) -> CharacteristicBasis:
    vectors = null_space_vectors(system.rows, len(system.unknowns))
    return CharacteristicBasis(tuple(Characteristic(_combine(system.unknowns, v)) for v in vectors))


def coordinates(system: DeterminingSystem, p: DiffPolynomial) -> list[Fraction] | None:
    """Coefficient vector of p over the ansatz monomials, or None if p leaves the ansatz."""
    vector = []
    remaining = p
    for mono in system.unknowns:
        sig, _ = next(iter(mono.items()))
        c = p.coefficient(sig)
        vector.append(c)
        if c:
            remaining = remaining - mono * c
    return vector if remaining.is_zero else None


def solve_sys_conditions(phi0: DiffPolynomial, phi1: DiffPolynomial, n: int, b_val) -> bool:
    """Both equations Delta_y phi1 = 0 and Delta_y phi0 = -(phi1)_x / b hold identically."""
    b_val = Fraction(b_val)
    if b_val == 0:
        raise ParameterDivisionError("b must be nonzero")
    phi0 = substitute_params(phi0, None, b_val)
    phi1 = substitute_params(phi1, None, b_val)
    first = laplacian_y(phi1, n)
    second = laplacian_y(phi0, n) + total_derivative(phi1, "x") * (1 / b_val)
    return first.is_zero and second.is_zero


def phi_parts(chi: Characteristic) -> tuple[DiffPolynomial, DiffPolynomial]:
    """Split chi = phi0 + t*phi1; raises if chi has t-degree above 1."""
    powers = slot_power_split(chi.chi, "t")
    if any(k > 1 and not p.is_zero for k, p in powers.items()):
        raise JetDomainError(f"chi has t-degree above 1: {chi}")
    zero = DiffPolynomial.zero()
    return powers.get(0, zero), powers.get(1, zero)


def n1_explicit_characteristic(inp: N1FamilyInput, b_val) -> Characteristic:
    """chi = phi0 + t*phi1 with phi1 = xi0 + y1*xi1 and
    phi0 = eta0 + eta1*y1 - (xi0)_x y1^2/(2b) - (xi1)_x y1^3/(6b)."""
    b_val = Fraction(b_val)
    if b_val == 0:
        raise ParameterDivisionError("b must be nonzero")
    t, y = DiffPolynomial.var("t"), DiffPolynomial.var("y1")
    xi0_x = total_derivative(inp.xi0, "x")
    xi1_x = total_derivative(inp.xi1, "x")
    phi0 = inp.eta0 + inp.eta1 * y - xi0_x * y**2 * (1 / (2 * b_val)) - xi1_x * y**3 * (1 / (6 * b_val))
    phi1 = inp.xi0 + y * inp.xi1
    return Characteristic(phi0 + t * phi1)


def n1_abstract_characteristic() -> Characteristic:
    """The n = 1 general solution with arbitrary smooth eta0, eta1, xi0, xi1 of x."""
    f = DiffPolynomial.function
    t, y = DiffPolynomial.var("t"), DiffPolynomial.var("y1")
    b_inv = DiffPolynomial.param("b", -1)
    xi0_x = f("xi0", DerivIndex(ix=1))
    xi1_x = f("xi1", DerivIndex(ix=1))
    phi0 = f("eta0") + f("eta1") * y - xi0_x * y**2 * b_inv * Fraction(1, 2) - xi1_x * y**3 * b_inv * Fraction(1, 6)
    phi1 = f("xi0") + y * f("xi1")
    return Characteristic(phi0 + t * phi1)


def n1_family_dimension(deg_t: int, deg_x: int, deg_y: int) -> int:
    """Number of independent explicit n = 1 family members inside the degree caps."""
    k = deg_x + 1
    count = k + (k if deg_y >= 1 else 0)
    if deg_t >= 1:
        count += k if deg_y >= 2 else 1
        count += k if deg_y >= 3 else (1 if deg_y >= 1 else 0)
    return count


def n1_family_members(spec: AnsatzSpec) -> list[Characteristic]:
    """Explicit family members spanning the family inside the caps of spec (n = 1)."""
    x = DiffPolynomial.var("x")
    members = []

    def slots(count):
        return [x**k for k in range(count)]

    k = spec.deg_x + 1
    for p in slots(k):
        members.append(n1_explicit_characteristic(N1FamilyInput(eta0=p), spec.b_val))
    if spec.deg_y >= 1:
        for p in slots(k):
            members.append(n1_explicit_characteristic(N1FamilyInput(eta1=p), spec.b_val))
    if spec.deg_t >= 1:
        for p in slots(k if spec.deg_y >= 2 else 1):
            members.append(n1_explicit_characteristic(N1FamilyInput(xi0=p), spec.b_val))
        if spec.deg_y >= 1:
            for p in slots(k if spec.deg_y >= 3 else 1):
                members.append(n1_explicit_characteristic(N1FamilyInput(xi1=p), spec.b_val))
    return members


@dataclass(frozen=True)
class BasisEntry:
    chi: Characteristic
    law: ConservationLaw | None
    characteristic_ok: bool
    divergence_ok: bool | None

    @property
    def verified(self) -> bool:
        return self.characteristic_ok and self.divergence_ok is not False


@dataclass(frozen=True)
class ClassificationReport:
    spec: AnsatzSpec
    basis: CharacteristicBasis
    entries: tuple[BasisEntry, ...]
    rank: int
    unknown_count: int
    expected_dimension: int | None
    family_in_span: bool | None
    jet_dependent: int
    elapsed: float
    note: str = ORDER_HYPOTHESIS_NOTE

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def all_verified(self) -> bool:
        return all(e.verified for e in self.entries)

    @property
    def dimension_matches(self) -> bool | None:
        if self.expected_dimension is None:
            return None
        return self.expected_dimension == self.dimension


def verify_characteristic(spec: AnsatzSpec, eq, chi: Characteristic) -> BasisEntry:
    if not chi.is_base_only:
        ok = substitute_params(adjoint_residual(eq, chi), spec.a_val, spec.b_val).is_zero
        return BasisEntry(chi=chi, law=None, characteristic_ok=ok, divergence_ok=None)
    char_ok = substitute_params(characteristic_residual(eq, chi), spec.a_val, spec.b_val).is_zero
    law = build_fluxes(eq, chi)
    div_ok = substitute_params(divergence_residual(eq, law), spec.a_val, spec.b_val).is_zero
    return BasisEntry(chi=chi, law=law, characteristic_ok=char_ok, divergence_ok=div_ok)


def classify(spec: AnsatzSpec) -> ClassificationReport:
    start = time.perf_counter()
    system = assemble_determining_system(spec)
    basis = null_space(system)
    eq = build_equation(spec.n)
    entries = tuple(verify_characteristic(spec, eq, chi) for chi in basis.basis)
    jet_dependent = sum(1 for chi in basis.basis if not chi.is_base_only)
    if jet_dependent:
        console.print(f"[yellow]{jet_dependent} basis vectors depend on jet coordinates[/yellow]")

    expected = None
    family_in_span = None
    if spec.n == 1:
        expected = n1_family_dimension(spec.deg_t, spec.deg_x, spec.deg_y)
        vectors = [coordinates(system, chi.chi) for chi in basis.basis]
        family_in_span = True
        for member in n1_family_members(spec):
            coords = coordinates(system, member.chi)
            if coords is None or not in_row_space(vectors, coords):
                family_in_span = False
                break

    elapsed = time.perf_counter() - start
    console.print(f"[dim]Null space of dimension {basis.dimension} found in {elapsed:.2f}s[/dim]")
    return ClassificationReport(
        spec=spec,
        basis=basis,
        entries=entries,
        rank=system.rank,
        unknown_count=len(system.unknowns),
        expected_dimension=expected,
        family_in_span=family_in_span,
        jet_dependent=jet_dependent,
        elapsed=elapsed,
    )
