"""
Exact differential polynomials on the jet space of one dependent variable u.

A monomial is a rational coefficient times powers of
  - the parameters a, b (integer exponents, negative allowed),
  - the base variables t, x, y1..yn,
  - the f-derivative symbols f^(k)(u), k >= 0 (f^(0) = f),
  - the jet coordinates u_J (u itself is J = 0),
  - abstract base-variable functions such as chi, phi0 or eta1 and their derivatives.

All f^(k) are algebraically independent symbols; u-dependence enters only through
jet coordinates and f-symbols, never through function symbols.
"""
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Protocol

from src.config import config
from src.errors import ArithmeticCapacityError, IncompleteBindingError, JetDomainError, ParameterDivisionError
from src.jet.index import DerivIndex, direction_slot, slot_name, strip_zeros

# Base-variable kinds each abstract function depends on; None means all of t, x, y.
FUNCTION_DEPENDENCIES: dict[str, frozenset[str] | None] = {
    "chi": None,
    "phi0": frozenset({"x", "y"}),
    "phi1": frozenset({"x", "y"}),
    "eta0": frozenset({"x"}),
    "eta1": frozenset({"x"}),
    "xi0": frozenset({"x"}),
    "xi1": frozenset({"x"}),
}


def function_depends_on(name: str, slot: int) -> bool:
    kinds = FUNCTION_DEPENDENCIES.get(name)
    if kinds is None:
        return True
    kind = "t" if slot == 0 else "x" if slot == 1 else "y"
    return kind in kinds


class FValues(Protocol):
    """Anything that can evaluate f^(k)(u)."""

    def derivative(self, k: int, u: Any) -> Any: ...


def _adjust(pairs: tuple, key, delta: int) -> tuple:
    """Return a sorted (key, exponent) tuple with key's exponent shifted by delta."""
    exps = dict(pairs)
    value = exps.get(key, 0) + delta
    if value:
        exps[key] = value
    else:
        exps.pop(key, None)
    return tuple(sorted(exps.items()))


def _merge(left: tuple, right: tuple) -> tuple:
    if not left:
        return right
    if not right:
        return left
    exps = dict(left)
    for key, e in right:
        exps[key] = exps.get(key, 0) + e
    return tuple(sorted((k, e) for k, e in exps.items() if e))


def _add_base(left: tuple, right: tuple) -> tuple:
    if not left:
        return right
    if not right:
        return left
    width = max(len(left), len(right))
    left = left + (0,) * (width - len(left))
    right = right + (0,) * (width - len(right))
    return strip_zeros(a + b for a, b in zip(left, right))


@dataclass(frozen=True, slots=True)
class JetMonomial:
    coeff: Fraction
    pa: int = 0
    pb: int = 0
    base: tuple[int, ...] = ()
    fsym: tuple[tuple[int, int], ...] = ()
    jet: tuple[tuple[DerivIndex, int], ...] = ()
    funcs: tuple[tuple[tuple[str, DerivIndex], int], ...] = ()

    @classmethod
    def from_signature(cls, signature: tuple, coeff) -> "JetMonomial":
        return cls(Fraction(coeff), *signature)

    @property
    def signature(self) -> tuple:
        return (self.pa, self.pb, self.base, self.fsym, self.jet, self.funcs)

    @property
    def degree(self) -> int:
        return (
            sum(self.base)
            + sum(e for _, e in self.fsym)
            + sum(e for _, e in self.jet)
            + sum(e for _, e in self.funcs)
        )


def signature_key(signature: tuple) -> tuple:
    """Degree-lexicographic key on the flattened exponent signature."""
    pa, pb, base, fsym, jet, funcs = signature
    degree = sum(base) + sum(e for _, e in fsym) + sum(e for _, e in jet) + sum(e for _, e in funcs)
    return (
        degree,
        base,
        fsym,
        tuple((idx.slots, e) for idx, e in jet),
        tuple((name, idx.slots, e) for (name, idx), e in funcs),
        pa,
        pb,
    )


def _check_capacity(signature: tuple, coeff: Fraction):
    limit = config.max_exponent
    pa, pb, base, fsym, jet, funcs = signature
    exponents = [pa, pb, *base]
    exponents += [k for k, _ in fsym] + [e for _, e in fsym]
    exponents += [e for _, e in jet] + [idx.order for idx, _ in jet]
    exponents += [e for _, e in funcs] + [idx.order for (_, idx), _ in funcs]
    if any(abs(e) > limit for e in exponents):
        raise ArithmeticCapacityError(f"Exponent exceeds configured width {limit}")
    bits = config.max_coeff_bits
    if coeff.numerator.bit_length() > bits or coeff.denominator.bit_length() > bits:
        raise ArithmeticCapacityError(f"Rational coefficient exceeds {bits} bits")


class DiffPolynomial:
    """Immutable sparse differential polynomial in canonical form."""

    __slots__ = ("_coeffs", "_terms", "_hash")

    def __init__(self, terms: Iterable[JetMonomial] = ()):
        merged: dict[tuple, Fraction] = {}
        for mono in terms:
            sig = mono.signature
            merged[sig] = merged.get(sig, 0) + Fraction(mono.coeff)
        self._set(merged)

    def _set(self, coeffs: dict):
        clean = {}
        for sig, c in coeffs.items():
            if c:
                c = Fraction(c)
                _check_capacity(sig, c)
                clean[sig] = c
        self._coeffs = clean
        self._terms = None
        self._hash = None

    @classmethod
    def _from_dict(cls, coeffs: dict) -> "DiffPolynomial":
        poly = cls.__new__(cls)
        poly._set(coeffs)
        return poly

    # ---- constructors ----

    @classmethod
    def zero(cls) -> "DiffPolynomial":
        return cls._from_dict({})

    @classmethod
    def constant(cls, value) -> "DiffPolynomial":
        return cls._from_dict({(0, 0, (), (), (), ()): Fraction(value)})

    @classmethod
    def var(cls, name: str) -> "DiffPolynomial":
        """Base variable t, x or yj."""
        slot = direction_slot(name)
        base = [0] * (slot + 1)
        base[slot] = 1
        return cls._from_dict({(0, 0, tuple(base), (), (), ()): Fraction(1)})

    @classmethod
    def param(cls, name: str, exponent: int = 1) -> "DiffPolynomial":
        if name == "a":
            return cls._from_dict({(exponent, 0, (), (), (), ()): Fraction(1)})
        if name == "b":
            return cls._from_dict({(0, exponent, (), (), (), ()): Fraction(1)})
        raise JetDomainError(f"Unknown parameter: {name!r}")

    @classmethod
    def jet(cls, index: DerivIndex | str = DerivIndex()) -> "DiffPolynomial":
        """Jet coordinate u_J; a string is read as a derivative suffix like 'tx'."""
        if isinstance(index, str):
            index = index_from_suffix(index)
        return cls._from_dict({(0, 0, (), (), ((index, 1),), ()): Fraction(1)})

    @classmethod
    def fsym(cls, k: int) -> "DiffPolynomial":
        if k < 0:
            raise JetDomainError("f-derivative order must be nonnegative")
        return cls._from_dict({(0, 0, (), ((k, 1),), (), ()): Fraction(1)})

    @classmethod
    def function(cls, name: str, index: DerivIndex = DerivIndex()) -> "DiffPolynomial":
        """Abstract base-variable function symbol (chi, phi0, eta1, ...)."""
        for slot, order in enumerate(index.slots):
            if order and not function_depends_on(name, slot):
                return cls.zero()
        return cls._from_dict({(0, 0, (), (), (), (((name, index), 1),)): Fraction(1)})

    @staticmethod
    def _promote(value) -> "DiffPolynomial":
        if isinstance(value, DiffPolynomial):
            return value
        if isinstance(value, (int, Fraction)):
            return DiffPolynomial.constant(value)
        return NotImplemented

    # ---- canonical view ----

    @property
    def terms(self) -> tuple[JetMonomial, ...]:
        if self._terms is None:
            ordered = sorted(self._coeffs.items(), key=lambda item: signature_key(item[0]))
            self._terms = tuple(JetMonomial.from_signature(sig, c) for sig, c in ordered)
        return self._terms

    def items(self):
        return self._coeffs.items()

    def coefficient(self, signature: tuple) -> Fraction:
        return self._coeffs.get(signature, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    # ---- structure queries ----

    @property
    def has_jets(self) -> bool:
        return any(sig[4] for sig in self._coeffs)

    @property
    def has_fsyms(self) -> bool:
        return any(sig[3] for sig in self._coeffs)

    @property
    def has_functions(self) -> bool:
        return any(sig[5] for sig in self._coeffs)

    @property
    def has_params(self) -> bool:
        return any(sig[0] or sig[1] for sig in self._coeffs)

    def jet_indices(self) -> set[DerivIndex]:
        return {idx for sig in self._coeffs for idx, _ in sig[4]}

    def base_degree(self, name: str) -> int:
        slot = direction_slot(name)
        return max((sig[2][slot] if slot < len(sig[2]) else 0 for sig in self._coeffs), default=0)

    def max_y_index(self) -> int:
        """Largest j such that yj occurs anywhere (base, jet or function index)."""
        best = 0
        for _, _, base, _, jet, funcs in self._coeffs:
            best = max(best, len(base) - 2)
            for idx, _ in jet:
                best = max(best, idx.max_y)
            for (_, idx), _ in funcs:
                best = max(best, idx.max_y)
        return best

    # ---- ring operations ----

    def __add__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return other
        coeffs = dict(self._coeffs)
        for sig, c in other._coeffs.items():
            coeffs[sig] = coeffs.get(sig, 0) + c
        return DiffPolynomial._from_dict(coeffs)

    __radd__ = __add__

    def __neg__(self):
        return DiffPolynomial._from_dict({sig: -c for sig, c in self._coeffs.items()})

    def __sub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return DiffPolynomial.zero()
            return DiffPolynomial._from_dict({sig: c * other for sig, c in self._coeffs.items()})
        other = self._promote(other)
        if other is NotImplemented:
            return other
        coeffs: dict[tuple, Fraction] = {}
        for (pa, pb, base, fsym, jet, funcs), c1 in self._coeffs.items():
            for (qa, qb, qbase, qfsym, qjet, qfuncs), c2 in other._coeffs.items():
                sig = (
                    pa + qa,
                    pb + qb,
                    _add_base(base, qbase),
                    _merge(fsym, qfsym),
                    _merge(jet, qjet),
                    _merge(funcs, qfuncs),
                )
                coeffs[sig] = coeffs.get(sig, 0) + c1 * c2
        return DiffPolynomial._from_dict(coeffs)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise JetDomainError("Only nonnegative integer powers of polynomials are supported")
        result = DiffPolynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._promote(other)
        if other is NotImplemented:
            return other
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._coeffs.items()))
        return self._hash

    def __repr__(self):
        return f"DiffPolynomial({self})"

    def __str__(self):
        from src.expr.printer import render_plain

        return render_plain(self)


def normalize(terms: Iterable[JetMonomial]) -> DiffPolynomial:
    """Merge like terms, drop zeros and sort into canonical order."""
    return DiffPolynomial(terms)


def index_from_suffix(suffix: str) -> DerivIndex:
    """Parse a derivative suffix such as 'tx', 'ttt' or 'y1y1' (greedy digits after y)."""
    index = DerivIndex()
    pos = 0
    while pos < len(suffix):
        ch = suffix[pos]
        if ch in "tx":
            index = index.bump(ch)
            pos += 1
        elif ch == "y":
            end = pos + 1
            while end < len(suffix) and suffix[end].isdigit():
                end += 1
            if end == pos + 1:
                raise JetDomainError(f"Missing y-index in derivative suffix {suffix!r}")
            index = index.bump(suffix[pos:end])
            pos = end
        else:
            raise JetDomainError(f"Invalid derivative suffix {suffix!r}")
    return index


def total_derivative(p: DiffPolynomial, direction: str, n: int | None = None) -> DiffPolynomial:
    """D_dir with u_J -> u_{J+dir}, f^(k) -> f^(k+1) u_dir and function indices bumped."""
    slot = direction_slot(direction, n)
    u_dir = DerivIndex().bump_slot(slot)
    out: dict[tuple, Fraction] = {}

    def add(sig, value):
        out[sig] = out.get(sig, 0) + value

    for (pa, pb, base, fsym, jet, funcs), c in p.items():
        if slot < len(base) and base[slot]:
            lowered = list(base)
            lowered[slot] -= 1
            add((pa, pb, strip_zeros(lowered), fsym, jet, funcs), c * base[slot])
        for k, e in fsym:
            raised = _adjust(_adjust(fsym, k, -1), k + 1, 1)
            add((pa, pb, base, raised, _adjust(jet, u_dir, 1), funcs), c * e)
        for idx, e in jet:
            bumped = _adjust(_adjust(jet, idx, -1), idx.bump_slot(slot), 1)
            add((pa, pb, base, fsym, bumped, funcs), c * e)
        for (name, idx), e in funcs:
            if not function_depends_on(name, slot):
                continue
            bumped = _adjust(_adjust(funcs, (name, idx), -1), (name, idx.bump_slot(slot)), 1)
            add((pa, pb, base, fsym, jet, bumped), c * e)
    return DiffPolynomial._from_dict(out)


def derivative_along(p: DiffPolynomial, index: DerivIndex, n: int | None = None) -> DiffPolynomial:
    """Apply D_J = D_t^it D_x^ix D_y1^.. to p."""
    for step in index.steps():
        if p.is_zero:
            break
        p = total_derivative(p, step, n)
    return p


def laplacian_y(p: DiffPolynomial, n: int) -> DiffPolynomial:
    """Sum over j of D_yj D_yj p."""
    result = DiffPolynomial.zero()
    for j in range(1, n + 1):
        direction = f"y{j}"
        result = result + total_derivative(total_derivative(p, direction, n), direction, n)
    return result


def _power(value: Fraction, exponent: int, name: str) -> Fraction:
    if exponent < 0 and value == 0:
        raise ParameterDivisionError(f"{name} = 0 but the polynomial contains {name}^{exponent}")
    return value**exponent


def substitute_params(p: DiffPolynomial, a_val=None, b_val=None) -> DiffPolynomial:
    """Replace a and/or b by rationals; a None value leaves that symbol in place."""
    a_val = None if a_val is None else Fraction(a_val)
    b_val = None if b_val is None else Fraction(b_val)
    out: dict[tuple, Fraction] = {}
    for (pa, pb, base, fsym, jet, funcs), c in p.items():
        if a_val is not None and pa:
            c = c * _power(a_val, pa, "a")
            pa = 0
        if b_val is not None and pb:
            c = c * _power(b_val, pb, "b")
            pb = 0
        sig = (pa, pb, base, fsym, jet, funcs)
        out[sig] = out.get(sig, 0) + c
    return DiffPolynomial._from_dict(out)


def evaluate_at_point(
    p: DiffPolynomial,
    point: Mapping[str, Any],
    jet: Mapping[DerivIndex, Any] | None = None,
    fmodel: FValues | None = None,
    funcvals: Mapping[tuple[str, DerivIndex], Any] | None = None,
):
    """
    Floating evaluation. Values may be floats or numpy arrays (broadcast together),
    so a whole grid can be evaluated in one call.
    """
    jet = jet or {}
    funcvals = funcvals or {}
    total = 0.0
    for mono in p.terms:
        if mono.pa or mono.pb:
            raise IncompleteBindingError("Parameters a, b must be substituted before evaluation")
        value = float(mono.coeff)
        for slot, e in enumerate(mono.base):
            if not e:
                continue
            name = slot_name(slot)
            if name not in point:
                raise IncompleteBindingError(f"No value for base variable {name}")
            value = value * point[name] ** e
        if mono.fsym:
            if fmodel is None:
                raise IncompleteBindingError("f-symbols present but no f model supplied")
            if DerivIndex() not in jet:
                raise IncompleteBindingError("f-symbols present but no value for u")
            u = jet[DerivIndex()]
            for k, e in mono.fsym:
                value = value * fmodel.derivative(k, u) ** e
        for idx, e in mono.jet:
            if idx not in jet:
                raise IncompleteBindingError(f"No value for jet coordinate u_{idx}")
            value = value * jet[idx] ** e
        for key, e in mono.funcs:
            if key not in funcvals:
                raise IncompleteBindingError(f"No value for function symbol {key[0]}_{key[1]}")
            value = value * funcvals[key] ** e
        total = total + value
    return total


def slot_power_split(p: DiffPolynomial, name: str) -> dict[int, DiffPolynomial]:
    """Coefficients of the powers of one base variable: p = sum_k name^k * out[k]."""
    slot = direction_slot(name)
    parts: dict[int, dict] = {}
    for (pa, pb, base, fsym, jet, funcs), c in p.items():
        power = base[slot] if slot < len(base) else 0
        lowered = list(base)
        if power:
            lowered[slot] = 0
        sig = (pa, pb, strip_zeros(lowered), fsym, jet, funcs)
        parts.setdefault(power, {})[sig] = c
    return {k: DiffPolynomial._from_dict(v) for k, v in sorted(parts.items())}


def t_power_split(p: DiffPolynomial) -> dict[int, DiffPolynomial]:
    return slot_power_split(p, "t")


def split_by_f_symbols(p: DiffPolynomial) -> dict[tuple[tuple[int, int], ...], DiffPolynomial]:
    """Group terms by their f-symbol signature; the key () holds the f-free part."""
    parts: dict[tuple, dict] = {}
    for (pa, pb, base, fsym, jet, funcs), c in p.items():
        parts.setdefault(fsym, {})[(pa, pb, base, (), jet, funcs)] = c
    return {k: DiffPolynomial._from_dict(v) for k, v in sorted(parts.items())}
