"""
Deterministic rendering of polynomials, conservation laws, bases and reports.

Plain text is the parser's own grammar, so parse(render_plain(p)) == p.
JSON carries "schema": 1.
"""
import json
from fractions import Fraction

from src.jet.index import DerivIndex
from src.jet.polynomial import DiffPolynomial, JetMonomial
from src.model.gnpwe import Characteristic, ConservationLaw

SCHEMA_VERSION = 1
TARGETS = ("plain", "latex", "json")

_LATEX_FUNCTIONS = {
    "chi": r"\chi",
    "phi0": r"\varphi_0",
    "phi1": r"\varphi_1",
    "eta0": r"\eta_0",
    "eta1": r"\eta_1",
    "xi0": r"\xi_0",
    "xi1": r"\xi_1",
}


def _power(name: str, exponent: int) -> str:
    return name if exponent == 1 else f"{name}^{exponent}"


def _plain_factors(mono: JetMonomial) -> list[str]:
    factors = []
    if mono.pa:
        factors.append(_power("a", mono.pa))
    if mono.pb:
        factors.append(_power("b", mono.pb))
    names = ["t", "x"] + [f"y{j}" for j in range(1, len(mono.base) - 1)]
    for name, e in zip(names, mono.base):
        if e:
            factors.append(_power(name, e))
    for k, e in mono.fsym:
        factors.append(_power(f"f{k}", e))
    for idx, e in mono.jet:
        factors.append(_power(f"u_{idx.suffix()}" if idx.order else "u", e))
    for (name, idx), e in mono.funcs:
        factors.append(_power(f"{name}_{idx.suffix()}" if idx.order else name, e))
    return factors


def _join(pieces: list[tuple[Fraction, str]], one_coeff) -> str:
    """pieces: (coefficient, factor-string) in canonical order."""
    if not pieces:
        return "0"
    out = []
    for i, (coeff, factors) in enumerate(pieces):
        sign = "-" if coeff < 0 else "+"
        body = one_coeff(abs(coeff), factors)
        if i == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def render_plain(p: DiffPolynomial) -> str:
    def body(coeff: Fraction, factors: list[str]) -> str:
        if not factors:
            return str(coeff)
        if coeff == 1:
            return "*".join(factors)
        return "*".join([str(coeff)] + factors)

    return _join([(m.coeff, _plain_factors(m)) for m in p.terms], body)


def _latex_power(name: str, exponent: int) -> str:
    return name if exponent == 1 else f"{name}^{{{exponent}}}"


def _latex_suffix(idx: DerivIndex) -> str:
    parts = ["t"] * idx.it + ["x"] * idx.ix
    for j, k in enumerate(idx.iy, start=1):
        parts.extend([f"y_{j}"] * k)
    return "".join(parts)


def _latex_f(k: int) -> str:
    if k == 0:
        return "f"
    if k <= 2:
        return "f_{" + "u" * k + "}"
    return f"f^{{({k})}}"


def _latex_factors(mono: JetMonomial) -> list[str]:
    factors = []
    if mono.pa:
        factors.append(_latex_power("a", mono.pa))
    if mono.pb:
        factors.append(_latex_power("b", mono.pb))
    names = ["t", "x"] + [f"y_{{{j}}}" for j in range(1, len(mono.base) - 1)]
    for name, e in zip(names, mono.base):
        if e:
            factors.append(_latex_power(name, e))
    for k, e in mono.fsym:
        name = _latex_f(k)
        factors.append(_latex_power(f"\\left({name}\\right)" if e != 1 and k else name, e))
    for idx, e in mono.jet:
        name = f"u_{{{_latex_suffix(idx)}}}" if idx.order else "u"
        factors.append(_latex_power(name, e))
    for (fname, idx), e in mono.funcs:
        symbol = _LATEX_FUNCTIONS.get(fname, fname)
        if idx.order:
            symbol = f"\\left({symbol}\\right)" if "_" in symbol else symbol
            symbol = f"{symbol}_{{{_latex_suffix(idx)}}}"
        factors.append(_latex_power(symbol, e))
    return factors


def render_latex(p: DiffPolynomial) -> str:
    def body(coeff: Fraction, factors: list[str]) -> str:
        if coeff.denominator == 1:
            number = str(coeff.numerator)
        else:
            number = f"\\frac{{{coeff.numerator}}}{{{coeff.denominator}}}"
        if not factors:
            return number
        if coeff == 1:
            return " ".join(factors)
        return " ".join([number] + factors)

    return _join([(m.coeff, _latex_factors(m)) for m in p.terms], body)


def polynomial_to_dict(p: DiffPolynomial) -> dict:
    terms = []
    for mono in p.terms:
        base = list(mono.base) + [0, 0]
        terms.append(
            {
                "coeff": str(mono.coeff),
                "a": mono.pa,
                "b": mono.pb,
                "base": {"t": base[0], "x": base[1], "y": list(mono.base[2:])},
                "f": {str(k): e for k, e in mono.fsym},
                "jet": [{"idx": list(idx.slots), "exp": e} for idx, e in mono.jet],
                "fn": [{"name": name, "idx": list(idx.slots), "exp": e} for (name, idx), e in mono.funcs],
            }
        )
    return {"schema": SCHEMA_VERSION, "terms": terms}


def polynomial_from_dict(data: dict) -> DiffPolynomial:
    monos = []
    for term in data.get("terms", []):
        base = term.get("base", {})
        base_tuple = [base.get("t", 0), base.get("x", 0), *base.get("y", [])]
        while base_tuple and base_tuple[-1] == 0:
            base_tuple.pop()
        fsym = tuple(sorted((int(k), e) for k, e in term.get("f", {}).items()))
        jet = tuple(sorted((DerivIndex.from_slots(j["idx"]), j["exp"]) for j in term.get("jet", [])))
        funcs = tuple(
            sorted(((fn["name"], DerivIndex.from_slots(fn["idx"])), fn["exp"]) for fn in term.get("fn", []))
        )
        monos.append(
            JetMonomial(Fraction(term["coeff"]), term.get("a", 0), term.get("b", 0), tuple(base_tuple), fsym, jet, funcs)
        )
    return DiffPolynomial(monos)


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False)


def render_json(p: DiffPolynomial) -> str:
    return _dumps(polynomial_to_dict(p))


def render(obj, target: str = "plain") -> str:
    """Render a DiffPolynomial, Characteristic, ConservationLaw or CharacteristicBasis."""
    if target not in TARGETS:
        raise ValueError(f"Unknown render target {target!r}")
    if isinstance(obj, Characteristic):
        obj = obj.chi
    if isinstance(obj, DiffPolynomial):
        return {"plain": render_plain, "latex": render_latex, "json": render_json}[target](obj)
    if isinstance(obj, ConservationLaw):
        return render_law(obj, target)
    # CharacteristicBasis (duck-typed to avoid a solver import here)
    if hasattr(obj, "basis") and hasattr(obj, "dimension"):
        return render_basis(obj.basis, target)
    raise TypeError(f"Cannot render {type(obj).__name__}")


def law_to_dict(law: ConservationLaw) -> dict:
    return {
        "chi": polynomial_to_dict(law.chi.chi),
        "rho": polynomial_to_dict(law.rho),
        "sigma": polynomial_to_dict(law.sigma),
        "zeta": [polynomial_to_dict(z) for z in law.zeta],
    }


def render_law(law: ConservationLaw, target: str) -> str:
    if target == "json":
        return _dumps({"schema": SCHEMA_VERSION, **law_to_dict(law)})
    if target == "latex":
        lines = [
            f"\\chi &= {render_latex(law.chi.chi)}",
            f"\\rho &= {render_latex(law.rho)}",
            f"\\sigma &= {render_latex(law.sigma)}",
        ]
        lines += [f"\\zeta_{{{j}}} &= {render_latex(z)}" for j, z in enumerate(law.zeta, start=1)]
        return "\\begin{aligned}\n" + " \\\\\n".join(lines) + "\n\\end{aligned}"
    lines = [f"chi = {render_plain(law.chi.chi)}", f"rho = {render_plain(law.rho)}", f"sigma = {render_plain(law.sigma)}"]
    lines += [f"zeta{j} = {render_plain(z)}" for j, z in enumerate(law.zeta, start=1)]
    return "\n".join(lines)


def render_basis(basis, target: str) -> str:
    chis = [c.chi if isinstance(c, Characteristic) else c for c in basis]
    if target == "json":
        return _dumps({"schema": SCHEMA_VERSION, "dimension": len(chis), "basis": [polynomial_to_dict(c) for c in chis]})
    if target == "latex":
        lines = [f"\\chi_{{{i}}} &= {render_latex(c)}" for i, c in enumerate(chis, start=1)]
        return "\\begin{aligned}\n" + " \\\\\n".join(lines) + "\n\\end{aligned}" if lines else "0"
    lines = [f"dimension: {len(chis)}"] + [f"chi[{i}] = {render_plain(c)}" for i, c in enumerate(chis, start=1)]
    return "\n".join(lines)


def report_to_dict(report) -> dict:
    spec = report.spec
    return {
        "schema": SCHEMA_VERSION,
        "spec": {
            "n": spec.n,
            "deg_t": spec.deg_t,
            "deg_x": spec.deg_x,
            "deg_y": spec.deg_y,
            "jet_vars": list(spec.jet_vars) if spec.uses_jets else [],
            "jet_deg": spec.jet_deg if spec.uses_jets else 0,
            "a": str(spec.a_val),
            "b": str(spec.b_val),
        },
        "unknowns": report.unknown_count,
        "rank": report.rank,
        "dimension": report.dimension,
        "expected_dimension": report.expected_dimension,
        "family_in_span": report.family_in_span,
        "jet_dependent": report.jet_dependent,
        "all_verified": report.all_verified,
        "basis": [
            {
                "chi": polynomial_to_dict(entry.chi.chi),
                "plain": render_plain(entry.chi.chi),
                "verified": entry.verified,
                "fluxes": law_to_dict(entry.law) if entry.law is not None else None,
            }
            for entry in report.entries
        ],
        "note": report.note,
    }


def render_report(report, target: str) -> str:
    if target == "json":
        return _dumps(report_to_dict(report))
    if target == "csv":
        lines = ["index,chi,verified"]
        lines += [
            f'{i},"{render_plain(e.chi.chi)}",{str(e.verified).lower()}' for i, e in enumerate(report.entries, start=1)
        ]
        return "\n".join(lines)
    render_one = render_latex if target == "latex" else render_plain
    lines = [
        f"dimension: {report.dimension}",
        f"rank: {report.rank} of {report.unknown_count} unknowns",
    ]
    if report.expected_dimension is not None:
        lines.append(f"expected (n=1 family): {report.expected_dimension}")
        lines.append(f"family members in span: {str(report.family_in_span).lower()}")
    if report.spec.uses_jets:
        lines.append(f"jet-dependent basis vectors: {report.jet_dependent}")
    lines.append(f"all verified: {str(report.all_verified).lower()}")
    for i, entry in enumerate(report.entries, start=1):
        flag = "verified" if entry.verified else "FAILED"
        lines.append(f"chi[{i}] = {render_one(entry.chi.chi)}  [{flag}]")
    lines.append(f"note: {report.note}")
    return "\n".join(lines)
