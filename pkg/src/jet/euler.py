"""
Variational derivative E_u = sum_J (-D)_J d/du_J.

d/du acts on u itself and on every f-symbol (d f^(k)/du = f^(k+1)); the sum runs over
the jet coordinates actually present in p, which is the truncation at p's jet order.
"""
from fractions import Fraction

from src.jet.index import DerivIndex
from src.jet.polynomial import DiffPolynomial, _adjust, derivative_along


def partial_jet(p: DiffPolynomial, index: DerivIndex) -> DiffPolynomial:
    """Partial derivative of p with respect to the jet coordinate u_index."""
    out: dict[tuple, Fraction] = {}

    def add(sig, value):
        out[sig] = out.get(sig, 0) + value

    zero = DerivIndex()
    for (pa, pb, base, fsym, jet, funcs), c in p.items():
        for idx, e in jet:
            if idx == index:
                add((pa, pb, base, fsym, _adjust(jet, idx, -1), funcs), c * e)
        if index == zero:
            for k, e in fsym:
                raised = _adjust(_adjust(fsym, k, -1), k + 1, 1)
                add((pa, pb, base, raised, jet, funcs), c * e)
    return DiffPolynomial._from_dict(out)


def euler_operator(p: DiffPolynomial, n: int | None = None) -> DiffPolynomial:
    indices = p.jet_indices()
    if p.has_fsyms:
        indices.add(DerivIndex())
    result = DiffPolynomial.zero()
    for index in sorted(indices):
        term = derivative_along(partial_jet(p, index), index, n)
        if index.order % 2:
            term = -term
        result = result + term
    return result
