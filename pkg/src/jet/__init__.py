from src.jet.euler import euler_operator, partial_jet
from src.jet.index import DerivIndex
from src.jet.polynomial import (
    DiffPolynomial,
    JetMonomial,
    derivative_along,
    evaluate_at_point,
    laplacian_y,
    normalize,
    split_by_f_symbols,
    substitute_params,
    t_power_split,
    total_derivative,
)

__all__ = [
    "DerivIndex",
    "DiffPolynomial",
    "JetMonomial",
    "derivative_along",
    "euler_operator",
    "evaluate_at_point",
    "laplacian_y",
    "normalize",
    "partial_jet",
    "split_by_f_symbols",
    "substitute_params",
    "t_power_split",
    "total_derivative",
]
