"""Central finite-difference stencils applied along one array axis with np.roll."""
import numpy as np

from src.errors import StencilError

FIRST_DERIVATIVE = {
    2: np.array([-1 / 2, 0.0, 1 / 2]),
    4: np.array([1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12]),
}

SECOND_DERIVATIVE = {
    2: np.array([1.0, -2.0, 1.0]),
    4: np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]),
}


def half_width(order: int) -> int:
    if order not in FIRST_DERIVATIVE:
        raise StencilError(f"No stencil of order {order}")
    return order // 2


def passes(k: int) -> int:
    """Number of stencil applications used for a k-th derivative."""
    return k // 2 + k % 2


def apply_stencil(values: np.ndarray, weights: np.ndarray, axis: int, scale: float) -> np.ndarray:
    """sum_k w_k * v[i + k - hw] / scale, wrapping periodically at the ends."""
    hw = len(weights) // 2
    out = np.zeros_like(values)
    for k, w in enumerate(weights):
        if w:
            out += w * np.roll(values, hw - k, axis=axis)
    return out / scale


def derivative(values: np.ndarray, axis: int, h: float, k: int, order: int) -> np.ndarray:
    """k-th derivative as second-derivative passes followed by one first-derivative pass if k is odd."""
    half_width(order)
    result = values
    for _ in range(k // 2):
        result = apply_stencil(result, SECOND_DERIVATIVE[order], axis, h * h)
    if k % 2:
        result = apply_stencil(result, FIRST_DERIVATIVE[order], axis, h)
    return result


def second_derivative_zero_ghost(values: np.ndarray, axis: int, h: float, order: int) -> np.ndarray:
    """Second derivative treating every point outside the axis as zero (decay boundary)."""
    hw = half_width(order)
    pad = [(0, 0)] * values.ndim
    pad[axis] = (hw, hw)
    padded = np.pad(values, pad)
    length = values.shape[axis]
    out = np.zeros_like(values)
    for k, w in enumerate(SECOND_DERIVATIVE[order]):
        out += w * np.take(padded, np.arange(k, k + length), axis=axis)
    return out / (h * h)
