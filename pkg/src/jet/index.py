"""
Multi-indices over the base variables t, x, y1..yn and the direction names used
by total derivatives.

A direction is one of "t", "x", "y1", "y2", ...; internally each maps to a slot
(t -> 0, x -> 1, yj -> 1 + j) of the flattened base-exponent tuple.
"""
import re
from dataclasses import dataclass

from src.errors import JetDomainError

_Y_DIRECTION = re.compile(r"^y([1-9][0-9]*)$")


def direction_slot(direction: str, n: int | None = None) -> int:
    """Slot of a direction name; validates yj against n when given."""
    if direction == "t":
        return 0
    if direction == "x":
        return 1
    match = _Y_DIRECTION.match(direction)
    if match is None:
        raise JetDomainError(f"Unknown direction: {direction!r}")
    j = int(match.group(1))
    if n is not None and j > n:
        raise JetDomainError(f"Direction {direction} out of range for n={n}")
    return 1 + j


def slot_name(slot: int) -> str:
    if slot == 0:
        return "t"
    if slot == 1:
        return "x"
    return f"y{slot - 1}"


def strip_zeros(values) -> tuple[int, ...]:
    values = list(values)
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True, order=True, slots=True)
class DerivIndex:
    """Orders of differentiation (t, x, y1..yn). Trailing zero y-orders are dropped."""

    it: int = 0
    ix: int = 0
    iy: tuple[int, ...] = ()

    def __post_init__(self):
        if self.it < 0 or self.ix < 0 or any(k < 0 for k in self.iy):
            raise JetDomainError(f"Negative derivative order in {self.it, self.ix, self.iy}")
        stripped = strip_zeros(self.iy)
        if stripped != tuple(self.iy):
            object.__setattr__(self, "iy", stripped)

    @classmethod
    def from_slots(cls, orders) -> "DerivIndex":
        orders = list(orders) + [0, 0]
        return cls(orders[0], orders[1], tuple(orders[2:]))

    @property
    def slots(self) -> tuple[int, ...]:
        return strip_zeros((self.it, self.ix) + self.iy)

    @property
    def order(self) -> int:
        return self.it + self.ix + sum(self.iy)

    @property
    def max_y(self) -> int:
        """Largest y-index carrying a nonzero order (0 if none)."""
        return len(self.iy)

    def bump(self, direction: str, times: int = 1) -> "DerivIndex":
        return self.bump_slot(direction_slot(direction), times)

    def bump_slot(self, slot: int, times: int = 1) -> "DerivIndex":
        orders = list(self.slots)
        orders.extend([0] * (slot + 1 - len(orders)))
        orders[slot] += times
        return DerivIndex.from_slots(orders)

    def steps(self) -> list[str]:
        """Directions to apply, one per unit of order, in t, x, y order."""
        out = ["t"] * self.it + ["x"] * self.ix
        for j, k in enumerate(self.iy, start=1):
            out.extend([f"y{j}"] * k)
        return out

    def suffix(self) -> str:
        """Subscript string such as 'tx', 'ttt' or 'y1y1'."""
        return "".join(self.steps())

    def __str__(self) -> str:
        return self.suffix() or "0"
