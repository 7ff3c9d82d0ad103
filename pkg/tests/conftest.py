import random
from fractions import Fraction

import pytest

from src.jet.index import DerivIndex
from src.jet.polynomial import DiffPolynomial


class PolyFactory:
    """Seeded random differential polynomials for property tests."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def coefficient(self) -> Fraction:
        return Fraction(self.rng.choice([-3, -2, -1, 1, 2, 3, 5]), self.rng.choice([1, 1, 2, 3]))

    def index(self, n: int, max_order: int = 2) -> DerivIndex:
        slots = [0] * (2 + n)
        for _ in range(self.rng.randint(0, max_order)):
            slots[self.rng.randrange(len(slots))] += 1
        return DerivIndex.from_slots(slots)

    def base(self, n: int, max_degree: int = 3) -> DiffPolynomial:
        """Random polynomial in t, x, y1..yn with each degree at most max_degree."""
        names = ["t", "x"] + [f"y{j}" for j in range(1, n + 1)]
        poly = DiffPolynomial.zero()
        for _ in range(self.rng.randint(1, 4)):
            mono = DiffPolynomial.constant(self.coefficient())
            for name in names:
                mono = mono * DiffPolynomial.var(name) ** self.rng.randint(0, max_degree)
            poly = poly + mono
        return poly

    def jet_polynomial(self, n: int, terms: int = 3, params: bool = False, functions: bool = False) -> DiffPolynomial:
        """Random polynomial in base variables, jets and f-symbols (optionally a, b^k and chi)."""
        names = ["t", "x"] + [f"y{j}" for j in range(1, n + 1)]
        poly = DiffPolynomial.zero()
        for _ in range(self.rng.randint(1, terms)):
            mono = DiffPolynomial.constant(self.coefficient())
            if self.rng.random() < 0.5:
                mono = mono * DiffPolynomial.var(self.rng.choice(names)) ** self.rng.randint(1, 2)
            for _ in range(self.rng.randint(0, 2)):
                mono = mono * DiffPolynomial.jet(self.index(n))
            if self.rng.random() < 0.4:
                mono = mono * DiffPolynomial.fsym(self.rng.randint(0, 2))
            if params and self.rng.random() < 0.5:
                mono = mono * DiffPolynomial.param("a", self.rng.randint(0, 2))
                mono = mono * DiffPolynomial.param("b", self.rng.randint(-2, 2))
            if functions and self.rng.random() < 0.3:
                mono = mono * DiffPolynomial.function("chi", self.index(n, 1))
            poly = poly + mono
        return poly


@pytest.fixture
def poly_factory():
    return PolyFactory(seed=20240611)
