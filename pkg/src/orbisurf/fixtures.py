"""Built-in configurations used by the CLI, the tests and the README."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

from .discrepancy import BDivisorSpec
from .orbifold import Frac, OrbifoldDivisor
from .surface import BlowupCenter, CurveConfig, blow_up


def plane() -> CurveConfig:
    return CurveConfig(("H",), [[1]], [-3], k_self=9, name="P2")


def plane_blown_up(k: int = 1) -> CurveConfig:
    """P^2 blown up at ``k`` general points: a line ``H`` and exceptional ``E1..Ek``."""
    config = plane()
    for _ in range(k):
        config, _ = blow_up(config, BlowupCenter())
    return CurveConfig(config.curves, config.form, config.kdeg, config.k_self, True, f"P2_blown_up_{k}")


def quadric() -> CurveConfig:
    return CurveConfig(("F1", "F2"), [[0, 1], [1, 0]], [-2, -2], k_self=8, name="quadric")


def dual_graph(name: str, n: int, edges, self_int: int = -2, labels: Optional[list[str]] = None) -> CurveConfig:
    """Chain or tree of smooth rational curves with the given self-intersection."""
    labels = labels or [f"C{i}" for i in range(n)]
    form = [[Fraction(self_int if i == j else 0) for j in range(n)] for i in range(n)]
    for i, j in edges:
        form[i][j] = form[j][i] = Fraction(1)
    # p_a = 0 forces K.C = -2 - C^2
    return CurveConfig(tuple(labels), form, [-2 - self_int] * n, None, True, name)


def ade(kind: str, n: int) -> CurveConfig:
    """Dual graph of an ADE configuration of (-2)-curves.

    ``D_n`` has central curve ``C0`` with the short arms ``C1``, ``C2``;
    ``E_n`` has the branch curve ``C0`` with arm lengths 1, 2, n-4.
    """
    if kind == "A":
        return dual_graph(f"A{n}", n, [(i, i + 1) for i in range(n - 1)], labels=[f"C{i + 1}" for i in range(n)])
    if kind == "D":
        edges = [(0, 1), (0, 2)] + ([(0, 3)] if n >= 4 else [])
        edges += [(i, i + 1) for i in range(3, n - 1)]
        return dual_graph(f"D{n}", n, edges)
    if kind == "E":
        edges = [(0, 1), (0, 2), (2, 3), (0, 4)] + [(i, i + 1) for i in range(4, n - 1)]
        return dual_graph(f"E{n}", n, edges)
    raise ValueError(f"unknown ADE type {kind!r}")


def a2_with_tail() -> CurveConfig:
    """Two (-2)-curves ``C1 - C2`` plus a (-1)-curve ``C`` meeting ``C1`` once."""
    return CurveConfig(
        ("C1", "C2", "C"),
        [[-2, 1, 1], [1, -2, 0], [1, 0, -1]],
        [0, 0, -1],
        name="A2_with_tail",
    )


def positive_genus() -> CurveConfig:
    """Two disjoint curves with ``C^2 = -1``, ``K.C = 1``, so ``p_a = 1``."""
    return CurveConfig(("C1", "C2"), [[-1, 0], [0, -1]], [1, 1], name="positive_genus")


def case1() -> tuple[CurveConfig, OrbifoldDivisor]:
    config = CurveConfig(("E", "C"), [[-1, 1], [1, 0]], [-1, -2], name="case1")
    return config, OrbifoldDivisor.orbifold({"C": 2})


def case2_platonic() -> tuple[CurveConfig, OrbifoldDivisor]:
    """``Delta = (1 - 1/31) E + A/2 + 2B/3 + 4C/5`` with A, B, C each meeting E once."""
    form = [[-1, 1, 1, 1], [1, -2, 0, 0], [1, 0, -2, 0], [1, 0, 0, -2]]
    config = CurveConfig(("E", "A", "B", "C"), form, [-1, 0, 0, 0], name="case2_235")
    return config, OrbifoldDivisor.orbifold({"E": 31, "A": 2, "B": 3, "C": 5})


def case2_minus_one() -> tuple[CurveConfig, OrbifoldDivisor]:
    """``Delta = E/2 + A/2 + 5B/6``: e = 2, E.Delta' = (1 - 1/2) + (1 - 1/6)."""
    form = [[-1, 1, 1], [1, -2, 0], [1, 0, -2]]
    config = CurveConfig(("E", "A", "B"), form, [-1, 0, 0], name="case2_minus_one")
    return config, OrbifoldDivisor.orbifold({"E": 2, "A": 2, "B": 6})


def half_line() -> tuple[CurveConfig, OrbifoldDivisor]:
    """A line ``C`` in P^2 with coefficient 1/2."""
    return CurveConfig(("C",), [[1]], [-3], 9, True, "half_line"), OrbifoldDivisor.orbifold({"C": 2})


def two_lines() -> tuple[CurveConfig, OrbifoldDivisor]:
    """Lines ``A``, ``B`` in P^2 with ``Delta = A/2 + 2B/3``."""
    config = CurveConfig(("A", "B"), [[1, 1], [1, 1]], [-3, -3], 9, True, "two_lines")
    return config, OrbifoldDivisor.orbifold({"A": 2, "B": 3})


def two_lines_bdiv() -> tuple[CurveConfig, BDivisorSpec]:
    return two_lines()[0], BDivisorSpec({"A": 2, "B": 2}, {}, 1)


def _pair(config: CurveConfig, delta: Optional[OrbifoldDivisor] = None):
    return config, delta if delta is not None else OrbifoldDivisor()


FIXTURES: dict[str, Callable[[], tuple]] = {
    "P2": lambda: _pair(plane()),
    "P2_blown_up": lambda: _pair(plane_blown_up(1)),
    "P2_blown_up_2": lambda: _pair(plane_blown_up(2)),
    "quadric": lambda: _pair(quadric()),
    "A1": lambda: _pair(ade("A", 1)),
    "A2": lambda: _pair(ade("A", 2)),
    "A3": lambda: _pair(ade("A", 3)),
    "A4": lambda: _pair(ade("A", 4)),
    "D4": lambda: _pair(ade("D", 4)),
    "D5": lambda: _pair(ade("D", 5)),
    "E6": lambda: _pair(ade("E", 6)),
    "E7": lambda: _pair(ade("E", 7)),
    "E8": lambda: _pair(ade("E", 8)),
    "A2_with_tail": lambda: _pair(a2_with_tail()),
    "positive_genus": lambda: _pair(positive_genus()),
    "case1": case1,
    "case2_235": case2_platonic,
    "case2_minus_one": case2_minus_one,
    "half_line": half_line,
    "two_lines": two_lines,
    "two_lines_fractional": lambda: (two_lines()[0], OrbifoldDivisor({"A": Frac(Fraction(24, 25)), "B": Frac(Fraction(24, 25))})),
}


def fixture(name: str) -> tuple[CurveConfig, OrbifoldDivisor]:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}") from None
