"""Orbifold and fractional boundary divisors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from . import lattice
from .errors import UnknownCurve, ValidationError
from .lattice import QVector
from .surface import CurveConfig


@dataclass(frozen=True)
class Mult:
    """Orbifold coefficient ``1 - 1/m``."""

    m: int

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise ValidationError(f"orbifold multiplicity must be an integer >= 1, got {self.m!r}")

    @property
    def value(self) -> Fraction:
        return 1 - Fraction(1, self.m)


@dataclass(frozen=True)
class Frac:
    """Fractional coefficient ``d`` with ``0 <= d < 1``."""

    d: Fraction

    def __post_init__(self):
        d = lattice.to_rational(self.d)
        if not 0 <= d < 1:
            raise ValidationError(f"boundary coefficient must lie in [0,1), got {lattice.format_rational(d)}")
        object.__setattr__(self, "d", d)

    @property
    def value(self) -> Fraction:
        return self.d


Coefficient = Union[Mult, Frac]


class OrbifoldDivisor:
    """A boundary ``sum_i coeff_i * C_i`` with coefficients in ``[0, 1)``.

    Components given as ``Mult(1)`` have coefficient 0 and are dropped.
    Component order is the insertion order.
    """

    __slots__ = ("_components",)

    def __init__(self, components: Optional[Mapping[str, Coefficient]] = None):
        comps: dict[str, Coefficient] = {}
        for curve, coeff in (components or {}).items():
            if not isinstance(coeff, (Mult, Frac)):
                raise TypeError(f"coefficient of {curve!r} must be Mult or Frac, got {type(coeff).__name__}")
            if isinstance(coeff, Mult) and coeff.m == 1:
                continue
            comps[curve] = coeff
        self._components = comps

    @classmethod
    def orbifold(cls, mults: Mapping[str, int]) -> "OrbifoldDivisor":
        """``sum (1 - 1/m_c) c``."""
        return cls({c: Mult(m) for c, m in mults.items()})

    @classmethod
    def fractional(cls, coeffs: Mapping[str, object]) -> "OrbifoldDivisor":
        return cls({c: Frac(d) for c, d in coeffs.items()})

    @property
    def components(self) -> dict[str, Coefficient]:
        return dict(self._components)

    def __contains__(self, curve: str) -> bool:
        return curve in self._components

    def __eq__(self, other):
        return isinstance(other, OrbifoldDivisor) and self._components == other._components

    def __hash__(self):
        return hash(tuple(self._components.items()))

    def __repr__(self):
        return f"OrbifoldDivisor({self._components!r})"

    def coefficient(self, curve: str) -> Fraction:
        c = self._components.get(curve)
        return Fraction(0) if c is None else c.value

    @property
    def is_strict(self) -> bool:
        """True when every coefficient is an orbifold coefficient ``Mult(m)``."""
        return all(isinstance(c, Mult) for c in self._components.values())

    def multiplicity(self, curve: str) -> Fraction:
        """``1 / (1 - d)`` for the component on ``curve``; 1 off the support."""
        return 1 / (1 - self.coefficient(curve))

    def without(self, curve: str) -> "OrbifoldDivisor":
        return OrbifoldDivisor({c: v for c, v in self._components.items() if c != curve})

    def restricted_to(self, curves) -> "OrbifoldDivisor":
        keep = set(curves)
        return OrbifoldDivisor({c: v for c, v in self._components.items() if c in keep})

    def check_against(self, config: CurveConfig) -> None:
        for c in self._components:
            if c not in config.curves:
                raise UnknownCurve(f"boundary component {c!r} is not a curve of the configuration")

    def as_vector(self, config: CurveConfig) -> QVector:
        self.check_against(config)
        return config.vector({c: v.value for c, v in self._components.items()})


def round_up(delta: OrbifoldDivisor, config: CurveConfig) -> QVector:
    """``ceil(Delta)``: 1 on every component with positive coefficient."""
    delta.check_against(config)
    return config.vector({c: 1 for c in delta.components if delta.coefficient(c) > 0})


def round_down(delta: OrbifoldDivisor, config: CurveConfig) -> QVector:
    """``floor(Delta)``; zero for any admissible boundary since coefficients are < 1."""
    delta.check_against(config)
    return config.vector({c: 1 for c in delta.components if delta.coefficient(c) >= 1})


@dataclass(frozen=True)
class PairDegreeReport:
    curve: str
    e_self: Fraction
    k_deg: Fraction
    pair_deg: Fraction
    delta_deg: Fraction
    delta_prime_deg: Fraction
    ceil_count: Fraction
    e_coefficient: Fraction

    def to_json(self) -> dict:
        f = lattice.format_rational
        return {
            "curve": self.curve,
            "e_self": f(self.e_self),
            "k_deg": f(self.k_deg),
            "pair_deg": f(self.pair_deg),
            "delta_deg": f(self.delta_deg),
            "delta_prime_deg": f(self.delta_prime_deg),
            "ceil_count": f(self.ceil_count),
        }


def pair_degree(config: CurveConfig, delta: OrbifoldDivisor, curve: str) -> PairDegreeReport:
    """Degrees of ``E``, ``K``, ``K + Delta``, ``Delta``, ``Delta'`` and ``ceil(Delta')`` on ``E``.

    ``Delta'`` is ``Delta`` with its ``E``-component removed.
    """
    i = config.index(curve)
    row = config.form[i]
    rest = delta.without(curve)
    dprime = lattice.dot(row, rest.as_vector(config))
    ceil_count = lattice.dot(row, round_up(rest, config))
    coeff = delta.coefficient(curve)
    e_self = row[i]
    k_deg = config.kdeg[i]
    delta_deg = coeff * e_self + dprime
    return PairDegreeReport(
        curve=curve,
        e_self=e_self,
        k_deg=k_deg,
        pair_deg=k_deg + delta_deg,
        delta_deg=delta_deg,
        delta_prime_deg=dprime,
        ceil_count=ceil_count,
        e_coefficient=coeff,
    )
