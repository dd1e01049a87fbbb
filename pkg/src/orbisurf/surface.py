"""Curve configurations on a model surface.

A surface is known only through a finite list of curve classes, their
intersection matrix and their degrees against the canonical class. Divisors
are coefficient vectors indexed by the configuration's curve order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import lattice
from .errors import (
    BadCenter,
    DimensionMismatch,
    NotNegativeDefinite,
    NotSmoothModel,
    UnknownCurve,
)
from .lattice import QMatrix, QVector

RESERVED_LABEL_CHARS = frozenset(";^#*@")


@dataclass(frozen=True)
class CurveConfig:
    curves: tuple[str, ...]
    form: QMatrix
    kdeg: QVector
    k_self: Optional[Fraction] = None
    smooth_model: bool = True
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "form", tuple(tuple(Fraction(v) for v in row) for row in self.form))
        object.__setattr__(self, "kdeg", tuple(Fraction(v) for v in self.kdeg))
        if self.k_self is not None:
            object.__setattr__(self, "k_self", Fraction(self.k_self))

    def __len__(self):
        return len(self.curves)

    def index(self, curve: str) -> int:
        try:
            return self.curves.index(curve)
        except ValueError:
            raise UnknownCurve(f"unknown curve {curve!r}") from None

    def dot(self, c1: str, c2: str) -> Fraction:
        return self.form[self.index(c1)][self.index(c2)]

    def k_dot(self, c: str) -> Fraction:
        return self.kdeg[self.index(c)]

    def vector(self, coeffs: Mapping[str, object] | None = None) -> QVector:
        """Coefficient vector of the divisor ``sum coeffs[c] * c``."""
        v = [Fraction(0)] * len(self.curves)
        for c, q in (coeffs or {}).items():
            v[self.index(c)] += lattice.to_rational(q)
        return tuple(v)

    def unit(self, curve: str) -> QVector:
        return self.vector({curve: 1})


@dataclass(frozen=True)
class BlowupCenter:
    """A point of the surface named by the tracked curves passing through it.

    With two curves, ``point_index`` picks one of their transversal
    intersection points, numbered ``0 .. C_i.C_j - 1``.
    """

    through: tuple[str, ...] = ()
    point_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "through", tuple(self.through))


@dataclass
class ValidationReport:
    valid: bool
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": list(self.violations)}


def validate(config: CurveConfig) -> ValidationReport:
    """Check every structural invariant of ``config`` and list what fails."""
    problems: list[str] = []
    n = len(config.curves)
    if len(set(config.curves)) != n:
        problems.append("curve labels are not unique")
    for c in config.curves:
        if not c or RESERVED_LABEL_CHARS.intersection(c):
            problems.append(f"curve label {c!r} is empty or contains one of ';^#*@'")
    if len(config.form) != n or any(len(row) != n for row in config.form):
        problems.append(f"form is not {n}x{n}")
        return ValidationReport(False, problems)
    if len(config.kdeg) != n:
        problems.append(f"kdeg has length {len(config.kdeg)}, expected {n}")
        return ValidationReport(False, problems)
    for i in range(n):
        for j in range(i + 1, n):
            if config.form[i][j] != config.form[j][i]:
                problems.append(f"form is not symmetric at ({i},{j})")
            elif config.form[i][j] < 0:
                problems.append(f"distinct curves {config.curves[i]!r}, {config.curves[j]!r} have negative intersection")
    if config.smooth_model:
        for i, c in enumerate(config.curves):
            self_int, kd = config.form[i][i], config.kdeg[i]
            if self_int.denominator != 1 or kd.denominator != 1:
                problems.append(f"curve {c!r} has non-integral degrees on a smooth model")
                continue
            pa = Fraction(self_int + kd, 2) + 1
            if pa.denominator != 1 or pa < 0:
                problems.append(f"curve {c!r} has arithmetic genus {lattice.format_rational(pa)}, not an integer >= 0")
        for i in range(n):
            for j in range(i + 1, n):
                if config.form[i][j].denominator != 1:
                    problems.append(f"non-integral intersection of {config.curves[i]!r} and {config.curves[j]!r} on a smooth model")
        if config.k_self is not None and config.k_self.denominator != 1:
            problems.append("k_self is not an integer on a smooth model")
    return ValidationReport(not problems, problems)


def intersect(config: CurveConfig, d1: Sequence[Fraction], d2: Sequence[Fraction]) -> Fraction:
    return lattice.eval_form(config.form, d1, d2)


def k_degree(config: CurveConfig, d: Sequence[Fraction]) -> Fraction:
    """``K_S . D``."""
    return lattice.dot(config.kdeg, d)


def arithmetic_genus(config: CurveConfig, z: Sequence[Fraction]) -> Fraction:
    """``p_a(Z) = (Z.Z + K.Z) / 2 + 1``."""
    return (intersect(config, z, z) + k_degree(config, z)) / 2 + 1


def _fresh_label(config: CurveConfig, stem: str = "E") -> str:
    k = 1
    while f"{stem}{k}" in config.curves:
        k += 1
    return f"{stem}{k}"


def blow_up(config: CurveConfig, center: BlowupCenter, label: str | None = None) -> tuple[CurveConfig, str]:
    """Blow up one point; returns the new configuration and the exceptional label.

    Every tracked curve through the center is smooth there and meets the
    others transversally, so its multiplicity at the point is 1.
    """
    if not config.smooth_model:
        raise NotSmoothModel("blow_up needs a smooth model")
    through = center.through
    if len(through) > 2:
        raise BadCenter("a center on an SNC configuration lies on at most two curves")
    if len(set(through)) != len(through):
        raise BadCenter("a curve is listed twice in the center")
    idx = [config.index(c) for c in through]
    if center.point_index < 0:
        raise BadCenter("point_index must be nonnegative")
    if len(idx) == 2:
        meet = config.form[idx[0]][idx[1]]
        if meet.denominator != 1 or meet < center.point_index + 1:
            raise BadCenter(
                f"{through[0]} . {through[1]} = {lattice.format_rational(meet)} has no intersection point #{center.point_index}"
            )
    elif center.point_index != 0:
        raise BadCenter("point_index only applies to a center on two curves")
    if label is None:
        label = _fresh_label(config)
    elif label in config.curves:
        raise BadCenter(f"label {label!r} already in use")

    n = len(config.curves)
    mult = [0] * n
    for i in idx:
        mult[i] = 1
    form = [[config.form[i][j] - mult[i] * mult[j] for j in range(n)] + [Fraction(mult[i])] for i in range(n)]
    form.append([Fraction(m) for m in mult] + [Fraction(-1)])
    kdeg = [config.kdeg[i] + mult[i] for i in range(n)] + [Fraction(-1)]
    k_self = None if config.k_self is None else config.k_self - 1
    new = replace(config, curves=config.curves + (label,), form=form, kdeg=kdeg, k_self=k_self, smooth_model=True)
    return new, label


def _bunch_indices(config: CurveConfig, bunch: Iterable[str]) -> list[int]:
    return sorted({config.index(c) for c in bunch})


def _exceptional_block(config: CurveConfig, idx: Sequence[int]) -> QMatrix:
    block = lattice.submatrix(config.form, idx)
    if not lattice.is_negative_definite(block):
        names = ", ".join(config.curves[i] for i in idx)
        raise NotNegativeDefinite(f"intersection matrix of {{{names}}} is not negative definite")
    return block


def mumford_pullback(config: CurveConfig, exceptional: Iterable[str], d: Sequence[Fraction]) -> QVector:
    """Return ``D + sum a_i E_i`` orthogonal to every curve in ``exceptional``."""
    if len(d) != len(config.curves):
        raise DimensionMismatch(f"divisor has length {len(d)}, expected {len(config.curves)}")
    idx = _bunch_indices(config, exceptional)
    block = _exceptional_block(config, idx)
    rhs = [-lattice.dot(config.form[j], d) for j in idx]
    a = lattice.solve_linear(block, rhs)
    out = list(d)
    for i, ai in zip(idx, a):
        out[i] += ai
    return tuple(out)


def canonical_correction(config: CurveConfig, bunch: Iterable[str]) -> dict[str, Fraction]:
    """Coefficients ``alpha_i`` with ``(K_S - sum alpha_i E_i) . E_j = 0`` for all j.

    ``K_S - sum alpha_i E_i`` is the pullback of the canonical class of the
    contracted surface; ``-alpha_i`` is the discrepancy of ``E_i``.
    """
    idx = _bunch_indices(config, bunch)
    block = _exceptional_block(config, idx)
    alpha = lattice.solve_linear(block, [config.kdeg[j] for j in idx])
    return {config.curves[i]: a for i, a in zip(idx, alpha)}


def contract(config: CurveConfig, bunch: Iterable[str]) -> CurveConfig:
    """Contract a negative definite bunch; surviving curves are pushed forward."""
    idx = _bunch_indices(config, bunch)
    if not idx:
        return config
    n = len(config.curves)
    keep = [i for i in range(n) if i not in idx]
    block = _exceptional_block(config, idx)

    # Row k of `pulled` is pi^* of the pushforward of curve keep[k].
    pulled = []
    for i in keep:
        rhs = [-config.form[i][j] for j in idx]
        a = lattice.solve_linear(block, rhs)
        pulled.append(a)
    form = [
        [config.form[i][j] + sum((a_e * config.form[e][j] for a_e, e in zip(pulled[r], idx)), Fraction(0)) for j in keep]
        for r, i in enumerate(keep)
    ]
    alpha = lattice.solve_linear(block, [config.kdeg[j] for j in idx])
    kdeg = [config.kdeg[i] - sum((al * config.form[e][i] for al, e in zip(alpha, idx)), Fraction(0)) for i in keep]
    k_self = None
    if config.k_self is not None:
        k_self = config.k_self - sum((al * config.kdeg[e] for al, e in zip(alpha, idx)), Fraction(0))
    castelnuovo = (
        config.smooth_model
        and len(idx) == 1
        and config.form[idx[0]][idx[0]] == -1
        and config.kdeg[idx[0]] == -1
    )
    return replace(
        config,
        curves=tuple(config.curves[i] for i in keep),
        form=form,
        kdeg=kdeg,
        k_self=k_self,
        smooth_model=castelnuovo,
    )
