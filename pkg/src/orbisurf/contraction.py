"""Artin contractibility and the classifier for boundary-negative curves."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import lattice
from .errors import InconsistentInput, NotNegativeDefinite, NotOrbifold, NotSmoothModel
from .lattice import format_rational
from .orbifold import OrbifoldDivisor, PairDegreeReport, pair_degree
from .surface import CurveConfig, arithmetic_genus

LAUFER_MAX_STEPS = 100_000


def _support(config: CurveConfig, support: Iterable[str]) -> list[int]:
    return sorted({config.index(c) for c in support})


def _cycle_vector(config: CurveConfig, idx: Sequence[int], z: Sequence[int]) -> tuple:
    v = [Fraction(0)] * len(config.curves)
    for i, zi in zip(idx, z):
        v[i] = Fraction(zi)
    return tuple(v)


def _laufer_loop(block, n: int) -> list[int]:
    z = [1] * n
    for _ in range(LAUFER_MAX_STEPS):
        for j in range(n):
            if sum(z[i] * block[i][j] for i in range(n)) > 0:
                z[j] += 1
                break
        else:
            return z
    raise NotNegativeDefinite("Laufer's loop did not terminate")


def fundamental_cycle(config: CurveConfig, support: Iterable[str]) -> dict[str, int]:
    """Minimal cycle ``Z >= sum C_i`` on ``support`` with ``Z . C_j <= 0`` for every j.

    Laufer's procedure: start from the reduced cycle and add the first
    curve ``C_j`` with ``Z . C_j > 0`` until none is left.
    """
    idx = _support(config, support)
    if not idx:
        raise ValueError("support is empty")
    block = lattice.submatrix(config.form, idx)
    if not lattice.is_negative_definite(block):
        raise NotNegativeDefinite("support does not span a negative definite sublattice")
    z = _laufer_loop(block, len(idx))
    return {config.curves[i]: zi for i, zi in zip(idx, z)}


@dataclass
class ContractionVerdict:
    support: tuple[str, ...]
    negative_definite: bool
    fundamental_cycle: Optional[dict[str, int]]
    fundamental_genus: Optional[Fraction]
    cycles_checked: int
    max_cycle_genus: Optional[Fraction]
    worst_cycle: Optional[dict[str, int]]
    contractible: bool
    bound_multiplier: int

    def to_json(self) -> dict:
        opt = lambda q: None if q is None else format_rational(q)  # noqa: E731
        return {
            "support": list(self.support),
            "negative_definite": self.negative_definite,
            "fundamental_cycle": self.fundamental_cycle,
            "fundamental_genus": opt(self.fundamental_genus),
            "cycles_checked": self.cycles_checked,
            "max_cycle_genus": opt(self.max_cycle_genus),
            "worst_cycle": self.worst_cycle,
            "contractible": self.contractible,
            "bound_multiplier": self.bound_multiplier,
            "note": f"cycles enumerated up to {self.bound_multiplier} * Z_f; "
            "p_a(Z1+Z2) = p_a(Z1) + p_a(Z2) + Z1.Z2 - 1 extends the check beyond the bound",
        }


_CHUNK = 1 << 18


def _max_twice_genus_integral(q: np.ndarray, k: np.ndarray, bounds: Sequence[int]) -> tuple[int, tuple[int, ...], int]:
    """Max of ``Z.Z + K.Z`` over ``0 < Z <= bounds`` for an integral form.

    Enumerates an outer box in Python and vectorizes the inner coordinates.
    Returns ``(max value, argmax, number of cycles)``.
    """
    n = len(bounds)
    split = n
    size = 1
    while split > 0 and size * (bounds[split - 1] + 1) <= _CHUNK:
        split -= 1
        size *= bounds[split] + 1
    inner_ranges = [np.arange(b + 1, dtype=np.int64) for b in bounds[split:]]
    if inner_ranges:
        grid = np.stack(np.meshgrid(*inner_ranges, indexing="ij"), axis=-1).reshape(-1, n - split)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    q_in = q[split:, split:]
    base_in = np.einsum("ij,jk,ik->i", grid, q_in, grid) + grid @ k[split:]
    cross = q[:split, split:]
    best, arg = None, None
    for outer in itertools.product(*(range(b + 1) for b in bounds[:split])):
        u = np.array(outer, dtype=np.int64)
        const = int(u @ q[:split, :split] @ u + u @ k[:split])
        vals = base_in + 2 * (grid @ (u @ cross)) + const
        if not any(outer):
            vals = vals.copy()
            vals[0] = np.iinfo(np.int64).min  # Z = 0 is not a cycle
        j = int(np.argmax(vals))
        if best is None or vals[j] > best:
            best, arg = int(vals[j]), tuple(outer) + tuple(int(x) for x in grid[j])
    count = int(np.prod([b + 1 for b in bounds], dtype=object)) - 1
    return best, arg, count


def _max_twice_genus_exact(block, kvec, bounds) -> tuple[Fraction, tuple[int, ...], int]:
    best, arg, count = None, None, 0
    n = len(bounds)
    for z in itertools.product(*(range(b + 1) for b in bounds)):
        if not any(z):
            continue
        count += 1
        val = sum(z[i] * z[j] * block[i][j] for i in range(n) for j in range(n) if z[i] and z[j])
        val += sum(z[i] * kvec[i] for i in range(n))
        if best is None or val > best:
            best, arg = val, z
    return best, arg, count


def artin_test(config: CurveConfig, support: Iterable[str], bound_multiplier: int = 2) -> ContractionVerdict:
    """Numerical contractibility: negative definiteness and ``p_a(Z) <= 0`` for every
    cycle ``0 < Z <= bound_multiplier * Z_f``."""
    if bound_multiplier < 1:
        raise ValueError("bound_multiplier must be >= 1")
    idx = _support(config, support)
    names = tuple(config.curves[i] for i in idx)
    block = lattice.submatrix(config.form, idx)
    if not idx or not lattice.is_negative_definite(block):
        return ContractionVerdict(names, False, None, None, 0, None, None, False, bound_multiplier)
    zf = fundamental_cycle(config, names)
    zf_genus = arithmetic_genus(config, _cycle_vector(config, idx, [zf[c] for c in names]))
    bounds = [bound_multiplier * zf[c] for c in names]
    kvec = [config.kdeg[i] for i in idx]
    integral = all(v.denominator == 1 for row in block for v in row) and all(v.denominator == 1 for v in kvec)
    if integral:
        q = np.array([[int(v) for v in row] for row in block], dtype=np.int64)
        k = np.array([int(v) for v in kvec], dtype=np.int64)
        twice, arg, count = _max_twice_genus_integral(q, k, bounds)
        twice = Fraction(twice)
    else:
        twice, arg, count = _max_twice_genus_exact(block, kvec, bounds)
    max_genus = twice / 2 + 1
    worst = {c: int(z) for c, z in zip(names, arg)}
    return ContractionVerdict(
        names, True, zf, zf_genus, count, max_genus, worst, max_genus <= 0, bound_multiplier
    )


# -- Platonic triples ---------------------------------------------------------


def platonic_check(multiset: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """Sorted triple when ``1/a + 1/b + 1/c > 1``; None otherwise.

    These are exactly (2,3,5), (2,3,4), (2,3,3) and (2,2,a) for a >= 2.
    """
    if len(multiset) != 3 or any(int(m) != m or m < 2 for m in multiset):
        return None
    t = a, b, c = tuple(sorted(int(m) for m in multiset))
    if a * b + b * c + c * a > a * b * c:
        return t
    return None


# -- classifier ---------------------------------------------------------------

PRECONDITION_FAILED = "PreconditionFailed"
CASE1 = "Case1MinusOne"
CASE2 = "Case2"


@dataclass
class CurveClassification:
    case_tag: str
    curve: str
    report: PairDegreeReport
    genus: Optional[Fraction] = None
    e: Optional[int] = None
    ceil_count: Optional[Fraction] = None
    multiplicities: Optional[list[int]] = None
    platonic: Optional[tuple[int, int, int]] = None
    minus_one_certified: bool = False
    certificate: Optional[tuple[int, int]] = None
    bounds: dict = field(default_factory=dict)
    verdict: str = ""

    def to_json(self) -> dict:
        opt = lambda q: None if q is None else format_rational(q)  # noqa: E731
        return {
            "curve": self.curve,
            "case": self.case_tag,
            "verdict": self.verdict,
            "genus": opt(self.genus),
            "e": self.e,
            "ceil_count": opt(self.ceil_count),
            "multiplicities": self.multiplicities,
            "platonic": None if self.platonic is None else list(self.platonic),
            "minus_one_certified": self.minus_one_certified,
            "certificate": None if self.certificate is None else {"m": self.certificate[0], "n": self.certificate[1]},
            "bounds": self.bounds,
            "degrees": self.report.to_json(),
        }


def _integral_mult(delta: OrbifoldDivisor, curve: str) -> int:
    m = delta.multiplicity(curve)
    if m.denominator != 1:
        raise NotOrbifold(f"coefficient of {curve!r} is not of the form 1 - 1/m with m an integer")
    return int(m)


def _delta_prime_multiplicities(config: CurveConfig, delta: OrbifoldDivisor, curve: str) -> list[int]:
    """Multiplicities ``m_i`` of the points where ``Delta'`` meets ``E``, one per point."""
    out = []
    for c in delta.components:
        if c == curve or delta.coefficient(c) == 0:
            continue
        meet = config.dot(curve, c)
        if meet.denominator != 1 or meet < 0:
            raise InconsistentInput(f"{curve} . {c} = {format_rational(meet)} is not a nonnegative integer")
        out.extend([_integral_mult(delta, c)] * int(meet))
    return sorted(out)


def minus_one_certificate(e: int, dprime: Fraction) -> Optional[tuple[int, int]]:
    """Positive integers ``m <= n`` with ``dprime = (1 - 1/(e m)) + (1 - 1/(e n))``.

    Writing ``t = 2 - dprime``, the smaller term satisfies
    ``t/2 <= 1/(e m) < t``, so ``m`` ranges over a finite interval.
    """
    t = 2 - dprime
    if t <= 0:
        return None
    m_max = int(2 / (e * t))
    for m in range(1, m_max + 1):
        rest = t - Fraction(1, e * m)
        if rest <= 0:
            continue
        n = 1 / (e * rest)
        if n.denominator == 1 and n >= m:
            return m, int(n)
    return None


def classify_negative_curve(config: CurveConfig, delta: OrbifoldDivisor, curve: str) -> CurveClassification:
    """Apply the numerical contraction criterion for a curve ``E`` on an orbifold pair.

    Under ``E^2 < 0`` and ``(K + Delta) . E < 0`` the curve is smooth rational.
    Off the boundary it is a (-1)-curve with ``E . Delta < 1``. On the
    boundary, with ``Delta = Delta' + (1 - 1/e) E``, ``E . ceil(Delta') <= 3``;
    equality forces a Platonic triple of multiplicities, and below it the
    curve is certified (-1) when ``E . Delta' = (1 - 1/(em)) + (1 - 1/(en))``.

    Raises InconsistentInput when a guaranteed conclusion fails, since the
    configuration then cannot satisfy the hypotheses.
    """
    if not config.smooth_model:
        raise NotSmoothModel("the classifier needs a model that is smooth along the curve")
    delta.check_against(config)
    rep = pair_degree(config, delta, curve)
    if not (rep.e_self < 0 and rep.pair_deg < 0):
        failed = []
        if rep.e_self >= 0:
            failed.append("E^2 < 0")
        if rep.pair_deg >= 0:
            failed.append("(K + Delta).E < 0")
        return CurveClassification(PRECONDITION_FAILED, curve, rep, verdict="precondition failed: " + ", ".join(failed))

    genus = arithmetic_genus(config, config.unit(curve))
    if genus != 0:
        raise InconsistentInput(f"p_a({curve}) = {format_rational(genus)} but the criterion forces 0")

    if curve not in delta or rep.e_coefficient == 0:
        if not (rep.e_self == -1 and rep.k_deg == -1):
            raise InconsistentInput(f"{curve} lies off the boundary but is not a (-1)-curve")
        if not rep.delta_deg < 1:
            raise InconsistentInput(f"{curve}.Delta = {format_rational(rep.delta_deg)} is not < 1")
        return CurveClassification(
            CASE1, curve, rep, genus=genus, e=1, ceil_count=rep.ceil_count,
            minus_one_certified=True, verdict="(-1)-curve off the boundary",
        )

    e = _integral_mult(delta, curve)
    mults = _delta_prime_multiplicities(config, delta, curve)
    if rep.ceil_count > 3:
        raise InconsistentInput(f"E.ceil(Delta') = {format_rational(rep.ceil_count)} exceeds 3")
    bounds = {"self_intersection_lower_bound": rep.e_self > e * (rep.delta_prime_deg - 2)}
    out = CurveClassification(CASE2, curve, rep, genus=genus, e=e, ceil_count=rep.ceil_count, multiplicities=mults, bounds=bounds)
    if rep.ceil_count == 3:
        out.platonic = platonic_check(mults)
        if out.platonic is None:
            raise InconsistentInput(f"multiplicities {mults} meeting {curve} are not a Platonic triple")
        out.verdict = "Platonic triple " + str(out.platonic)
        return out
    cert = minus_one_certificate(e, rep.delta_prime_deg)
    if cert is None:
        out.verdict = "inconclusive: no (-1) certificate applies"
        return out
    m, n = cert
    bounds["one_le_minus_self"] = 1 <= -rep.e_self
    bounds["minus_self_lt_inv_sum"] = -rep.e_self < Fraction(1, m) + Fraction(1, n)
    if rep.e_self != -1 or not bounds["self_intersection_lower_bound"]:
        raise InconsistentInput(f"{curve} satisfies the (-1) certificate but E^2 = {format_rational(rep.e_self)}")
    out.certificate = cert
    out.minus_one_certified = True
    out.verdict = "(-1)-curve certified"
    return out
