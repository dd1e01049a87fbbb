"""One step of the two-dimensional minimal model program, and a runner."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .contraction import CurveClassification, artin_test, classify_negative_curve
from .errors import ContractionFailed
from .orbifold import OrbifoldDivisor, PairDegreeReport, pair_degree
from .surface import CurveConfig, contract

CONTRACTED = "ContractedDivisorial"
FIBER = "FiberCase"
PLANE = "PlaneCase"
NO_VIOLATION = "NoListedViolation"
TERMINAL_KINDS = frozenset({FIBER, PLANE, NO_VIOLATION})


@dataclass
class StepOutcome:
    kind: str
    curve: Optional[str] = None
    report: Optional[PairDegreeReport] = None
    next_config: Optional[CurveConfig] = None
    next_delta: Optional[OrbifoldDivisor] = None
    classification: Optional[CurveClassification] = None

    @property
    def note(self) -> str:
        return {
            CONTRACTED: "curve contracted; boundary pushed forward",
            FIBER: "E^2 = 0: fibre of a ruling on which -(K+D) is relatively ample (asserted, not constructed)",
            PLANE: "E^2 > 0: the surface is the projective plane with -(K+D) ample (asserted, not constructed)",
            NO_VIOLATION: "no listed curve is (K+D)-negative; this is not a nef certificate",
        }[self.kind]

    def to_json(self) -> dict:
        # Imported here: io imports this module for trace emission.
        from .io import boundary_to_json, config_to_json

        return {
            "kind": self.kind,
            "curve": self.curve,
            "degrees": None if self.report is None else self.report.to_json(),
            "classification": None if self.classification is None else self.classification.to_json(),
            "next_config": None if self.next_config is None else config_to_json(self.next_config),
            "next_delta": None if self.next_delta is None else boundary_to_json(self.next_delta),
            "note": self.note,
        }


def _group(rep: PairDegreeReport) -> int:
    if rep.e_self < 0:
        return 0
    return 1 if rep.e_self == 0 else 2


def find_negative_extremal(config: CurveConfig, delta: OrbifoldDivisor) -> list[tuple[str, PairDegreeReport]]:
    """Listed curves with ``(K + Delta) . E < 0``: negative, then zero, then positive self-intersection."""
    delta.check_against(config)
    found = []
    for i, c in enumerate(config.curves):
        rep = pair_degree(config, delta, c)
        if rep.pair_deg < 0:
            found.append((_group(rep), i, c, rep))
    found.sort(key=lambda t: (t[0], t[1]))
    return [(c, rep) for _, _, c, rep in found]


def mmp_step(config: CurveConfig, delta: OrbifoldDivisor) -> StepOutcome:
    candidates = find_negative_extremal(config, delta)
    if not candidates:
        return StepOutcome(NO_VIOLATION)
    curve, rep = candidates[0]
    if rep.e_self == 0:
        return StepOutcome(FIBER, curve, rep)
    if rep.e_self > 0:
        return StepOutcome(PLANE, curve, rep)
    cls = classify_negative_curve(config, delta, curve)
    verdict = artin_test(config, [curve])
    if not verdict.contractible:
        raise ContractionFailed(f"{curve} fails the contractibility test: {verdict.to_json()}")
    return StepOutcome(
        CONTRACTED,
        curve,
        rep,
        next_config=contract(config, [curve]),
        next_delta=delta.without(curve),
        classification=cls,
    )


def mmp_run(config: CurveConfig, delta: OrbifoldDivisor, max_steps: int = 50) -> list[StepOutcome]:
    """Iterate :func:`mmp_step` until a terminal outcome or ``max_steps`` steps."""
    trace: list[StepOutcome] = []
    for _ in range(max_steps):
        step = mmp_step(config, delta)
        trace.append(step)
        if step.kind in TERMINAL_KINDS:
            break
        config, delta = step.next_config, step.next_delta
    return trace
