"""JSON file formats and the validated problem bundle.

All rationals travel as canonical strings (see :func:`lattice.format_rational`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from . import lattice
from .discrepancy import DEFAULT_DEPTH, MAX_DEPTH, BDivisorSpec
from .errors import OrbisurfError, ParseError, ValidationError
from .orbifold import Frac, Mult, OrbifoldDivisor
from .surface import CurveConfig, validate


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _rat(value: Any, where: str) -> Fraction:
    if not isinstance(value, str):
        raise ParseError(f"{where}: expected a rational string, got {type(value).__name__}")
    try:
        return lattice.parse_rational(value)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _expect(obj: Any, kind: type, where: str):
    if not isinstance(obj, kind) or (kind is int and isinstance(obj, bool)):
        raise ParseError(f"{where}: expected {kind.__name__}, got {type(obj).__name__}")
    return obj


def _keys(obj: dict, required: set[str], optional: set[str], where: str):
    missing = required - obj.keys()
    if missing:
        raise ParseError(f"{where}: missing key(s) {sorted(missing)}")
    extra = obj.keys() - required - optional
    if extra:
        raise ParseError(f"{where}: unknown key(s) {sorted(extra)}")


# -- surface ------------------------------------------------------------------


def config_to_json(config: CurveConfig) -> dict:
    f = lattice.format_rational
    return {
        "name": config.name,
        "smooth_model": config.smooth_model,
        "curves": list(config.curves),
        "form": [[f(v) for v in row] for row in config.form],
        "kdeg": [f(v) for v in config.kdeg],
        "k_self": None if config.k_self is None else f(config.k_self),
    }


def config_from_json(obj: Any, where: str = "surface") -> CurveConfig:
    _expect(obj, dict, where)
    _keys(obj, {"curves", "form", "kdeg"}, {"name", "smooth_model", "k_self"}, where)
    name = _expect(obj.get("name", ""), str, f"{where}.name")
    smooth = _expect(obj.get("smooth_model", True), bool, f"{where}.smooth_model")
    curves = _expect(obj["curves"], list, f"{where}.curves")
    for i, c in enumerate(curves):
        _expect(c, str, f"{where}.curves[{i}]")
    rows = _expect(obj["form"], list, f"{where}.form")
    form = []
    for i, row in enumerate(rows):
        _expect(row, list, f"{where}.form[{i}]")
        form.append(tuple(_rat(v, f"{where}.form[{i}][{j}]") for j, v in enumerate(row)))
    kdeg = [_rat(v, f"{where}.kdeg[{i}]") for i, v in enumerate(_expect(obj["kdeg"], list, f"{where}.kdeg"))]
    k_self = obj.get("k_self")
    k_self = None if k_self is None else _rat(k_self, f"{where}.k_self")
    return CurveConfig(tuple(curves), tuple(form), tuple(kdeg), k_self, smooth, name)


# -- boundary -----------------------------------------------------------------


def boundary_to_json(delta: OrbifoldDivisor) -> dict:
    comps = []
    for c, coeff in delta.components.items():
        if isinstance(coeff, Mult):
            comps.append({"curve": c, "m": coeff.m})
        else:
            comps.append({"curve": c, "d": lattice.format_rational(coeff.d)})
    return {"components": comps}


def boundary_from_json(obj: Any, where: str = "boundary") -> OrbifoldDivisor:
    _expect(obj, dict, where)
    _keys(obj, {"components"}, set(), where)
    comps: dict = {}
    for i, item in enumerate(_expect(obj["components"], list, f"{where}.components")):
        at = f"{where}.components[{i}]"
        _expect(item, dict, at)
        curve = _expect(item.get("curve"), str, f"{at}.curve")
        if curve in comps:
            raise ValidationError(f"{at}: curve {curve!r} appears twice")
        if ("m" in item) == ("d" in item):
            raise ParseError(f"{at}: exactly one of 'm' or 'd' is required")
        _keys(item, {"curve"}, {"m", "d"}, at)
        try:
            if "m" in item:
                comps[curve] = Mult(_expect(item["m"], int, f"{at}.m"))
            else:
                comps[curve] = Frac(_rat(item["d"], f"{at}.d"))
        except ValidationError as exc:
            raise ValidationError(f"{at}: {exc}") from None
    return OrbifoldDivisor(comps)


# -- b-divisor spec -----------------------------------------------------------


def _ram_to_json(r: Fraction):
    return int(r) if r.denominator == 1 else lattice.format_rational(r)


def _ram_from_json(value: Any, where: str) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return _rat(value, where)


def bspec_to_json(spec: BDivisorSpec) -> dict:
    return {
        "base_ram": {c: _ram_to_json(r) for c, r in spec.base_ram.items()},
        "exceptional_ram": {a: _ram_to_json(r) for a, r in spec.exceptional_ram.items()},
        "default_ram": _ram_to_json(spec.default_ram),
    }


def bspec_from_json(obj: Any, where: str = "bdiv") -> BDivisorSpec:
    _expect(obj, dict, where)
    _keys(obj, set(), {"base_ram", "exceptional_ram", "default_ram"}, where)
    base = _expect(obj.get("base_ram", {}), dict, f"{where}.base_ram")
    exc = _expect(obj.get("exceptional_ram", {}), dict, f"{where}.exceptional_ram")
    try:
        return BDivisorSpec(
            {c: _ram_from_json(r, f"{where}.base_ram.{c}") for c, r in base.items()},
            {a: _ram_from_json(r, f"{where}.exceptional_ram.{a}") for a, r in exc.items()},
            _ram_from_json(obj.get("default_ram", 1), f"{where}.default_ram"),
        )
    except ParseError:
        raise
    except OrbisurfError as exc_:
        raise ValidationError(f"{where}: {exc_}") from None


# -- files and bundles --------------------------------------------------------


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


@dataclass
class ProblemBundle:
    config: CurveConfig
    delta: Optional[OrbifoldDivisor] = None
    bdiv: Optional[BDivisorSpec] = None
    depth: int = DEFAULT_DEPTH
    epsilon: Fraction = Fraction(1, 2)
    bound_multiplier: int = 2
    max_steps: int = 50
    options: dict = field(default_factory=dict)

    @property
    def boundary(self) -> OrbifoldDivisor:
        return self.delta if self.delta is not None else OrbifoldDivisor()

    def check(self, config_invariants: bool = True) -> None:
        if config_invariants:
            report = validate(self.config)
            if not report.valid:
                raise ValidationError("surface: " + "; ".join(report.violations))
        for c in self.boundary.components:
            if c not in self.config.curves:
                raise ValidationError(f"boundary: component {c!r} is not a curve of the surface")
        if self.bdiv is not None:
            for c in self.bdiv.base_ram:
                if c not in self.config.curves:
                    raise ValidationError(f"bdiv: base_ram names unknown curve {c!r}")
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be > 0")
        if not 1 <= self.depth:
            raise ValidationError("depth must be >= 1")
        if self.depth > MAX_DEPTH:
            raise ValidationError(f"depth must be <= {MAX_DEPTH}")
        if self.bound_multiplier < 1:
            raise ValidationError("bound_multiplier must be >= 1")
        if self.max_steps < 0:
            raise ValidationError("max_steps must be >= 0")

    def to_json(self) -> dict:
        return {
            "surface": config_to_json(self.config),
            "boundary": None if self.delta is None else boundary_to_json(self.delta),
            "bdiv": None if self.bdiv is None else bspec_to_json(self.bdiv),
        }


def load_bundle(
    surface,
    boundary=None,
    bdiv=None,
    *,
    depth: int = DEFAULT_DEPTH,
    epsilon="1/2",
    bound_multiplier: int = 2,
    max_steps: int = 50,
    config_invariants: bool = True,
) -> ProblemBundle:
    """Load and cross-check a problem from file paths or already-parsed JSON objects."""

    def obj(src):
        return src if isinstance(src, (dict, list)) else read_json(src)

    config = config_from_json(obj(surface))
    delta = None if boundary is None else boundary_from_json(obj(boundary))
    spec = None if bdiv is None else bspec_from_json(obj(bdiv))
    eps = epsilon if isinstance(epsilon, Fraction) else _rat(str(epsilon), "epsilon")
    bundle = ProblemBundle(config, delta, spec, depth, eps, bound_multiplier, max_steps)
    bundle.check(config_invariants)
    return bundle
