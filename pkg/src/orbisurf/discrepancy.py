"""Discrepancies over bounded blowup towers and the a/b/b' calculus.

Exceptional divisors over a smooth surface are reached by finite words of
point blowups. On an SNC boundary the discrepancy of a new exceptional
curve only depends on which tracked curves pass through the blown-up point:

    a(E_new) = 1 - sum(c(D) for D through the center)

where ``c(D)`` is the boundary coefficient of a base curve and ``-a(E_j)``
for an exceptional curve extracted earlier in the same word.

Addresses serialize a word as ``step;step;...`` with ``*`` for a general
point, ``C`` for a general point of curve ``C`` and ``C^D#k`` for the k-th
intersection point of ``C`` and ``D``. The exceptional curve created by
step ``i`` (1-based) of a word is called ``@i`` inside that word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from . import lattice
from .errors import BadRamification, DepthTooLarge, NotSmoothModel, ValidationError
from .lattice import NEG_INF, format_rational
from .orbifold import Frac, Mult, OrbifoldDivisor, round_down
from .surface import BlowupCenter, CurveConfig

DEFAULT_DEPTH = 3
MAX_DEPTH = 6


def step_string(center: BlowupCenter) -> str:
    if not center.through:
        return "*"
    if len(center.through) == 1:
        return center.through[0]
    c, d = center.through
    return f"{c}^{d}#{center.point_index}"


def address_string(address) -> str:
    return ";".join(step_string(c) for c in address)


def parse_address(text: str) -> tuple[BlowupCenter, ...]:
    steps = []
    for step in text.split(";"):
        if step == "*":
            steps.append(BlowupCenter())
        elif "^" in step:
            pair, sep, k = step.partition("#")
            c, _, d = pair.partition("^")
            if not sep or not c or not d or not k.isdigit():
                raise ValidationError(f"malformed address step {step!r}")
            steps.append(BlowupCenter((c, d), int(k)))
        elif step:
            steps.append(BlowupCenter((step,)))
        else:
            raise ValidationError(f"empty step in address {text!r}")
    return tuple(steps)


@dataclass(frozen=True)
class TowerNode:
    address: tuple[BlowupCenter, ...]
    a_disc: Fraction
    r_index: Optional[Fraction] = None
    b_disc: Optional[Fraction] = None
    b_prime: Optional[Fraction] = None

    @property
    def depth(self) -> int:
        return len(self.address)

    @property
    def address_string(self) -> str:
        return address_string(self.address)

    def to_json(self) -> dict:
        opt = lambda q: None if q is None else format_rational(q)  # noqa: E731
        return {
            "address": self.address_string,
            "depth": self.depth,
            "a": format_rational(self.a_disc),
            "r": opt(self.r_index),
            "b": opt(self.b_disc),
            "b_prime": opt(self.b_prime),
        }


def _check_tower_input(config: CurveConfig, delta: OrbifoldDivisor, depth: int, max_depth: int):
    if not config.smooth_model:
        raise NotSmoothModel("discrepancy towers are computed over smooth models only")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > max_depth:
        raise DepthTooLarge(f"depth {depth} exceeds the cap {max_depth}")
    delta.check_against(config)


def tower_discrepancies(
    config: CurveConfig,
    delta: OrbifoldDivisor,
    depth: int = DEFAULT_DEPTH,
    max_depth: int = MAX_DEPTH,
) -> list[TowerNode]:
    """Every exceptional divisor reachable by at most ``depth`` blowups, with its discrepancy.

    Only boundary curves (positive coefficient) and extracted exceptionals are
    tracked: a point on a coefficient-0 curve behaves like a general point.
    Nodes come back sorted by ``(depth, address string)``.
    """
    _check_tower_input(config, delta, depth, max_depth)
    base = [c for c in config.curves if delta.coefficient(c) > 0]
    names = list(base)
    coeffs = [delta.coefficient(c) for c in base]
    meets: dict[tuple[int, int], int] = {}
    for i, ci in enumerate(base):
        for j in range(i + 1, len(base)):
            m = config.dot(ci, base[j])
            if m.denominator != 1 or m < 0:
                raise ValidationError(f"{ci} . {base[j]} = {format_rational(m)} is not a nonnegative integer")
            if m:
                meets[(i, j)] = int(m)

    nodes: list[TowerNode] = []
    word: list[BlowupCenter] = []

    def centers():
        yield ()
        for i in range(len(names)):
            yield (i,)
        for (i, j), m in sorted(meets.items()):
            for k in range(m):
                yield (i, j, k)

    def descend(level: int):
        for spec in list(centers()):
            through = spec[:2] if len(spec) == 3 else spec
            k = spec[2] if len(spec) == 3 else 0
            a = 1 - sum((coeffs[t] for t in through), Fraction(0))
            center = BlowupCenter(tuple(names[t] for t in through), k)
            word.append(center)
            nodes.append(TowerNode(tuple(word), a))
            if level < depth:
                new = len(names)
                names.append(f"@{level}")
                coeffs.append(-a)
                saved = dict(meets)
                if len(through) == 2:
                    pair = (through[0], through[1])
                    meets[pair] -= 1
                    if not meets[pair]:
                        del meets[pair]
                for t in through:
                    meets[(t, new)] = 1
                descend(level + 1)
                meets.clear()
                meets.update(saved)
                names.pop()
                coeffs.pop()
            word.pop()

    descend(1)
    nodes.sort(key=lambda n: (n.depth, n.address_string))
    return nodes


def infimum(values) -> Fraction | float:
    """Minimum of witnessed discrepancies; ``NEG_INF`` once any value is below -1.

    A divisor with discrepancy below -1 can be blown up repeatedly to push
    the discrepancy to minus infinity.
    """
    values = list(values)
    if not values:
        raise ValueError("no discrepancies witnessed")
    low = min(values)
    return NEG_INF if low < -1 else low


def discrep_estimate(config: CurveConfig, delta: OrbifoldDivisor, depth: int = DEFAULT_DEPTH, max_depth: int = MAX_DEPTH):
    return infimum(n.a_disc for n in tower_discrepancies(config, delta, depth, max_depth))


def snc_closed_form(config: CurveConfig, delta: OrbifoldDivisor) -> Fraction:
    """``min(1, min_i (1 - d_i), min over meeting pairs (1 - d_i - d_j))``."""
    if not config.smooth_model:
        raise NotSmoothModel("closed form applies to SNC pairs on smooth models")
    delta.check_against(config)
    support = [c for c in config.curves if delta.coefficient(c) > 0]
    best = Fraction(1)
    for i, c in enumerate(support):
        dc = delta.coefficient(c)
        best = min(best, 1 - dc)
        for d in support[i + 1:]:
            if config.dot(c, d) > 0:
                best = min(best, 1 - dc - delta.coefficient(d))
    return best


# -- b-divisors ---------------------------------------------------------------


def _ram(value, where: str) -> Fraction:
    r = lattice.to_rational(value)
    if r < 1:
        raise BadRamification(f"ramification index {format_rational(r)} for {where} is below 1")
    return r


@dataclass(frozen=True)
class BDivisorSpec:
    """Finite presentation of a b-divisor by ramification indices.

    Base curves not named in ``base_ram`` get coefficient 0 on the base;
    ``default_ram`` applies to every exceptional divisor whose address is not
    named in ``exceptional_ram``.
    """

    base_ram: Mapping[str, Fraction] = field(default_factory=dict)
    exceptional_ram: Mapping[str, Fraction] = field(default_factory=dict)
    default_ram: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "base_ram", {c: _ram(r, c) for c, r in self.base_ram.items()})
        object.__setattr__(
            self, "exceptional_ram", {address_string(parse_address(a)): _ram(r, a) for a, r in self.exceptional_ram.items()}
        )
        object.__setattr__(self, "default_ram", _ram(self.default_ram, "default"))

    @property
    def is_b_orbifold(self) -> bool:
        values = [*self.base_ram.values(), *self.exceptional_ram.values(), self.default_ram]
        return all(r.denominator == 1 for r in values)

    def trace(self, config: Optional[CurveConfig] = None) -> OrbifoldDivisor:
        """The boundary on the base, ``d = 1 - 1/r`` on each named curve."""
        comps = {}
        for c, r in self.base_ram.items():
            comps[c] = Mult(int(r)) if r.denominator == 1 else Frac(1 - 1 / r)
        delta = OrbifoldDivisor(comps)
        if config is not None:
            delta.check_against(config)
        return delta

    def ramification(self, address: str) -> Fraction:
        return self.exceptional_ram.get(address, self.default_ram)


def b_from_a(a: Fraction, r: Fraction) -> tuple[Fraction, Fraction]:
    """``(b, b')`` from ``b + 1 = r (a + 1)`` and ``b' = b / r``."""
    b = r * (a + 1) - 1
    return b, b / r


def b_tower(config: CurveConfig, spec: BDivisorSpec, depth: int = DEFAULT_DEPTH, max_depth: int = MAX_DEPTH) -> list[TowerNode]:
    delta = spec.trace(config)
    out = []
    for node in tower_discrepancies(config, delta, depth, max_depth):
        r = spec.ramification(node.address_string)
        b, bp = b_from_a(node.a_disc, r)
        out.append(TowerNode(node.address, node.a_disc, r, b, bp))
    return out


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class PairClass:
    kind: str  # "pair" or "b-pair"
    infimum: Fraction | float
    search_depth: int
    flags: Mapping[str, bool]
    epsilon: Optional[Fraction] = None
    nodes_checked: int = 0

    def __getitem__(self, flag: str) -> bool:
        return self.flags[flag]

    @property
    def note(self) -> str:
        return f"infimum witnessed over blowup words of length <= {self.search_depth}; exact for lc SNC pairs"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "inf": format_rational(self.infimum),
            "search_depth": self.search_depth,
            "nodes_checked": self.nodes_checked,
            "epsilon": None if self.epsilon is None else format_rational(self.epsilon),
            "flags": dict(self.flags),
            "note": self.note,
        }


def pair_flags(inf, epsilon: Fraction, floor_ok: bool) -> dict[str, bool]:
    return {
        "terminal": inf > 0,
        "canonical": inf >= 0,
        "klt": inf > -1 and floor_ok,
        "lc": inf >= -1,
        "eps_terminal": inf > epsilon,
        "eps_canonical": inf >= epsilon,
        "eps_plt": inf > epsilon - 1,
        "eps_lc": inf >= epsilon - 1,
        "eps_klt": inf > epsilon - 1 and floor_ok,
    }


def classify_pair(
    config: CurveConfig,
    delta: OrbifoldDivisor,
    epsilon=Fraction(1, 2),
    depth: int = DEFAULT_DEPTH,
    max_depth: int = MAX_DEPTH,
) -> PairClass:
    epsilon = lattice.to_rational(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    nodes = tower_discrepancies(config, delta, depth, max_depth)
    inf = infimum(n.a_disc for n in nodes)
    floor_ok = not any(round_down(delta, config))
    return PairClass("pair", inf, depth, pair_flags(inf, epsilon, floor_ok), epsilon, len(nodes))


def b_pair_flags(inf) -> dict[str, bool]:
    return {
        "b_terminal": inf > 0,
        "b_canonical": inf >= 0,
        "b_lt": inf > -1,
        "b_lc": inf >= -1,
    }


def classify_b_pair(config: CurveConfig, spec: BDivisorSpec, depth: int = DEFAULT_DEPTH, max_depth: int = MAX_DEPTH) -> PairClass:
    nodes = b_tower(config, spec, depth, max_depth)
    inf = infimum(n.b_disc for n in nodes)
    return PairClass("b-pair", inf, depth, b_pair_flags(inf), None, len(nodes))


# -- the elementary comparison between a, b and b' ---------------------------


def check_prop51(a, r, epsilon, delta_param) -> dict:
    """Evaluate both implications comparing ``a``, ``b``, ``b'`` at one exceptional divisor.

    (i)  ``b > eps + delta``  implies  ``b' > (eps + delta)/r``  and  ``a > (eps + delta + 1)/r - 1``.
    (ii) ``a > eps + delta``  implies  ``b > r(eps + delta + 1) - 1``  and  ``b' > eps + delta + 1 - 1/r``.

    Each is evaluated with ``>`` and with ``>=``. An implication ``holds``
    when its hypothesis fails or all its conclusions are true.
    """
    a, r = lattice.to_rational(a), lattice.to_rational(r)
    eps, dl = lattice.to_rational(epsilon), lattice.to_rational(delta_param)
    if r < 1:
        raise BadRamification("r must be >= 1")
    b, bp = b_from_a(a, r)
    s = eps + dl
    out = {"a": a, "r": r, "b": b, "b_prime": bp, "epsilon": eps, "delta": dl}
    for tag, gt in (("strict", lambda x, y: x > y), ("weak", lambda x, y: x >= y)):
        hyp_i = gt(b, s)
        concl_i = [gt(bp, s / r), gt(a, (s + 1) / r - 1)]
        hyp_ii = gt(a, s)
        concl_ii = [gt(b, r * (s + 1) - 1), gt(bp, s + 1 - 1 / r)]
        out[tag] = {
            "i": {"hypothesis": hyp_i, "conclusions": concl_i, "holds": (not hyp_i) or all(concl_i)},
            "ii": {"hypothesis": hyp_ii, "conclusions": concl_ii, "holds": (not hyp_ii) or all(concl_ii)},
        }
    return out
