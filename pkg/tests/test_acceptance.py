"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

Tolerance is exact throughout. The lines are echoed in the pytest terminal
summary and printed when this file is run directly.
"""

import itertools
import random
import time
from fractions import Fraction as F

import numpy as np

from acceptance_log import record
from generators import (
    b_orbifold_spec,
    blown_up_plane,
    case1_instance,
    case2_instance,
    orbifold_boundary,
    random_center,
    random_rational,
    smooth_config,
)
from orbisurf import contraction
from orbisurf.contraction import CASE1, CASE2, PRECONDITION_FAILED, artin_test, classify_negative_curve, fundamental_cycle, platonic_check
from orbisurf.discrepancy import (
    b_tower,
    check_prop51,
    classify_b_pair,
    classify_pair,
    discrep_estimate,
    snc_closed_form,
    tower_discrepancies,
)
from orbisurf.errors import NotNegativeDefinite
from orbisurf.fixtures import (
    a2_with_tail,
    ade,
    case1,
    case2_minus_one,
    case2_platonic,
    half_line,
    plane,
    plane_blown_up,
    positive_genus,
    quadric,
    two_lines,
)
from orbisurf.lattice import is_negative_definite
from orbisurf.mmp import CONTRACTED, FIBER, PLANE, TERMINAL_KINDS, mmp_run
from orbisurf.orbifold import OrbifoldDivisor
from orbisurf.surface import arithmetic_genus, blow_up, contract, intersect, mumford_pullback

EMPTY = OrbifoldDivisor()

# every node seen by the gate, for the triple identity
SEEN_NODES = []


class Gate:
    def __init__(self, number, title, budget=None):
        self.number, self.title, self.budget = number, title, budget
        self.failures = []
        self.notes = []

    def check(self, ok, message):
        if not ok and len(self.failures) < 5:
            self.failures.append(message)
        return ok

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if self.budget is not None:
            self.check(elapsed < self.budget, f"took {elapsed:.2f}s, budget {self.budget}s")
        detail = "; ".join(self.notes + [f"{elapsed:.2f}s"] + self.failures)
        record(self.number, self.title, not self.failures, detail)
        assert not self.failures, self.failures
        return False


def test_criterion_1_platonic_fidelity():
    listed = {(2, 3, 5), (2, 3, 4), (2, 3, 3)} | {(2, 2, a) for a in range(2, 51)}
    with Gate(1, "Platonic fidelity over [2,50]^3", budget=1.0) as g:
        count = 0
        for t in itertools.product(range(2, 51), repeat=3):
            count += 1
            got = platonic_check(t)
            key = tuple(sorted(t))
            a, b, c = t
            harmonic = b * c + a * c + a * b > a * b * c  # 1/a + 1/b + 1/c > 1
            g.check((got is not None) == (key in listed) == harmonic, f"{t}")
            if got is not None:
                g.check(got == key, f"{t} -> {got}")
        g.note(f"{count} triples")


def _independent_case_checks(g, cfg, delta, cls):
    e = cfg.index("E")
    e2, ke = cfg.form[e][e], cfg.kdeg[e]
    if cls.case_tag == PRECONDITION_FAILED:
        pair = ke + sum(delta.coefficient(c) * cfg.form[e][cfg.index(c)] for c in cfg.curves)
        g.check(e2 >= 0 or pair >= 0, f"precondition wrongly failed: {cfg.form}")
        return
    g.check((e2 + ke) / 2 + 1 == 0, f"p_a(E) != 0: {cfg.form}")
    others = [c for c in cfg.curves if c != "E"]
    if cls.case_tag == CASE1:
        g.check("E" not in delta, "Case 1 with E in the boundary")
        g.check(e2 == ke == -1, f"Case 1 identities fail: E^2={e2}, K.E={ke}")
        g.check(sum(delta.coefficient(c) * cfg.form[e][cfg.index(c)] for c in others) < 1, "E.Delta >= 1")
    else:
        g.check(cls.case_tag == CASE2 and "E" in delta, f"unexpected tag {cls.case_tag}")
        ceil = sum(cfg.form[e][cfg.index(c)] for c in others if delta.coefficient(c) > 0)
        g.check(ceil <= 3, f"E.ceil(Delta') = {ceil} > 3")
        g.check(ceil == cls.ceil_count, "ceil_count disagrees")
        if ceil == 3:
            g.check(cls.platonic is not None, "three boundary meetings without a Platonic triple")


def test_criterion_2_negative_curve_conclusions():
    rng = random.Random(2002)
    with Gate(2, "negative-curve classification suite", budget=10.0) as g:
        tags = {PRECONDITION_FAILED: 0, CASE1: 0, CASE2: 0}
        for i in range(1200):
            cfg, delta = (case1_instance if i % 2 else case2_instance)(rng)
            cls = classify_negative_curve(cfg, delta, "E")
            tags[cls.case_tag] += 1
            _independent_case_checks(g, cfg, delta, cls)
        g.check(tags[CASE1] >= 100 and tags[CASE2] >= 100, f"thin coverage {tags}")
        g.note(f"1200 instances {tags}")

        cls = classify_negative_curve(*case1(), "E")
        g.check(cls.case_tag == CASE1 and cls.report.delta_deg == F(1, 2), "Case 1 fixture")
        cls = classify_negative_curve(*case2_platonic(), "E")
        g.check(
            cls.case_tag == CASE2 and cls.e == 31 and cls.ceil_count == 3 and cls.platonic == (2, 3, 5)
            and cls.report.pair_deg == F(-1, 930) and cls.report.delta_prime_deg == F(59, 30),
            "Platonic fixture",
        )
        cls = classify_negative_curve(*case2_minus_one(), "E")
        g.check(
            cls.case_tag == CASE2 and cls.e == 2 and cls.ceil_count == 2 and cls.minus_one_certified
            and cls.certificate == (1, 3) and cls.report.pair_deg == F(-1, 6),
            "(-1)-certified fixture",
        )


def _not_nd_by_box(n, values=range(-3, 4), bound=18):
    """Sign-check oracle: which symmetric integer matrices admit x != 0 with x^T M x >= 0.

    For entries in [-3, 3] and n <= 3 a witness with |x_i| <= 18 always exists
    when M is not negative definite: a unit vector, a point inside the
    positive sector of a 2x2 block (|x_i| <= 15), or an adjugate column.
    """
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    mats = np.array(list(itertools.product(values, repeat=len(pairs))), dtype=np.float64)
    pts = np.array([x for x in itertools.product(range(-bound, bound + 1), repeat=n) if x > (0,) * n], dtype=np.float64)
    pts = pts[np.argsort(np.abs(pts).sum(axis=1), kind="stable")]
    mono = np.stack([pts[:, i] * pts[:, j] * (1 if i == j else 2) for i, j in pairs])
    found = np.zeros(len(mats), dtype=bool)
    for start in range(0, len(pts), 512):
        todo = np.flatnonzero(~found)
        if not len(todo):
            break
        q = mats[todo] @ mono[:, start:start + 512]
        found[todo] = (q >= 0).any(axis=1)
    return pairs, mats.astype(int), found


def test_criterion_3_artin_laufer():
    with Gate(3, "Artin/Laufer suite", budget=30.0) as g:
        a2, d4 = ade("A", 2), ade("D", 4)
        z = fundamental_cycle(a2, a2.curves)
        g.check(z == {"C1": 1, "C2": 1} and arithmetic_genus(a2, a2.vector(z)) == 0, f"A2 cycle {z}")
        z = fundamental_cycle(d4, d4.curves)
        g.check(z == {"C0": 2, "C1": 1, "C2": 1, "C3": 1} and arithmetic_genus(d4, d4.vector(z)) == 0, f"D4 cycle {z}")

        kinds = [("A", n) for n in range(1, 7)] + [("D", n) for n in range(4, 7)] + [("E", 6), ("E", 7), ("E", 8)]
        for kind, n in kinds:
            cfg = ade(kind, n)
            g.check(artin_test(cfg, cfg.curves).contractible, f"{kind}{n} not contractible")
        g.check(not artin_test(positive_genus(), ["C1", "C2"]).contractible, "positive genus passed")

        calls = []
        real = contraction._laufer_loop
        contraction._laufer_loop = lambda *a: calls.append(a) or real(*a)
        try:
            for cfg in (quadric(), plane(), two_lines()[0]):
                try:
                    fundamental_cycle(cfg, cfg.curves)
                    g.check(False, f"{cfg.name}: no NotNegativeDefinite")
                except NotNegativeDefinite:
                    pass
            g.check(not calls, "Laufer loop entered on a non-definite bunch")
            fundamental_cycle(d4, d4.curves)
            g.check(len(calls) == 1, "Laufer loop not entered on D4")
        finally:
            contraction._laufer_loop = real

        total = 0
        for n in (1, 2, 3):
            pairs, mats, not_nd = _not_nd_by_box(n)
            for row, bad in zip(mats.tolist(), not_nd.tolist()):
                m = [[0] * n for _ in range(n)]
                for (i, j), v in zip(pairs, row):
                    m[i][j] = m[j][i] = v
                g.check(is_negative_definite(m) == (not bad), f"definiteness mismatch {m}")
            total += len(mats)
        g.note(f"{total} matrices")


def test_criterion_4_discrepancy_exactness():
    rng = random.Random(4004)
    with Gate(4, "discrepancy equals the SNC closed form at depths 1-3", budget=60.0) as g:
        cases = 0
        while cases < 1000:
            cfg = smooth_config(rng, rng.randint(1, 3))
            delta = orbifold_boundary(rng, cfg, mmax=12)
            closed = snc_closed_form(cfg, delta)
            for depth in (1, 2, 3):
                nodes = tower_discrepancies(cfg, delta, depth)
                got = min(n.a_disc for n in nodes)
                g.check(got == closed == discrep_estimate(cfg, delta, depth), f"{cfg.form} {delta} depth {depth}: {got} vs {closed}")
            if cases % 50 == 0:
                SEEN_NODES.extend(b_tower(cfg, b_orbifold_spec(rng, cfg, [n.address_string for n in nodes]), 3))
            cases += 1
        g.note(f"{cases} boundaries")


def test_criterion_5_b_calculus():
    rng = random.Random(5005)
    with Gate(5, "b-discrepancy calculus and implication checks") as g:
        for _ in range(50):
            cfg = smooth_config(rng, rng.randint(1, 3))
            plain = tower_discrepancies(cfg, EMPTY, 2)
            SEEN_NODES.extend(b_tower(cfg, b_orbifold_spec(rng, cfg, [n.address_string for n in plain]), 3))
        for n in SEEN_NODES:
            g.check(n.b_disc + 1 == n.r_index * (n.a_disc + 1), f"b+1 != r(a+1) at {n.address_string}")
            g.check(n.b_prime == n.b_disc / n.r_index, f"b' != b/r at {n.address_string}")
            g.check(n.b_prime == n.a_disc + 1 - 1 / n.r_index, f"b' != a+1-1/r at {n.address_string}")
            if n.r_index == 1:
                g.check(n.b_disc == n.a_disc, f"r=1 collapse fails at {n.address_string}")
        g.note(f"{len(SEEN_NODES)} nodes")

        for _ in range(10000):
            a = random_rational(rng, -3, 6)
            r = F(rng.randint(1, 12))
            eps = F(rng.randint(1, 24), rng.randint(1, 12))
            dl = random_rational(rng, -1, 3)
            rep = check_prop51(a, r, eps, dl)
            for form in ("strict", "weak"):
                for part in ("i", "ii"):
                    g.check(rep[form][part]["holds"], f"{form} ({part}) fails at a={a} r={r} eps={eps} delta={dl}")
            if r == 1:
                g.check(rep["b"] == a and rep["b_prime"] == a, f"r=1 collapse fails at a={a}")
        g.note("10000 samples")


def test_criterion_6_b_terminal_klt():
    rng = random.Random(6006)
    bases = [plane(), plane_blown_up(1), plane_blown_up(2), quadric(), half_line()[0], two_lines()[0]]
    with Gate(6, "b-terminal => klt => b-lt on b-orbifold specs") as g:
        counts = {"specs": 0, "b_terminal": 0, "klt": 0}
        while counts["specs"] < 240:
            cfg = bases[counts["specs"] % len(bases)]
            plain = tower_discrepancies(cfg, EMPTY, 2)
            spec = b_orbifold_spec(rng, cfg, [n.address_string for n in plain])
            if not spec.is_b_orbifold:
                continue
            counts["specs"] += 1
            bpc = classify_b_pair(cfg, spec, 2)
            pc = classify_pair(cfg, spec.trace(cfg), F(1, 2), 2)
            counts["b_terminal"] += bpc["b_terminal"]
            counts["klt"] += pc["klt"]
            g.check(not bpc["b_terminal"] or pc["klt"], f"b-terminal but not klt: {cfg.name} {spec}")
            g.check(not pc["klt"] or bpc["b_lt"], f"klt but not b-lt: {cfg.name} {spec}")
        g.check(counts["b_terminal"] > 0, "no b-terminal specs generated")
        g.note(str(counts))


def test_criterion_7_lattice_coherence():
    rng = random.Random(7007)
    with Gate(7, "lattice coherence under blowup and contraction") as g:
        for _ in range(1000):
            old = smooth_config(rng, rng.randint(1, 4))
            center = random_center(rng, old)
            new, e = blow_up(old, center)
            d1 = tuple(F(rng.randint(-3, 3)) for _ in old.curves)
            d2 = tuple(F(rng.randint(-3, 3)) for _ in old.curves)
            # total transform picks up the multiplicity of the center on E
            p1 = d1 + (sum(d1[old.index(c)] for c in center.through),)
            p2 = d2 + (sum(d2[old.index(c)] for c in center.through),)
            g.check(intersect(new, p1, p2) == intersect(old, d1, d2), "pairing not preserved")
            g.check(mumford_pullback(new, {e}, d1 + (0,)) == p1, "Mumford pullback differs from total transform")
            back = contract(new, [e])
            g.check(
                (back.curves, back.form, back.kdeg, back.k_self) == (old.curves, old.form, old.kdeg, old.k_self),
                f"round trip fails on {old.form} at {center}",
            )
        tail = a2_with_tail()
        down = contract(tail, ["C1", "C2"])
        g.check(down.dot("C", "C") == tail.dot("C", "C") + F(2, 3), f"A2 Mumford correction gives {down.dot('C', 'C')}")
        g.note("1000 configurations")


def test_criterion_8_mmp_termination():
    rng = random.Random(8008)
    with Gate(8, "MMP termination and trichotomy", budget=5.0) as g:
        for k in range(0, 6):
            trace = mmp_run(plane_blown_up(k), EMPTY, 20)
            kinds = [s.kind for s in trace]
            g.check(kinds == [CONTRACTED] * k + [PLANE], f"k={k}: {kinds}")
        trace = mmp_run(quadric(), EMPTY, 20)
        g.check([s.kind for s in trace] == [FIBER], "quadric")
        for _ in range(100):
            cfg = blown_up_plane(rng, rng.randint(0, 5))
            trace = mmp_run(cfg, EMPTY, 50)
            g.check(bool(trace) and trace[-1].kind in TERMINAL_KINDS and len(trace) < 50, f"unfinished trace on {cfg.form}")
        g.note("6 planes, quadric, 100 random blowups")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
