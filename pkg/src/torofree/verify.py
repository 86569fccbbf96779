"""Property-test harness: every structural identity as an executable check.

Each suite samples deterministically from a seeded PRNG, compares exactly
(no tolerances), and returns a CheckReport whose failures list the inputs
and the exact mismatch polynomial/element.  Random polynomials are drawn
with total degree <= 4, at most 6 terms, and nonzero coefficients in
-9..9; loop windows default to {-2..2}^n.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import liealg, repmods
from .errors import DomainError
from .liealg import AlgebraDesc, LieElt, basis_of, bracket, degree_box
from .polyalg import Poly, VarId, deg_in, shift_difference, shift_sigma
from .repmods import Generator, ModuleSpec

Rat = Fraction


@dataclass
class CheckReport:
    """Outcome of one suite: exact, deterministic under the recorded seed."""

    name: str
    cases_run: int = 0
    failures: list[dict] = field(default_factory=list)
    seed: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, **info):
        self.cases_run += 1
        if not ok:
            self.failures.append({k: str(v) for k, v in info.items()})

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases_run": self.cases_run,
            "failures": self.failures,
            "seed": self.seed,
        }


def random_poly(
    rng: random.Random,
    l: int,
    n: int,
    max_total_deg: int = 4,
    max_terms: int = 6,
) -> Poly:
    """A random sparse polynomial: <= max_terms terms, coefficients in -9..9 \\ {0}."""
    p = Poly.zero(l, n)
    width = l + n
    for _ in range(rng.randint(1, max_terms)):
        exp = [0] * width
        for _ in range(rng.randint(0, max_total_deg)):
            exp[rng.randrange(width)] += 1
        coeff = rng.choice([c for c in range(-9, 10) if c])
        p = p + Poly(l, n, {tuple(exp): Fraction(coeff)})
    if p.is_zero():
        p = Poly.const(l, n, 1)
    return p


def default_window(n: int, lo: int = -2, hi: int = 2) -> list[tuple[int, ...]]:
    return degree_box(n, lo, hi)


ActionFn = Callable[[ModuleSpec, Generator, Poly], Poly]


# -- module-axiom suites -----------------------------------------------------


def bracket_compat_check(
    spec: ModuleSpec,
    loop_window: Iterable | None = None,
    samples: int = 20,
    seed: int = 0,
    action: ActionFn = repmods.act,
) -> CheckReport:
    """act([X,Y], p) = act(X, act(Y, p)) - act(Y, act(X, p)), exactly."""
    report = CheckReport("bracket_compat", seed=seed)
    rng = random.Random(seed)
    l, n = spec.ranks
    window = _window_for(spec, loop_window)
    gens = repmods.generators_for(spec, window)
    polys = [random_poly(rng, l, n) for _ in range(samples)]
    # first-level actions are shared across all pairs involving a generator
    acted = [[action(spec, g, p) for p in polys] for g in gens]
    for i1, i2 in itertools.combinations_with_replacement(range(len(gens)), 2):
        g1, g2 = gens[i1], gens[i2]
        elt = repmods.generator_bracket(spec, g1, g2)
        for k, p in enumerate(polys):
            lhs = _act_element_via(spec, elt, p, action)
            rhs = action(spec, g1, acted[i2][k]) - action(spec, g2, acted[i1][k])
            report.record(
                lhs == rhs,
                generator_pair=f"[{g1.text()}, {g2.text()}]",
                input=p,
                lhs=lhs,
                rhs=rhs,
                difference=lhs - rhs,
            )
    return report


def _act_element_via(spec, elt: LieElt, p: Poly, action: ActionFn) -> Poly:
    if action is repmods.act:
        return repmods.act_element(spec, elt, p)
    # route every symbol through the (possibly corrupted) generator action
    l, n = spec.ranks
    out = Poly.zero(l, n)
    fin = spec.algebra.fin if spec.algebra.variant != "witt" else None
    for sym, c in elt.terms.items():
        kind, idx, r = sym
        if kind == "K":
            gen = Generator("K", idx, r)
            out = out + action(spec, gen, p).scale(c)
            continue
        if kind == "D":
            out = out + action(spec, Generator("D", idx, r), p).scale(c)
            continue
        word, scalar = fin.generator_word(idx)
        out = out + _act_word_via(spec, word, r, p, action).scale(c / scalar)
    return out


def _act_word_via(spec, word, r, p, action: ActionFn) -> Poly:
    if word[0] in ("x", "y", "h"):
        return action(spec, Generator(word[0], word[1], r), p)
    _, left, right = word
    zero = (0,) * len(r)
    a = _act_word_via(spec, left, r, _act_word_via(spec, right, zero, p, action), action)
    b = _act_word_via(spec, right, zero, _act_word_via(spec, left, r, p, action), action)
    return a - b


def central_identity_check(
    spec: ModuleSpec,
    loop_window: Iterable | None = None,
    seed: int = 0,
    action: ActionFn = repmods.act,
) -> CheckReport:
    """t^a K_j . 1 = [x_i(e_j), y_i(a - e_j)].1 - (coroot_i)(a).1 = 0, all a, i, j."""
    report = CheckReport("central_identity", seed=seed)
    if spec.algebra.variant not in ("toroidal", "full"):
        raise DomainError("central identity requires a toroidal or full spec")
    l, n = spec.ranks
    one = spec.one()
    window = _window_for(spec, loop_window)
    for a in window:
        for j in range(1, n + 1):
            e_j = tuple(1 if t == j - 1 else 0 for t in range(n))
            a_minus = tuple(x - y for x, y in zip(a, e_j))
            for i in range(1, l + 1):
                gx = Generator("x", i, e_j)
                gy = Generator("y", i, a_minus)
                comm = action(spec, gx, action(spec, gy, one)) - action(
                    spec, gy, action(spec, gx, one)
                )
                coroot_term = _act_element_via(
                    spec, liealg.coroot(spec.algebra, i, a), one, action
                )
                # [x_i(e_j), y_i(a-e_j)] = coroot_i(a) + (x_i,y_i) K_j(a), so the
                # difference below is a nonzero multiple of t^a K_j . 1
                central = comm - coroot_term
                report.record(
                    central.is_zero(),
                    degree=a,
                    center_index=j,
                    row=i,
                    difference=central,
                )
    return report


def freeness_check(
    spec: ModuleSpec,
    samples: int = 20,
    seed: int = 0,
    action: ActionFn = repmods.act,
) -> CheckReport:
    """Every Cartan generator acts by multiplication by its own variable."""
    report = CheckReport("freeness", seed=seed)
    rng = random.Random(seed)
    l, n = spec.ranks
    zero = spec.algebra.zero_degree()
    gens: list[tuple[Generator, Poly]] = []
    if spec.algebra.variant != "witt":
        for i in range(1, l + 1):
            gens.append((Generator("h", i, zero), Poly.H(l, n, i)))
    for j in range(1, n + 1):
        gens.append((Generator("D", j, zero), Poly.d(l, n, j)))
    for _ in range(samples):
        p = random_poly(rng, l, n)
        for gen, var in gens:
            got = action(spec, gen, p)
            report.record(
                got == var * p,
                generator=gen.text(),
                input=p,
                lhs=got,
                rhs=var * p,
                difference=got - var * p,
            )
    return report


def eva_twist_check(
    spec: ModuleSpec,
    loop_window: Iterable | None = None,
    samples: int = 10,
    seed: int = 0,
) -> CheckReport:
    """act(X(r), p) equals the twisted p times act(X(r), 1) for X in {h, x, y, K}."""
    report = CheckReport("eva_twist", seed=seed)
    if spec.algebra.variant not in ("toroidal", "full"):
        raise DomainError("twist consistency requires a loop variant")
    rng = random.Random(seed)
    l, n = spec.ranks
    one = spec.one()
    window = _window_for(spec, loop_window)
    from .polyalg import shift_tau

    for r in window:
        for p in (random_poly(rng, l, n) for _ in range(samples)):
            tau_p = shift_tau(r, p)
            cases = []
            for i in range(1, l + 1):
                cases.append((Generator("h", i, r), tau_p))
                cases.append((Generator("x", i, r), shift_sigma(i, 1, tau_p)))
                cases.append((Generator("y", i, r), shift_sigma(i, -1, tau_p)))
            for j in range(1, n + 1):
                cases.append((Generator("K", j, r), tau_p))
            for gen, twist in cases:
                lhs = repmods.act(spec, gen, p)
                rhs = twist * repmods.act(spec, gen, one)
                report.record(
                    lhs == rhs,
                    generator=gen.text(),
                    input=p,
                    lhs=lhs,
                    rhs=rhs,
                    difference=lhs - rhs,
                )
    return report


def degree_reduction_check(
    spec: ModuleSpec,
    samples: int = 100,
    seed: int = 0,
    action: ActionFn = repmods.act,
) -> CheckReport:
    """deg_dj((h(e_j) - lambda_j h) . w) < deg_dj(w) for the fixed h = H_1."""
    report = CheckReport("degree_reduction", seed=seed)
    if spec.algebra.variant not in ("toroidal", "full"):
        raise DomainError("degree reduction requires a toroidal or full spec")
    rng = random.Random(seed)
    l, n = spec.ranks
    hvar = Poly.H(l, n, 1)
    for j in range(1, n + 1):
        e_j = tuple(1 if t == j - 1 else 0 for t in range(n))
        var = VarId("d", j)
        produced = 0
        while produced < samples:
            w = random_poly(rng, l, n)
            if deg_in(var, w) < 1:
                w = w * Poly.d(l, n, j)
            reduced = action(spec, Generator("h", 1, e_j), w) - (
                hvar * w
            ).scale(spec.lam[j - 1])
            ok = deg_in(var, reduced) < deg_in(var, w)
            report.record(
                ok,
                d_index=j,
                input=w,
                lhs=reduced,
                rhs=f"d{j}-degree below {deg_in(var, w)}",
                difference=deg_in(var, reduced),
            )
            produced += 1
    return report


def lemma_pa_property(
    samples: int = 200,
    ranks: tuple[int, int] = (2, 1),
    seed: int = 0,
    k_values: Sequence[int] = (-4, -3, -2, -1, 1, 2, 3, 4),
    kprime_values: Sequence[int] = tuple(range(8)),
) -> CheckReport:
    """The two shift-difference degree identities, exact on random polynomials."""
    report = CheckReport("shift_difference_degrees", seed=seed)
    rng = random.Random(seed)
    l, n = ranks
    for _ in range(samples):
        g = random_poly(rng, l, n, max_total_deg=6)
        i = rng.randint(1, l)
        var = VarId("H", i)
        dg = deg_in(var, g)
        for k in k_values:
            out = shift_difference("power_minus_id", k, i, g)
            report.record(
                deg_in(var, out) == dg - 1,
                mode=f"power_minus_id k={k}",
                input=g,
                lhs=deg_in(var, out),
                rhs=dg - 1,
                difference=out,
            )
        for kp in kprime_values:
            out = shift_difference("difference_power", kp, i, g)
            expect = dg - kp if kp <= dg else -1
            report.record(
                deg_in(var, out) == expect,
                mode=f"difference_power k'={kp}",
                input=g,
                lhs=deg_in(var, out),
                rhs=expect,
                difference=out,
            )
    return report


# -- Lie-axiom suites --------------------------------------------------------

BracketFn = Callable[[AlgebraDesc, LieElt, LieElt], LieElt]


def jacobi_check(
    desc: AlgebraDesc,
    loop_window: Iterable | None = None,
    samples: int = 0,
    seed: int = 0,
    bracket_fn: BracketFn = bracket,
) -> CheckReport:
    """Antisymmetry + Jacobi, exhaustive over basis triples (or sampled)."""
    report = CheckReport("lie_axioms", seed=seed)
    window = loop_window
    if window is None:
        window = degree_box(desc.loop_vars, -1, 1) if desc.variant != "finite" else [()]
    basis = basis_of(desc, window)
    size = len(basis)
    pair: dict[tuple[int, int], LieElt] = {}
    for i in range(size):
        for j in range(size):
            pair[i, j] = bracket_fn(desc, basis[i], basis[j])
    for i in range(size):
        for j in range(i, size):
            s = pair[i, j] + pair[j, i]
            report.record(
                s.is_zero(),
                law="antisymmetry",
                inputs=f"({basis[i].text()}, {basis[j].text()})",
                difference=s,
            )
    triples: Iterable[tuple[int, int, int]]
    if samples:
        rng = random.Random(seed)
        triples = [
            (rng.randrange(size), rng.randrange(size), rng.randrange(size))
            for _ in range(samples)
        ]
    else:
        triples = itertools.combinations_with_replacement(range(size), 3)
    for i, j, k in triples:
        total = (
            bracket_fn(desc, basis[i], pair[j, k])
            + bracket_fn(desc, basis[j], pair[k, i])
            + bracket_fn(desc, basis[k], pair[i, j])
        )
        report.record(
            total.is_zero(),
            law="jacobi",
            inputs=f"({basis[i].text()}, {basis[j].text()}, {basis[k].text()})",
            difference=total,
        )
    return report


def cocycle_identity_check(
    c: tuple,
    n: int,
    loop_window: Iterable | None = None,
    samples: int = 60,
    seed: int = 0,
) -> CheckReport:
    """2-cocycle identity for c1*phi1 + c2*phi2 with the Der(A)-action on K_A."""
    report = CheckReport("cocycle_identity", seed=seed)
    desc = AlgebraDesc("A", 1, n, "full", (Fraction(c[0]), Fraction(c[1])))
    window = list(loop_window) if loop_window is not None else degree_box(n, -2, 2)
    rng = random.Random(seed)
    symbols = [(i, r) for r in window for i in range(1, n + 1)]

    def dsym(ir):
        return liealg.elt(desc, ("D", ir[0], ir[1]))

    for _ in range(samples):
        X, Y, Z = (dsym(rng.choice(symbols)) for _ in range(3))
        lhs = (
            liealg.cocycle(desc, c, liealg.witt_bracket_part(desc, X, Y), Z)
            + liealg.cocycle(desc, c, liealg.witt_bracket_part(desc, Y, Z), X)
            + liealg.cocycle(desc, c, liealg.witt_bracket_part(desc, Z, X), Y)
        )
        rhs = (
            bracket(desc, X, liealg.cocycle(desc, c, Y, Z))
            + bracket(desc, Y, liealg.cocycle(desc, c, Z, X))
            + bracket(desc, Z, liealg.cocycle(desc, c, X, Y))
        )
        diff = lhs - rhs
        report.record(
            diff.is_zero(),
            inputs=f"({X.text()}, {Y.text()}, {Z.text()})",
            lhs=lhs,
            rhs=rhs,
            difference=diff,
        )
    return report


def _window_for(spec: ModuleSpec, loop_window) -> list[tuple[int, ...]]:
    if spec.algebra.variant == "finite":
        return [()]
    if loop_window is None:
        return default_window(spec.algebra.loop_vars)
    return [tuple(r) for r in loop_window]


def suite_for_spec(
    spec: ModuleSpec,
    loop_window: Iterable | None = None,
    samples: int = 20,
    seed: int = 0,
) -> list[CheckReport]:
    """All applicable suites for one module spec."""
    reports = [
        bracket_compat_check(spec, loop_window, samples, seed),
        freeness_check(spec, samples, seed),
    ]
    if spec.algebra.variant in ("toroidal", "full"):
        reports.append(central_identity_check(spec, loop_window, seed))
        reports.append(eva_twist_check(spec, loop_window, max(4, samples // 4), seed))
        reports.append(degree_reduction_check(spec, samples, seed))
    if spec.algebra.variant != "finite":
        window = loop_window
        if window is None:
            window = degree_box(spec.algebra.loop_vars, -1, 1)
        reports.append(
            jacobi_check(spec.algebra, window, samples=0, seed=seed)
            if spec.algebra.loop_vars == 1
            else jacobi_check(spec.algebra, degree_box(spec.algebra.loop_vars, -1, 1), samples=400, seed=seed)
        )
    else:
        reports.append(jacobi_check(spec.algebra, [()], samples=0, seed=seed))
    if spec.algebra.variant == "full":
        reports.append(
            cocycle_identity_check(
                spec.algebra.cocycle, spec.algebra.loop_vars, None, 40, seed
            )
        )
    reports.append(lemma_pa_property(40, spec.ranks if spec.ranks[0] else (1, spec.ranks[1]), seed))
    return reports
