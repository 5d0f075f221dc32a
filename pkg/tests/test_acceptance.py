"""Acceptance checks, one per criterion, each with its time budget.

Every check prints a ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary.  Run directly (``python3 tests/test_acceptance.py``)
to get just the report.
"""

from __future__ import annotations

import functools
import itertools
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from generators import (  # noqa: E402
    random_equation,
    random_finite_derivation,
    random_rational_formula,
    skeleton_from_table,
    skeleton_table,
)
from ratlogic.formula import (  # noqa: E402
    BOTTOM,
    Atom,
    Conn,
    Equation,
    Formula,
    conj,
    disj,
    neg_var,
    negate,
    occurs,
    solution_label_oracle,
    solve,
    split_positions,
    substitute,
    var,
)
from ratlogic.interaction import (  # noqa: E402
    ERROR,
    ClosedNoError,
    ErrorAt,
    PeriodicNoError,
    complete_skeleton,
    configuration_at,
    explore,
    negate_sequent,
    reconstruct_derivation,
)
from ratlogic.position import Position  # noqa: E402
from ratlogic.proof import (  # noqa: E402
    Axiom,
    Conj,
    Disj,
    Sequent,
    ValidPeriodic,
    build_repetition_derivation,
    build_solution_derivation,
    check_derivation,
    expand_sequent,
    no_rule_applicable,
    skeleton_of,
)
from ratlogic.tree import bisimilar, domain_up_to, is_well_founded  # noqa: E402

RESULTS: list[str] = []

V0 = Atom(0)
U_EQ = Equation(V0, disj(var(0), var(0)))
W_EQ = Equation(V0, conj(var(0), var(0)))
V_EQ = Equation(V0, disj(neg_var(0), var(0)))
NAMED_EQUATIONS = [U_EQ, W_EQ, V_EQ]


@functools.cache
def equations() -> list[Equation]:
    """The three named equations plus 200 random ones (body depth <= 4, arity <= 3)."""
    rng = random.Random(20240601)
    return NAMED_EQUATIONS + [random_equation(rng, depth=4, max_arity=3) for _ in range(200)]


@functools.cache
def finite_derivations():
    rng = random.Random(7)
    return [random_finite_derivation(rng, max_depth=6, max_arity=3) for _ in range(200)]


def criterion(number: int, title: str, limit: float):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            failure = None
            try:
                detail = fn()
            except AssertionError as exc:
                failure = exc
                detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
            elapsed = time.perf_counter() - start
            if failure is None and elapsed >= limit:
                failure = AssertionError(f"took {elapsed:.2f}s, budget {limit}s")
            status = "PASS" if failure is None else "FAIL"
            line = f"{status} criterion {number}: {title} ({elapsed:.2f}s, budget {limit:g}s)"
            if detail:
                line += f" - {detail}"
            RESULTS.append(line)
            print(line)
            if failure is not None:
                raise failure

        return run

    return wrap


def _walk_domain(g: Formula, max_len: int, probe: int):
    """Yield ``(p, label)`` for positions of length <= max_len, plus absent children up to ``probe``."""
    kids, labels = g._g.kids, g._g.labels
    level = [(Position(), g._root)]
    for d in range(max_len + 1):
        nxt = []
        for p, n in level:
            yield p, labels[n]
            if d == max_len:
                continue
            for i in range(probe):
                c = kids[n].get(i)
                if c is None:
                    yield p.child(i), None
                else:
                    nxt.append((p.child(i), c))
        level = nxt


@criterion(1, "solver agrees with the parity oracle at every position of length <= 10", 5.0)
def test_criterion_1_solver_matches_oracle():
    checked = 0
    for e in equations():
        g = solve(e)
        for p, label in _walk_domain(g, 10, 4):
            assert label == solution_label_oracle(e, p), f"{e} at {p}"
            checked += 1
    # closed form for v := or[~v, v]: the label is "or" exactly when p has an even number of zeros
    g = solve(V_EQ)
    binary = [Position(bits) for n in range(11) for bits in itertools.product((0, 1), repeat=n)]
    assert len(binary) == 2**11 - 1
    for p in binary:
        expected = Conn.OR if p.count(0) % 2 == 0 else Conn.AND
        assert g.label_at(p) is expected, f"closed form at {p}"
    return f"{checked} positions on 203 equations, {len(binary)} binary positions"


@criterion(2, "solutions are ill-founded fixed points", 2.0)
def test_criterion_2_fixed_point():
    eqs = equations()
    for e in eqs:
        g = solve(e)
        assert bisimilar(g, substitute(e.body, g, e.variable)), str(e)
        assert not is_well_founded(g), str(e)
    return f"{len(eqs)} equations"


@criterion(3, "involution, De Morgan and the substitution laws", 10.0)
def test_criterion_3_algebraic_laws():
    rng = random.Random(3)
    for _ in range(1000):
        f = random_rational_formula(rng)
        assert bisimilar(negate(negate(f)), f), f"involution fails on {f}"
        subs = {i: random_rational_formula(rng, 4) for i in rng.sample(range(5), rng.randint(0, 3))}
        for conn in Conn:
            dual = Formula.compound(conn.dual, {i: negate(h) for i, h in subs.items()})
            assert bisimilar(negate(Formula.compound(conn, subs)), dual), "De Morgan fails"
    for _ in range(500):
        f, g = random_rational_formula(rng), random_rational_formula(rng)
        v = Atom(rng.randrange(3))
        assert bisimilar(substitute(Formula.leaf(v), g, v), g)
        assert bisimilar(substitute(Formula.leaf(~v), g, v), negate(g))
        subs = {i: random_rational_formula(rng, 3) for i in range(rng.randint(0, 3))}
        for conn in Conn:
            lhs = substitute(Formula.compound(conn, subs), g, v)
            rhs = Formula.compound(conn, {i: substitute(h, g, v) for i, h in subs.items()})
            assert bisimilar(lhs, rhs), "substitution does not commute with connectives"
        if not occurs(f, v):
            assert bisimilar(substitute(f, g, v), f)
        assert bisimilar(negate(substitute(f, g, v)), substitute(negate(f), g, v))
    return "1000 formulas, 500 triples"


@criterion(4, "finite derivations: no error, reconstruction reproduces every sequent", 30.0)
def test_criterion_4_finite_round_trip():
    sizes, depths = [], []
    for d in finite_derivations():
        sk = skeleton_of(d)
        test = complete_skeleton(sk)
        verdict = explore(test, negate_sequent(d.root), depth=64)
        assert isinstance(verdict, ClosedNoError), str(verdict)
        assert not any(r.verdict == "error" for r in verdict.records)
        rec = reconstruct_derivation(test, d.root, depth=64)
        dom = domain_up_to(sk, 64)
        assert dom == domain_up_to(rec.skeleton, 64)
        for p in dom:
            assert expand_sequent(rec, p) == expand_sequent(d, p), f"sequent differs at {p}"
        sizes.append(len(dom))
        depths.append(len(dom[-1]))
    return f"{len(sizes)} derivations, {min(sizes)}..{max(sizes)} positions, depth <= {max(depths)}"


@criterion(5, "repetition derivations of or[U], or[W], or[V] are periodic and error-free", 10.0)
def test_criterion_5_infinite_round_trip():
    for e in NAMED_EQUATIONS:
        d = build_solution_derivation(e)
        assert isinstance(check_derivation(d), ValidPeriodic)
        test = complete_skeleton(skeleton_of(d))
        env = negate_sequent(d.root)
        assert isinstance(explore(test, env, depth=64, memo=True), PeriodicNoError)
    # without the memo the same interactions stay error-free as far as they are unfolded
    assert explore(complete_skeleton(skeleton_of(build_solution_derivation(U_EQ))),
                   negate_sequent(Sequent([solve(U_EQ)])), depth=64, memo=False).no_error
    assert explore(complete_skeleton(skeleton_of(build_solution_derivation(V_EQ))),
                   negate_sequent(Sequent([solve(V_EQ)])), depth=64, memo=False).no_error
    assert explore(complete_skeleton(skeleton_of(build_solution_derivation(W_EQ))),
                   negate_sequent(Sequent([solve(W_EQ)])), depth=10, memo=False).no_error
    return "3 sequents"


def _mismatching_rule(rng: random.Random, seq: Sequent) -> object:
    """A rule matching no interaction clause against the negation of ``seq``."""
    n = len(seq)
    options = [Disj(n + rng.randrange(3), 0), Conj(n + rng.randrange(3)), Axiom(V0, n, 0)]
    for k, f in enumerate(seq):
        if isinstance(f.label, Atom):
            options += [Disj(k, 0), Conj(k)]
        elif f.label is Conn.OR:
            # the environment holds a conjunction here
            options.append(Conj(k))
            options.append(Disj(k, max(f.arity, default=-1) + 1))
        else:
            options.append(Disj(k, 0))
    return rng.choice(options)


@criterion(6, "corrupted tests fail exactly below the corrupted position", 10.0)
def test_criterion_6_refutation():
    rng = random.Random(6)
    count = 0
    for d in finite_derivations()[:50]:
        table = skeleton_table(skeleton_of(d))
        p = rng.choice(sorted(table, key=Position.sort_key))
        seq = expand_sequent(d, p)
        table[p] = _mismatching_rule(rng, seq)
        test = complete_skeleton(skeleton_from_table(table))
        env = negate_sequent(d.root)
        verdict = explore(test, env, depth=64)
        target = p.child(0)
        assert isinstance(verdict, ErrorAt) and verdict.position == target, f"{verdict} vs {target}"
        # brute-force replay of the single path
        assert configuration_at(test, env, target) is ERROR
        assert all(configuration_at(test, env, target[:j]) not in (None, ERROR) for j in range(len(target)))
        count += 1
    return f"{count} corrupted tests"


@criterion(7, "stuck sequents are underivable and cut is not admissible", 2.0)
def test_criterion_7_underivability():
    a = var(0)
    for s in [Sequent(), Sequent([a]), Sequent([a, a]), Sequent([a, a, a])]:
        assert no_rule_applicable(s), str(s)
    assert no_rule_applicable(Sequent([BOTTOM])) and no_rule_applicable(Sequent([BOTTOM, BOTTOM]))
    u, w = solve(U_EQ), solve(W_EQ)
    assert bisimilar(u, negate(w))
    assert isinstance(check_derivation(build_repetition_derivation(Sequent([u]), 0)), ValidPeriodic)
    assert isinstance(check_derivation(build_repetition_derivation(Sequent([w]), 0)), ValidPeriodic)
    assert no_rule_applicable(Sequent())
    return "or[U] and or[W] derivable, or[] stuck"


@criterion(8, "the depth-8 domain of each solution satisfies S + R*A", 5.0)
def test_criterion_8_arden():
    eqs = equations()
    for e in eqs:
        g = solve(e)
        dom = set(domain_up_to(g, 8))
        r, s = split_positions(e)
        rhs = {p for p in s if len(p) <= 8}
        rhs |= {x + q for x in r for q in dom if len(x) + len(q) <= 8}
        assert dom == rhs, str(e)
    return f"{len(eqs)} equations"


CRITERIA = [
    test_criterion_1_solver_matches_oracle,
    test_criterion_2_fixed_point,
    test_criterion_3_algebraic_laws,
    test_criterion_4_finite_round_trip,
    test_criterion_5_infinite_round_trip,
    test_criterion_6_refutation,
    test_criterion_7_underivability,
    test_criterion_8_arden,
]


if __name__ == "__main__":
    failed = 0
    for check in CRITERIA:
        try:
            check()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
