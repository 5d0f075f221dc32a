import pytest
from hypothesis import given, settings

from generators import random_equation, random_finite_formula, random_rational_formula, rngs
from ratlogic.formula import (
    BOTTOM,
    TOP,
    Atom,
    Conn,
    Equation,
    EquationError,
    Formula,
    conj,
    disj,
    factorize,
    neg_var,
    negate,
    occurs,
    solution_label_oracle,
    solve,
    split_positions,
    substitute,
    validate_equation,
    var,
)
from ratlogic.position import Position
from ratlogic.syntax import parse_formula
from ratlogic.tree import bisimilar, is_well_founded, label_at

P = lambda *xs: Position(xs)  # noqa: E731
V0 = Atom(0)

U_EQ = Equation(V0, disj(var(0), var(0)))
W_EQ = Equation(V0, conj(var(0), var(0)))
V_EQ = Equation(V0, disj(neg_var(0), var(0)))


def test_atoms():
    assert str(Atom(3)) == "v3" and str(~Atom(3)) == "~v3"
    assert ~~Atom(2) == Atom(2)
    with pytest.raises(ValueError):
        Atom(-1)


def test_atoms_label_leaves_only():
    with pytest.raises(ValueError):
        Formula.build({"a": V0, "b": Conn.OR}, {"a": {0: "b"}}, "a")
    with pytest.raises(ValueError):
        Formula.leaf("nonsense")


def test_negate_examples():
    assert negate(disj(var(0), neg_var(1))) == conj(neg_var(0), var(1))
    assert bisimilar(negate(solve(U_EQ)), solve(W_EQ))
    assert negate(TOP) == BOTTOM


def test_double_negation_reuses_presentation():
    f = solve(V_EQ)
    assert negate(negate(f)).key == f.key


def test_substitute_examples():
    g = disj(var(1), conj(neg_var(2)))
    assert substitute(var(0), g, V0) == g
    assert substitute(neg_var(0), g, V0) == negate(g)
    f = conj(var(1), disj(neg_var(2)))
    assert bisimilar(substitute(f, g, V0), f)
    assert substitute(conj(neg_var(0)), disj(var(1)), V0) == conj(conj(neg_var(1)))


def test_substitute_into_self():
    f = disj(var(0), neg_var(0))
    assert substitute(f, f, V0) == disj(disj(var(0), neg_var(0)), conj(neg_var(0), var(0)))


def test_substitute_requires_positive_variable():
    with pytest.raises(ValueError):
        substitute(var(0), var(1), ~V0)


def test_validate_equation_examples():
    assert isinstance(validate_equation(V0, disj(neg_var(0), var(0))), Equation)
    with pytest.raises(EquationError) as r2:
        validate_equation(V0, var(1))
    assert r2.value.clause == "R2"
    with pytest.raises(EquationError) as r3:
        validate_equation(V0, disj(var(1), var(2)))
    assert r3.value.clause == "R3"
    with pytest.raises(EquationError) as r1:
        validate_equation(~V0, disj(var(0)))
    assert r1.value.clause == "R1"


def test_validate_reports_first_violated_clause():
    with pytest.raises(EquationError) as info:
        validate_equation(~V0, var(1))
    assert info.value.clause == "R1"


def test_solve_examples():
    u = solve(U_EQ)
    assert len(u) == 1 and u.label is Conn.OR and u.arity == (0, 1)
    assert u.child(0).key == u.key == u.child(1).key
    w = solve(W_EQ)
    assert len(w) == 1 and w.label is Conn.AND and w.child(1).key == w.key
    assert label_at(solve(V_EQ), P(0)) is Conn.AND


def test_solve_prunes_unused_negated_copy():
    assert len(solve(Equation(V0, disj(var(0), conj(var(1)))))) == 3


def test_oracle_examples():
    assert solution_label_oracle(V_EQ, P()) is Conn.OR
    assert solution_label_oracle(V_EQ, P(0, 1)) is Conn.AND
    assert solution_label_oracle(V_EQ, P(2)) is None


def test_factorize_examples():
    f = factorize(V_EQ, P())
    assert (f.r_parts, f.s_part, f.n, f.negation_count) == ((), P(), 0, 0)
    f = factorize(V_EQ, P(1, 0))
    assert (f.r_parts, f.s_part, f.n, f.negation_count) == ((P(1), P(0)), P(), 2, 1)
    assert factorize(V_EQ, P(0, 5)) is None


def test_factorize_with_deep_body():
    e = Equation(V0, conj(disj(var(1), neg_var(0)), var(0)))
    f = factorize(e, P(0, 1, 1, 0, 0))
    assert f.r_parts == (P(0, 1), P(1)) and f.s_part == P(0, 0) and f.negation_count == 1
    assert solution_label_oracle(e, P(0, 1, 1, 0, 0)) == ~Atom(1)


def test_split_positions():
    r, s = split_positions(V_EQ)
    assert r == {P(0), P(1)} and s == {P()}
    with pytest.raises(ValueError):
        split_positions(Equation(V0, disj(var(0), solve(U_EQ))))


@settings(max_examples=100)
@given(rngs)
def test_involution(rng):
    f = random_rational_formula(rng)
    assert bisimilar(negate(negate(f)), f)


@settings(max_examples=100)
@given(rngs)
def test_de_morgan(rng):
    subs = {i: random_rational_formula(rng, 4) for i in rng.sample(range(5), rng.randint(0, 3))}
    for conn in Conn:
        lhs = negate(Formula.compound(conn, subs))
        rhs = Formula.compound(conn.dual, {i: negate(f) for i, f in subs.items()})
        assert bisimilar(lhs, rhs)


@settings(max_examples=100)
@given(rngs)
def test_substitution_laws(rng):
    f, g = random_rational_formula(rng), random_rational_formula(rng)
    v = Atom(rng.randrange(3))
    assert substitute(Formula.leaf(v), g, v) == g
    assert substitute(Formula.leaf(~v), g, v) == negate(g)
    for conn in Conn:
        subs = {i: random_rational_formula(rng, 3) for i in range(rng.randint(0, 3))}
        assert substitute(Formula.compound(conn, subs), g, v) == Formula.compound(
            conn, {i: substitute(h, g, v) for i, h in subs.items()}
        )
    if not occurs(f, v):
        assert substitute(f, g, v) == f
    assert negate(substitute(f, g, v)) == substitute(negate(f), g, v)


@settings(max_examples=100)
@given(rngs)
def test_solution_is_an_ill_founded_fixed_point(rng):
    e = random_equation(rng)
    g = solve(e)
    assert bisimilar(g, substitute(e.body, g, e.variable))
    assert not is_well_founded(g)


@settings(max_examples=40)
@given(rngs)
def test_solution_is_unique_at_bounded_depth(rng):
    # any fixed point found by iterating substitution agrees with the solution up to the iteration depth
    e = random_equation(rng, depth=3)
    approx = e.body
    for _ in range(4):
        approx = substitute(e.body, approx, e.variable)
    g = solve(e)
    for p in _domain(g, 4):
        if label_at(approx, p) not in (V0, ~V0):
            assert label_at(approx, p) == label_at(g, p)


def _domain(t, depth):
    out, level = [], [P()]
    for _ in range(depth + 1):
        out.extend(level)
        level = [p.child(i) for p in level for i in t.subtree_at(p).arity]
    return out


@settings(max_examples=60)
@given(rngs)
def test_solver_matches_oracle(rng):
    e = random_equation(rng)
    g = solve(e)
    for p in _domain(g, 6):
        assert label_at(g, p) == solution_label_oracle(e, p)
        for i in range(4):
            assert label_at(g, p.child(i)) == solution_label_oracle(e, p.child(i))


def test_rational_body_is_accepted():
    body = parse_formula("node a = or(0->b, 1->x); node b = and(0->a); node x = ~v0; root a")
    e = validate_equation(V0, body)
    g = solve(e)
    assert bisimilar(g, substitute(body, g, V0))
    for p in [P(), P(1), P(0, 0), P(1, 0), P(1, 1)]:
        assert label_at(g, p) == solution_label_oracle(e, p)


def test_finite_generator_builds_gapped_arities():
    import random

    rng = random.Random(3)
    fs = [random_finite_formula(rng) for _ in range(200)]
    assert any(f.arity and f.arity != tuple(range(len(f.arity))) for f in fs)
