"""
Checking non-well-founded derivations
=====================================

A derivation is a root sequent plus a (possibly cyclic) skeleton of rules.
The checker recomputes every sequent from the rules above it.
"""

from ratlogic import (
    Atom,
    Axiom,
    DerivationCandidate,
    Equation,
    Sequent,
    build_solution_derivation,
    check_derivation,
    conj,
    disj,
    expand_sequent,
    neg_var,
    no_rule_applicable,
    solve,
    var,
)
from ratlogic.formula import BOTTOM
from ratlogic.syntax import format_derivation, parse_skeleton
from ratlogic.tree import RationalTree

v0 = Atom(0)

# the smallest closed derivation: an axiom on v0 / ~v0
ax = DerivationCandidate(Sequent([var(0), neg_var(0)]), RationalTree.leaf(Axiom(v0, 0, 1)))
print("axiom:", check_derivation(ax))

# a finite derivation that goes through a disjunction and a conjunction
f = disj(conj(var(1), var(1)), var(2))
sk = parse_skeleton("""
node a = or(0,0)(0->b)
node b = and(2)(0->c, 1->c)
node c = ax(v1,3,1)
root a
""")
d = DerivationCandidate(Sequent([f, neg_var(1)]), sk)
print("\nfinite:", check_derivation(d))
print("sequent at 0:", expand_sequent(d, [0]))
print("sequent at 0.1:", expand_sequent(d, [0, 1]))

# swap one rule for one that does not fit and the checker names the position
bad = DerivationCandidate(d.root, parse_skeleton("node a = or(0,0)(0->b); node b = and(2)(0->c, 1->e); node c = ax(v1,3,1); node e = ax(v1,1,3); root a"))
print("broken:", check_derivation(bad))

# solutions of equations have periodic derivations that apply one rule forever
for body in [disj(var(0), var(0)), conj(var(0), var(0)), disj(neg_var(0), var(0))]:
    e = Equation(v0, body)
    pd = build_solution_derivation(e)
    print(f"\nor[solution of v0 := {body}]:")
    print(format_derivation(pd).rstrip())
    print("  ->", check_derivation(pd), "| cut off at depth 10 without memo:", check_derivation(pd, 10, memo=False))

# some sequents are stuck: no rule applies and none ever will
print()
for s in [Sequent(), Sequent([var(0)]), Sequent([var(0), var(0)]), Sequent([BOTTOM])]:
    print(f"{s} stuck: {no_rule_applicable(s)}")

# or[U] and or[W] are derivable and W is the negation of U, yet or[] is stuck:
# a cut on U would derive the empty sequent, so cut is not admissible
U = solve(Equation(v0, disj(var(0), var(0))))
W = solve(Equation(v0, conj(var(0), var(0))))
print("\nW == not U:", W == ~U)
print("or[U]:", check_derivation(build_solution_derivation(Equation(v0, disj(var(0), var(0))))))
print("or[W]:", check_derivation(build_solution_derivation(Equation(v0, conj(var(0), var(0))))))
