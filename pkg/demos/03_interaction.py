"""
Tests against environments
==========================

A test asks questions (rules); the environment, the negation of a sequent,
answers them.  The interaction produces no error exactly when the test comes
from a derivation of the sequent.
"""

from ratlogic import (
    Atom,
    Axiom,
    Conj,
    Disj,
    Equation,
    Sequent,
    build_solution_derivation,
    comes_from_check,
    complete_skeleton,
    conj,
    disj,
    explore,
    neg_var,
    negate_sequent,
    play_session,
    reconstruct_derivation,
    var,
)
from ratlogic.interaction import format_trace, skeleton_player
from ratlogic.proof import check_derivation, skeleton_of
from ratlogic.syntax import format_skeleton
from ratlogic.tree import RationalTree

v0 = Atom(0)
s = Sequent([var(0), neg_var(0)])

# a skeleton becomes a total test by sending every missing position to a default rule
test = complete_skeleton(RationalTree.leaf(Axiom(v0, 0, 1)), Conj(0))
print("axiom test:", explore(test, negate_sequent(s)))

# the same test against a sequent it does not fit
print("against or[v0]:", explore(test, negate_sequent(Sequent([var(0)]))))

# an infinite derivation: exploration closes the loop with the memo, stays open without it
d = build_solution_derivation(Equation(v0, conj(var(0), var(0))))
t = complete_skeleton(skeleton_of(d))
print("\nor[W] periodic:", explore(t, negate_sequent(d.root)))
print("or[W] no memo:  ", explore(t, negate_sequent(d.root), depth=8, memo=False))

# error-free interaction gives back a derivation, and the test comes from it
rec = reconstruct_derivation(t, d.root)
print("\nreconstructed:", format_skeleton(rec.skeleton), "->", check_derivation(rec))
print("comes from it:", comes_from_check(t, rec))

# corrupt one rule and the error shows up right below it
sk = RationalTree.build({"a": Disj(0, 1), "b": Conj(7)}, {"a": {1: "b"}}, "a")
bad = complete_skeleton(sk)
verdict = explore(bad, negate_sequent(Sequent([disj(var(1), conj(var(2)))])))
print("\n" + format_trace(verdict))

# the same debate played move by move, Proponent replaying a skeleton
print()
for event in play_session(negate_sequent(s), skeleton_player(RationalTree.leaf(Axiom(v0, 0, 1)))):
    print(event)
