"""
Solving recursive formula equations
===================================

Every equation ``v := F`` (F compound, mentioning v or ~v) has exactly one
solution, an infinite formula presented here as a small cyclic graph.
"""

from ratlogic import Atom, Equation, conj, disj, neg_var, solve, solution_label_oracle, substitute, var
from ratlogic.formula import factorize, negate
from ratlogic.tree import is_well_founded, to_node_text, unfold

v0 = Atom(0)

# u := or[u, u] and w := and[w, w] solve to one-node loops
U = solve(Equation(v0, disj(var(0), var(0))))
W = solve(Equation(v0, conj(var(0), var(0))))
print("U =", to_node_text(U))
print("W =", to_node_text(W))
print("not U == W ?", negate(U) == W)

# v := or[~v, v] needs a second node: every step through ~v flips the connective
eq = Equation(v0, disj(neg_var(0), var(0)))
V = solve(eq)
print("\nV =", to_node_text(V))
for p, label in sorted(unfold(V, 3).items(), key=lambda kv: kv[0].sort_key()):
    print(f"  V at {str(p):7} is {label}")

# the solution really is a fixed point, and it is infinite
print("\nV == body[V/v] ?", V == substitute(eq.body, V, v0))
print("V well-founded ?", is_well_founded(V))

# an independent way to read labels: cut the position at each v / ~v leaf of the body
p = [1, 0, 0]
fac = factorize(eq, p)
print(f"\nposition {p}: parts {[str(r) for r in fac.r_parts]}, rest {fac.s_part}, {fac.negation_count} negations")
print("oracle label:", solution_label_oracle(eq, p), "| solver label:", V.label_at(p))

# a body with another variable left free
eq2 = Equation(v0, conj(disj(var(1), neg_var(0)), var(0)))
G = solve(eq2)
print("\nG =", to_node_text(G))
