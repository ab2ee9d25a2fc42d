"""
Automata over integer labels
============================

A symbolic tree automaton reads trees whose labels are integers.  Its
rules carry guards such as ``(div 2)`` instead of single letters, so a
handful of rules covers infinitely many labels.
"""

from symtree.catalog import all_labels_sta, divisibility_sta
from symtree.sta import complement, intersect, sta_empty, sta_included
from symtree.syntax import parse_tree
from symtree.theory import div
from symtree.tree import format_tree

# %%
# Binary trees whose labels are all even, or all multiples of three.
a = divisibility_sta()
for text in ["2(4,6)", "3(15,18)", "6(12,18)", "2(3,4)", "5"]:
    t = parse_tree(text)
    print(f"{text:10s} states {sorted(a.run(t))}  accepted {a.member(t)}")

# %%
# Emptiness returns a witness of least magnitude.
print("witness:", format_tree(sta_empty(a)))

# %%
# Complement goes through the subset construction over minterms of the guards.
c = complement(a)
print("5 in complement:", c.member(parse_tree("5")))
print("A and not A empty:", sta_empty(intersect(a, c)) is None)

# %%
# Inclusion either holds or names a tree that separates the two languages.
even = all_labels_sta(div(2))
w = sta_included(a, even)
print("counterexample to A <= even:", format_tree(w))
