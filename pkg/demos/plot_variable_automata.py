"""
Variable tree automata
======================

A variable automaton reads an ordinary tree language where some symbols
stand for a single, unknown label.  Here ``z(z(c))`` means "two equal
labels over c".  A symbolic automaton cannot express that equality.
"""

from symtree.catalog import z_binding_vta
from symtree.syntax import parse_tree
from symtree.vta import vta_member

b = z_binding_vta()
for text in ["5(5(c))", "-7(-7(c))", "5(6(c))", "c"]:
    print(f"{text:10s} {vta_member(b, parse_tree(text))}")
