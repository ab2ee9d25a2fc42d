"""
Transducers with label functions
================================

Rules rewrite a node and may apply an integer function to its label.  The
example transducer either divides a multiple of 6 by 6 and copies its left
subtree, or keeps the node as it is.
"""

from symtree.catalog import divide_or_copy_stt
from symtree.stt import stt_apply, stt_props
from symtree.syntax import parse_tree
from symtree.tree import format_tree

m = divide_or_copy_stt()
for r in m.rules:
    print(r)

# %%
# All outputs of one input tree, sorted by their text form.
xi = parse_tree("6(12(4,6),7)")
for z in sorted(map(format_tree, stt_apply(m, xi))):
    print(z)

# %%
# Rule-shape properties decide which constructions apply later on.
for name, value in stt_props(m).flags().items():
    print(f"{name:12s} {value}")
