"""
Domains, images and type checking
=================================

The domain and the preimage of a regular language are regular for every
transducer.  The image is regular when each rule has exactly one function
symbol and copies no variable; the analysis refuses otherwise.
"""

from symtree.analysis import backward_apply, domain_srtg, forward_apply_slin, typecheck
from symtree.catalog import (
    all_labels_sta, binary_sta, divide_or_copy_stt, divisibility_sta, duplication_stt, increment_stt,
)
from symtree.errors import PreconditionError
from symtree.formats import dumps
from symtree.srtg import srtg_to_sta, sta_to_srtg
from symtree.syntax import parse_tree
from symtree.theory import div, in_range
from symtree.tree import format_tree

m = divide_or_copy_stt()
print(dumps(domain_srtg(m)))

# %%
# Inputs with at least one output whose labels are all multiples of 3.
pre = srtg_to_sta(backward_apply(m, binary_sta(div(3))))
print("3(9,27):", pre.member(parse_tree("3(9,27)")))

# %%
# Adding one to every label of a tree from the divisibility language.
inc = increment_stt()
image = srtg_to_sta(forward_apply_slin(inc, sta_to_srtg(divisibility_sta())))
print("3(5,7):", image.member(parse_tree("3(5,7)")), " 2(4,6):", image.member(parse_tree("2(4,6)")))

# %%
# Type checking: labels stay positive, but not always even.
l_in = divisibility_sta(nonnegative=True)
print(typecheck(inc, l_in, all_labels_sta(in_range(1, None))))
rep = typecheck(inc, l_in, all_labels_sta(div(2)))
print(rep.verdict, format_tree(rep.input_tree), "->", format_tree(rep.output_tree))

# %%
# a leaf a becomes a(a): the image {a(a)} is not regular, so this is refused.
try:
    forward_apply_slin(duplication_stt(), sta_to_srtg(all_labels_sta(in_range(None, None), k=1)))
except PreconditionError as exc:
    print("refused:", exc)
