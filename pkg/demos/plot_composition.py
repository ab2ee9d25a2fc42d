"""
Composing transducers
=====================

``M ; N`` runs N symbolically over the right-hand sides of M.  Guards pick
up preimages of M's label functions along the way.  The composite is exact
when M is deterministic or N linear, and M total or N nondeleting.
"""

import random

from symtree.catalog import divide_or_copy_stt, halve_evens_stt, swap_stt
from symtree.compose import compose_apply, compose_semantics_check, syntactic_compose
from symtree.stt import rename_states, stt_apply
from symtree.tree import Tree


def random_tree(rng, depth=3):
    if depth == 1 or rng.random() < 0.3:
        return Tree(rng.randint(0, 12))
    return Tree(rng.randint(0, 12), [random_tree(rng, depth - 1) for _ in range(rng.choice([0, 2]))])


m = divide_or_copy_stt()
mm = rename_states(syntactic_compose(m, m))
print(f"M;M has {len(mm.rules)} rules, e.g.")
for r in mm.rules[:4]:
    print("  ", r)
print(compose_semantics_check(m, m))

# %%
# Where the conditions hold the composite and the sequential run agree.
rng = random.Random(0)
for left, right in [(halve_evens_stt(), m), (m, swap_stt())]:
    g = compose_semantics_check(left, right)
    both = syntactic_compose(left, right)
    same = all(stt_apply(both, t) == compose_apply(left, right, t) for t in (random_tree(rng) for _ in range(100)))
    print(g, "agrees on 100 samples:", same)
