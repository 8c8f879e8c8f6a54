"""A free 1-operad on a binary and a ternary generator, then its symmetrisation."""
from higherops import hcat, nops
from higherops.trees import M, format_tree

ts = hcat.connecting_trees(1, 3)
A = nops.free_n_operad({M(1, 0, 2): ["b"], M(1, 0, 3): ["t"]}, 2, ts)
for T in ts:
    print(f"{format_tree(T):<32}", [nops.render(x) for x in A.elements[T]])
for k in (1, 2, 3):
    print(f"k={k}: symmetrised classes {len(hcat.symmetrise(A, k, k + 1))}, "
          f"k!|A_k| = {hcat.free_operad_symmetrisation_oracle(A, k)}")
