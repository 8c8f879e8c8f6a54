"""The four objects of m~^2_2, the covering arrows, and a tree read as an expression."""
from higherops import itmon
from higherops.trees import NTree

for A, B in itmon.covering_arrows(2, 2):
    print(itmon.render(A), "->", itmon.render(B))

T = NTree([4, 2], [[1, 1, 2, 2], [1, 1]])
print("a(T) =", itmon.render(itmon.a_tree(T)))
print(itmon.hasse_dot(2, 2))
