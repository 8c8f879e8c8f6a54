"""Split a few ordinal maps into permutation-then-monotone and compose in Perm."""
from higherops.ordmaps import OrdMap, Perm, compose, factorize, format_map, gamma

for images in ([2, 1, 2, 1], [3, 1, 1, 2], [1, 1, 2]):
    s = OrdMap(images, max(images))
    p, v = factorize(s)
    print(f"{format_map(s):>16} = {format_map(p)} then {format_map(v)}", compose(p, v) == s)

g = gamma(Perm([1, 3, 2]), [Perm([2, 1]), Perm([1, 2]), Perm([1])])
print("gamma((132); (21), (12), (1)) =", list(g.images))
