"""Component counts of h^n_k at growing vertex bounds."""
import sys

from higherops import hcat

bound = int(sys.argv[1]) if len(sys.argv) > 1 else 4
for n in (1, 2):
    for k in (1, 2, 3):
        count, report = hcat.pi0(n, k, bound, hcat.connecting_trees(n, k))
        print(f"n={n} k={k}: components {count} by bound {dict(report['counts'])} stable={report['stable']}")
