"""Coherence and structure trends across lift levels for several random bases.

Prints one row per (base, seed, level). Random instances depend on the seed,
so only trends (not values) are comparable to published tables.
"""

import argparse

from hl2lab import hl2_tower, make_erdos_renyi, make_random_regular
from hl2lab.coherence import coherence_report
from hl2lab.structural import structural_report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--n", type=int, default=20)
    args = ap.parse_args(argv)

    print("base,seed,level,n,avg_ipr,rel_entropy,mean_return,trace_a4_per_vertex,triangles_per_vertex")
    for seed in args.seeds:
        for name, base in [("rr3", make_random_regular(args.n, 3, seed)),
                           ("er0.1", make_erdos_renyi(args.n, 0.1, seed))]:
            graphs, _ = hl2_tower(base, args.levels)
            for r, g in enumerate(graphs):
                c = coherence_report(g, 5, level=r)
                s = structural_report(g)
                print(f"{name},{seed},{r},{g.n},{c.avg_ipr:.5g},{c.rel_entropy:.5g},"
                      f"{c.walk.mean:.5g},{s.trace_a4_per_vertex:.5g},{s.triangles_per_vertex:.5g}")


if __name__ == "__main__":
    main()
