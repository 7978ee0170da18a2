#!/usr/bin/env python3
"""Writes the rectangular-torus honeycomb clusters shipped in data/clusters.

Cells (i, j) live on an L1 x L2 torus spanned by a1, a2. Each cell holds an
A site (label 2*(i + L1*j) + 1) and a B site (label + 1). Bonds:
  A(n) - B(n)       z
  A(n) - B(n - a1)  x
  A(n) - B(n - a2)  y
The hexagon of cell n is traversed as
  A(n) B(n) A(n+a1) B(n+a1-a2) A(n+a1-a2) B(n-a2)
and each site carries the type of its bond leaving the hexagon.

The Kitaev-Preskill style partitions cut the hexagon of cell (0, 0) into
three consecutive bond pairs (A, B, C); larger clusters grow each region by
the site across the outward bond of its first member.

The 24-site cluster is not generated here; its labels follow the reference
figure and are maintained by hand in honeycomb24.cluster.
"""
import sys
from pathlib import Path


def build(l1, l2):
    def a(i, j):
        return 2 * ((i % l1) + l1 * (j % l2)) + 1

    def b(i, j):
        return a(i, j) + 1

    links = []
    for j in range(l2):
        for i in range(l1):
            links.append((a(i, j), b(i, j), "z"))
            links.append((a(i, j), b(i - 1, j), "x"))
            links.append((a(i, j), b(i, j - 1), "y"))
    plaqs = []
    for j in range(l2):
        for i in range(l1):
            sites = [a(i, j), b(i, j), a(i + 1, j), b(i + 1, j - 1), a(i + 1, j - 1), b(i, j - 1)]
            plaqs.append(list(zip(sites, "xyzxyz")))
    return links, plaqs


def neighbour(links, site, t):
    for i, j, lt in links:
        if lt == t and site in (i, j):
            return j if i == site else i
    raise KeyError((site, t))


def write(path, n1, n2, grow):
    links, plaqs = build(n1, n2)
    hexagon = plaqs[0]
    parts = {"A": [hexagon[0][0], hexagon[1][0]],
             "B": [hexagon[2][0], hexagon[3][0]],
             "C": [hexagon[4][0], hexagon[5][0]]}
    if grow:
        for name, k in (("A", 0), ("B", 2), ("C", 4)):
            site, label = hexagon[k]
            parts[name].append(neighbour(links, site, label))
    n = 2 * n1 * n2
    with open(path, "w") as f:
        f.write(f"# honeycomb torus, {n1} x {n2} unit cells\n")
        f.write(f"sites {n}\n")
        for i, j, t in links:
            f.write(f"link {i} {j} {t}\n")
        for p in plaqs:
            f.write("plaq " + " ".join(f"{s}:{t}" for s, t in p) + "\n")
        for name, sites in parts.items():
            f.write(f"part {name} " + " ".join(str(s) for s in sorted(sites)) + "\n")


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/clusters")
    write(out / "honeycomb8.cluster", 2, 2, False)
    write(out / "honeycomb12.cluster", 2, 3, False)
    write(out / "honeycomb18.cluster", 3, 3, True)
