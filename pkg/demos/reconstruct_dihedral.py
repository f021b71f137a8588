"""
Orienting the power graph of a dihedral group
=============================================

Build the dihedral group of order 18, throw away everything except its
undirected power graph, and recover the arcs from structure alone.
"""

import numpy as np

from powgraph import build_group, power_graph, reconstruct
from powgraph.groups import dihedral
from powgraph.classes import classify_all, classify_center_case
from powgraph.isomorphism import find_isomorphism
from powgraph.verify import oracle_digraph

# the group and its unlabeled power graph
g = build_group(dihedral(9))
phi = power_graph(g).strip_labels()
print(f"{len(g)} elements, {len(phi.edges())} edges")

# only the identity is adjacent to everything, so the center is trivial
print("center case:", classify_center_case(phi))

# the rotations form one class of 8 vertices; its closed hull has 9
for info in classify_all(phi):
    if info.card > 1:
        print("class of size", info.card, "->", info.kind.value, (info.p, info.s, info.r))

# orient and compare with the digraph computed by multiplication
arcs = reconstruct(phi)
truth = oracle_digraph(g).strip_labels()
res = find_isomorphism(arcs, truth)
print("isomorphic to the true directed power graph:", res.isomorphic)

# the tower inside the rotation class: 2 elements of order 3, 6 of order 9
out_deg = np.sort(arcs.arcs.sum(axis=1))
print("out-degree profile:", np.unique(out_deg, return_counts=True))
