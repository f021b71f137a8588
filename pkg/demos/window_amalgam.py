"""
Directions without multiplication in <a, b | a^2 = b^3>
========================================================

Every element of infinite order here lies in <a> or <b>. The two witnesses
a and b are not adjacent, and the complement on their shared neighbours
splits into one big piece and the two generators of <a^2>. That piece
alone tells us which way each edge points.
"""

from powgraph import build_group
from powgraph.groups import amalgam, z_window
from powgraph import window as w

g = build_group(amalgam(2, 3, 24))
a, b = g.parse("a"), g.parse("b")

comp, idx = w.intersection_complement(g, a, b)
rep = w.almost_connected(comp)
print("almost connected:", rep.verdict)
print("isolated:", sorted(g.label(g.elements[idx[k]]) for k in rep.isolated))

rec = w.recover_directions(g, a, b, tau=3)
bad = rec.disagreements(w.window_digraph(g))
print(f"{len(rec.guarded_edges)} guarded edges, {len(bad)} disagree with the true arcs")

i = g.index
print("a -> a^4:", bool(rec.digraph.arcs[i(a), i(g.parse("a^4"))]))
print("a^4 -> a:", bool(rec.digraph.arcs[i(g.parse("a^4")), i(a)]))

# the integers behave differently: +-1 reach everything, so the same test
# never applies and the locally cyclic check takes over
z = build_group(z_window(50))
print("Z locally cyclic:", w.locally_cyclic_check(z).verdict)
