"""
Which groups have a nontrivial center?
======================================

A vertex adjacent to every other vertex is rare. It happens for cyclic
groups and for p-groups whose elements all share a cyclic subgroup.
"""

from powgraph import build_group, power_graph
from powgraph.classes import classify_center_case
from powgraph.groups import abelian, cyclic, dicyclic, dihedral, symmetric_group

groups = [cyclic(16), cyclic(15), cyclic(12), dicyclic(2), dicyclic(4), dihedral(8), abelian([2, 4]), symmetric_group(4)]

print(f"{'group':<14}{'|V|':>5}{'|S|':>5}  case")
for spec in groups:
    case = classify_center_case(power_graph(build_group(spec)))
    print(f"{spec.label:<14}{case.order:>5}{case.center_size:>5}  {case.kind.value}")

# Z15: the center holds e and the 8 generators, (3-1)(5-1)+1 = 9 vertices
