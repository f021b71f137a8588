"""Power graphs of groups, and recovery of the directed Z±-power graph from the undirected one."""
from .classes import (
    CenterCase,
    CenterKind,
    ClassKind,
    ClassProfile,
    EquivClassInfo,
    center,
    class_order_multiset,
    classify_center_case,
    classify_class,
    classify_profile_class,
)
from .errors import *  # noqa: F401,F403
from .graphs import (
    DiGraph,
    UGraph,
    VertexPartition,
    approx_classes,
    closed_neighborhood,
    common_closed_neighborhood,
    directed_power_graph,
    double_neighborhood,
    equiv_classes,
    power_graph,
    split_by_order,
    zpm_directed_power_graph,
    zpm_power_graph,
)
from .groups import (
    ALEPH0,
    GroupModel,
    GroupSpec,
    build_group,
    cyclic_subgroup,
    element_order,
    enumerate_elements,
    is_power_member,
)
from .isomorphism import digraph_isomorphic, find_isomorphism
from .numtheory import prime_power_parse, totient
from .reconstruct import canonical_cyclic_dpg, plan_orientation, reconstruct, synthesize_class_tower
from .verify import VerifyReport, oracle_digraph, run_corpus, verify_group

__version__ = "0.1.0"
