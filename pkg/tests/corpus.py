"""Named graphs used across the test suite."""

from src.graph_core import (
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    from_edges,
    parse_edge_list,
    path_graph,
)

P3 = parse_edge_list("0 1\n1 2")
P4 = path_graph(4)
T = parse_edge_list("0 1\n1 2\n1 3")
K3 = complete_graph(3)
C4 = from_edges([(0, 1), (1, 2), (2, 3), (0, 3)])

CORPUS = {
    "P3": P3,
    "P4": P4,
    "T": T,
    "K3": K3,
    "C4": C4,
    "C5": cycle_graph(5),
    "C6": cycle_graph(6),
    "P6": path_graph(6),
    "K4": complete_graph(4),
    "K23": complete_bipartite_graph(2, 3),
}

# P3 orientations: Ω_a = {1->0, 2->1}, Ω_b = {1->0, 1->2}
P3_A = 0
P3_B = 2
# T orientations on edges (0,1), (1,2), (1,3)
T_BOTTOM = 0  # {1->0, 2->1, 3->1}
T_LEFT = 2  # {1->0, 1->2, 3->1}
T_RIGHT = 4  # {1->0, 2->1, 1->3}
T_TOP = 6  # {1->0, 1->2, 1->3}
