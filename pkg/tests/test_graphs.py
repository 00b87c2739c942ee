import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arcwalk import (
    COMPLETE,
    NOT_SRG,
    SRGParams,
    complement,
    complete_graph,
    cycle_graph,
    from_edge_list,
    graph_from_adjacency,
    parse_edge_list,
    petersen_graph,
    read_edge_list,
    rook_graph,
    srg_from_regular_hadamard,
    validate_srg,
    write_edge_list,
)


def count_srg_params(g):
    """Independent oracle: common-neighbor counting over adjacency sets."""
    nbrs = [set(np.flatnonzero(g.adjacency[v]).tolist()) for v in range(g.n)]
    a_counts, c_counts = set(), set()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            common = len(nbrs[u] & nbrs[v])
            if g.adjacency[u, v]:
                a_counts.add(common)
            else:
                c_counts.add(common)
    if len(a_counts) != 1 or len(c_counts) != 1:
        return None
    return (g.n, g.degree, a_counts.pop(), c_counts.pop())


def test_complete_graph_structure():
    g = complete_graph(4)
    assert g.n == 4 and g.degree == 3
    assert g.is_connected and not g.is_bipartite
    assert g.num_edges == 6
    assert np.array_equal(g.adjacency, np.ones((4, 4), int) - np.eye(4, dtype=int))


def test_cycle_graph_structure():
    g = cycle_graph(4)
    assert g.degree == 2 and g.is_connected and g.is_bipartite
    chi = g.color_class
    assert chi is not None
    # endpoints of every edge get opposite colors
    for u, v in zip(*np.nonzero(g.adjacency)):
        assert chi[u] * chi[v] == -1
    assert not cycle_graph(5).is_bipartite


def test_petersen_structure():
    g = petersen_graph()
    assert g.n == 10 and g.degree == 3
    assert g.is_connected and not g.is_bipartite
    assert g.num_edges == 15


def test_rook_graph_structure():
    g = rook_graph(4)
    assert g.n == 16 and g.degree == 6 and g.is_connected
    # cells (0,0) and (0,1) share a row; (0,0) and (1,1) share nothing
    assert g.adjacency[0, 1] == 1
    assert g.adjacency[0, 5] == 0


def test_adjacency_is_frozen():
    g = complete_graph(4)
    with pytest.raises(ValueError):
        g.adjacency[0, 1] = 0


@pytest.mark.parametrize(
    "build,expected",
    [
        (lambda: rook_graph(4), (16, 6, 2, 2)),
        (lambda: rook_graph(3), (9, 4, 1, 2)),
        (petersen_graph, (10, 3, 0, 1)),
        (lambda: cycle_graph(4), (4, 2, 0, 2)),
    ],
)
def test_validate_srg_against_counting_oracle(build, expected):
    g = build()
    assert count_srg_params(g) == expected
    verdict = validate_srg(g)
    assert isinstance(verdict, SRGParams)
    assert verdict.as_tuple() == expected


def test_validate_srg_complete_and_negative():
    assert validate_srg(complete_graph(4)) == COMPLETE
    assert validate_srg(complete_graph(5)) == COMPLETE
    assert validate_srg(cycle_graph(6)) == NOT_SRG
    assert count_srg_params(cycle_graph(6)) is None


def test_validate_srg_rejects_irregular_and_disconnected():
    path = from_edge_list([(0, 1), (1, 2)], 3)
    with pytest.raises(ValueError, match="regular"):
        validate_srg(path)
    two_edges = from_edge_list([(0, 1), (2, 3)], 4)
    with pytest.raises(ValueError, match="connected"):
        validate_srg(two_edges)


def test_complement_parameters():
    g = rook_graph(4)
    params = validate_srg(g).as_tuple()
    n, k, a, c = params
    expected = (n, n - k - 1, n - 2 - 2 * k + c, n - 2 * k + a)
    co = complement(g)
    assert validate_srg(co).as_tuple() == expected == (16, 9, 4, 6)
    assert count_srg_params(co) == expected


def test_complement_involution():
    g = petersen_graph()
    assert np.array_equal(complement(complement(g)).adjacency, g.adjacency)
    # complement of a complete graph has no edges at all
    assert complement(complete_graph(4)).num_edges == 0


def test_from_edge_list_rejects_bad_edges():
    with pytest.raises(ValueError, match=r"\(0, 4\)"):
        from_edge_list([(0, 4)], 3)
    with pytest.raises(ValueError, match=r"self-loop"):
        from_edge_list([(1, 1)], 3)


def test_from_edge_list_collapses_duplicates():
    g1 = from_edge_list([(0, 1), (1, 0), (0, 1), (1, 2)], 3)
    g2 = from_edge_list([(0, 1), (1, 2)], 3)
    assert np.array_equal(g1.adjacency, g2.adjacency)


def test_graph_from_adjacency_validation():
    with pytest.raises(ValueError, match="symmetric"):
        graph_from_adjacency([[0, 1], [0, 0]])
    with pytest.raises(ValueError, match="0 or 1"):
        graph_from_adjacency([[0, 2], [2, 0]])
    with pytest.raises(ValueError, match="diagonal"):
        graph_from_adjacency([[1, 0], [0, 1]])


def test_parse_edge_list_round_trip():
    g = petersen_graph()
    text = write_edge_list(g)
    n, edges = parse_edge_list(text)
    assert n == g.n
    assert np.array_equal(from_edge_list(edges, n).adjacency, g.adjacency)


def test_parse_edge_list_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="<string>:3"):
        parse_edge_list("3 2\n0 1\n1 2 9\n")
    with pytest.raises(ValueError, match="<string>:2"):
        parse_edge_list("# comment\nnot numbers\n")
    with pytest.raises(ValueError, match="declares 5"):
        parse_edge_list("3 5\n0 1\n")
    with pytest.raises(ValueError, match="empty"):
        parse_edge_list("# only comments\n")


def test_read_edge_list(tmp_path):
    path = tmp_path / "c4.edges"
    path.write_text("4 4\n# a square\n0 1\n1 2\n2 3\n3 0\n")
    g = read_edge_list(path)
    assert np.array_equal(g.adjacency, cycle_graph(4).adjacency)


def test_srg_from_regular_hadamard_order_4():
    H = np.ones((4, 4), int) - 2 * np.eye(4, dtype=int)
    g = srg_from_regular_hadamard(H)
    assert np.array_equal(g.adjacency, complete_graph(4).adjacency)
    assert validate_srg(g) == COMPLETE


def test_srg_from_regular_hadamard_order_16():
    H4 = np.ones((4, 4), int) - 2 * np.eye(4, dtype=int)
    H = np.kron(H4, H4)
    g = srg_from_regular_hadamard(H)
    assert validate_srg(g).as_tuple() == (16, 6, 2, 2)
    assert count_srg_params(g) == (16, 6, 2, 2)


def test_srg_from_regular_hadamard_rejections():
    H4 = np.ones((4, 4), int) - 2 * np.eye(4, dtype=int)
    with pytest.raises(ValueError, match="symmetric"):
        srg_from_regular_hadamard(np.array([[1, 1, 1, -1]] * 3 + [[1, -1, 1, 1]]))
    with pytest.raises(ValueError, match="nI"):
        srg_from_regular_hadamard(np.ones((4, 4), int))
    bad_diag = H4.copy()
    bad_diag[0, 0] = 1
    with pytest.raises(ValueError):
        srg_from_regular_hadamard(bad_diag)
    # order-2 Hadamard matrices are never regular
    with pytest.raises(ValueError, match="row sums"):
        srg_from_regular_hadamard(np.array([[1, 1], [1, -1]]))
    with pytest.raises(ValueError, match="\\+1 or -1"):
        srg_from_regular_hadamard(np.zeros((4, 4), int))


@settings(deadline=None, max_examples=40)
@given(st.data())
def test_from_edge_list_properties(data):
    n = data.draw(st.integers(3, 8))
    possible = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(possible), max_size=len(possible)))
    g = from_edge_list(edges, n)
    assert np.array_equal(g.adjacency, g.adjacency.T)
    assert np.trace(g.adjacency) == 0
    assert set(np.unique(g.adjacency)) <= {0, 1}
    assert g.num_edges == len(set(edges))
    # ingestion is idempotent under duplication
    again = from_edge_list(edges + edges, n)
    assert np.array_equal(again.adjacency, g.adjacency)
    # serialize and re-ingest
    n2, edges2 = parse_edge_list(write_edge_list(g))
    assert np.array_equal(from_edge_list(edges2, n2).adjacency, g.adjacency)
