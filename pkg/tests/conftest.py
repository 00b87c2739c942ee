import functools
from dataclasses import dataclass

import numpy as np
import pytest

from arcwalk import (
    Graph,
    SpectralDecomposition,
    WalkSpectrum,
    build_arc_space,
    complete_graph,
    cycle_graph,
    eigendecompose_symmetric,
    petersen_graph,
    rook_graph,
    transition_matrix,
    walk_spectrum,
)
from arcwalk.walk import ArcSpace

GRAPH_BUILDERS = {
    "k4": lambda: complete_graph(4),
    "c4": lambda: cycle_graph(4),
    "k5": lambda: complete_graph(5),
    "petersen": petersen_graph,
    "rook3": lambda: rook_graph(3),
    "rook4": lambda: rook_graph(4),
}

NON_BIPARTITE = ("k4", "k5", "petersen", "rook3", "rook4")
ALL_GRAPHS = tuple(GRAPH_BUILDERS)


@dataclass(frozen=True, eq=False)
class Bundle:
    graph: Graph
    dec: SpectralDecomposition
    arcs: ArcSpace
    ws: WalkSpectrum
    U: np.ndarray


@functools.lru_cache(maxsize=None)
def get_bundle(name: str) -> Bundle:
    g = GRAPH_BUILDERS[name]()
    dec = eigendecompose_symmetric(g)
    arcs = build_arc_space(g)
    ws = walk_spectrum(dec, arcs)
    return Bundle(graph=g, dec=dec, arcs=arcs, ws=ws, U=transition_matrix(arcs))


@pytest.fixture(scope="session")
def bundle():
    return get_bundle
