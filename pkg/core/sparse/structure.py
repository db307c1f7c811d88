"""Red/black structure detection for 2-cyclic matrices.

A matrix can be symmetrically permuted to [[D1, A12], [A21, D2]] with D1, D2
diagonal exactly when the undirected graph of its off-diagonal nonzeros is
bipartite; the two color classes give the permutation.
"""
from __future__ import annotations

from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, connected_components

from core.sparse.matrix import SparseMatrix
from core.utils.logger import get_logger

_log = get_logger(__name__)


def _off_diagonal_graph(matrix: SparseMatrix) -> sp.csr_array:
    pattern = matrix.to_scipy()
    pattern.setdiag(0)
    pattern.eliminate_zeros()
    pattern = (abs(pattern) > 0).astype(np.int8)
    return sp.csr_array(pattern + pattern.T)


def verify_2cyclic(matrix: SparseMatrix) -> Tuple[bool, Optional[np.ndarray]]:
    """2-color the off-diagonal graph by breadth-first search.

    Returns ``(True, coloring)`` with a 0/1 (red/black) vector when the graph is
    bipartite, ``(False, None)`` otherwise. Each connected component's
    lowest-numbered vertex is colored 0.
    """
    graph = _off_diagonal_graph(matrix)
    n_components, labels = connected_components(graph, directed=False)
    coloring = np.zeros(matrix.n, dtype=np.int8)
    _, roots = np.unique(labels, return_index=True)
    for root in roots:
        order, predecessors = breadth_first_order(graph, int(root), directed=False,
                                                  return_predecessors=True)
        for node in order[1:]:
            coloring[node] = 1 - coloring[predecessors[node]]

    rows, cols = graph.nonzero()
    if np.any(coloring[rows] == coloring[cols]):
        _log.debug("matrix of order %d is not 2-cyclic (odd cycle in %d component(s))",
                   matrix.n, n_components)
        return False, None
    return True, coloring


def red_black_permutation(coloring: np.ndarray) -> np.ndarray:
    """Stable permutation listing color-0 rows first, then color-1 rows."""
    return np.argsort(coloring, kind="stable")
