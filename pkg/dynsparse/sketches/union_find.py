"""Disjoint sets with union by size and path compression."""

from __future__ import annotations

from collections import defaultdict

import numpy as np
import numpy.typing as npt


class UnionFind:
    """
    Forest of up-trees over the vertices 0..n-1.

    parents[i] is the parent index of node i; sizes[r] is the number of nodes
    under root r (0 for non-roots).
    """

    def __init__(self, n: int) -> None:
        self.parents = np.arange(n, dtype=np.int64)
        self.sizes = np.ones(n, dtype=np.int64)
        self.components = n

    def find(self, i: int) -> int:
        """Root of i; links every node on the path directly to the root."""
        root = i
        while self.parents[root] != root:
            root = int(self.parents[root])
        while self.parents[i] != root:
            self.parents[i], i = root, int(self.parents[i])
        return root

    def union(self, i: int, j: int) -> bool:
        """Merge the trees of i and j; False if already joined."""
        root_i, root_j = self.find(i), self.find(j)
        if root_i == root_j:
            return False
        large, small = root_i, root_j
        if self.sizes[root_i] < self.sizes[root_j]:
            large, small = small, large
        self.sizes[large] += self.sizes[small]
        self.sizes[small] = 0
        self.parents[small] = large
        self.components -= 1
        return True

    def connected(self, i: int, j: int) -> bool:
        return self.find(i) == self.find(j)

    def groups(self) -> dict[int, list[int]]:
        """Members of each tree, keyed by root."""
        groups: defaultdict[int, list[int]] = defaultdict(list)
        for i in range(len(self.parents)):
            groups[self.find(i)].append(i)
        return dict(groups)

    def labels(self) -> npt.NDArray[np.int64]:
        """Canonical component label per vertex: the smallest member."""
        n = len(self.parents)
        smallest: dict[int, int] = {}
        out = np.empty(n, dtype=np.int64)
        for i in range(n):
            root = self.find(i)
            out[i] = smallest.setdefault(root, i)
        return out
