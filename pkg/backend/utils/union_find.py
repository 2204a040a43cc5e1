"""
Union-find over element ids, used for D-classes, orbits and class merging
"""

from typing import Callable, Dict, Hashable, Iterable, List


class UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x: Hashable) -> Hashable:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: Hashable, y: Hashable) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def blocks(self) -> List[List[Hashable]]:
        """Blocks with sorted members, ordered by their minimal member"""
        grouped: Dict[Hashable, List[Hashable]] = {}
        for x in self.parent:
            grouped.setdefault(self.find(x), []).append(x)
        return sorted((sorted(block) for block in grouped.values()), key=lambda block: block[0])


def find_orbits(gens: Iterable, space: Iterable, action: Callable) -> List[List[Hashable]]:
    """Orbits of a group action given by generators"""
    space = list(space)
    uf = UnionFind(space)
    for g in gens:
        for x in space:
            uf.union(x, action(g, x))
    return uf.blocks()


def blocks_from_labels(labels: Dict[Hashable, Hashable]) -> List[List[Hashable]]:
    """Partition items by equal label, canonical order"""
    grouped: Dict[Hashable, List[Hashable]] = {}
    for item, label in labels.items():
        grouped.setdefault(label, []).append(item)
    return sorted((sorted(block) for block in grouped.values()), key=lambda block: block[0])
