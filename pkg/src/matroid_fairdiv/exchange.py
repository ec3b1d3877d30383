"""Exchange graphs, shortest paths and path augmentation.

For an allocation, the exchange graph has a vertex per good and an edge
``(g, h)`` whenever the owner of ``g`` can swap ``g`` for ``h`` (with ``h``
outside the owner's bundle) without losing value.  Only allocated goods have
out-edges.  Successor sets are computed lazily and cached, so a graph
that is only searched backwards from one good never materialises every
edge.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .errors import PreconditionError
from .instances import Allocation, Instance, check_allocation, is_non_redundant


class ExchangeGraph:
    """Exchange graph over ``goods`` for the given (bundle, valuation) owners.

    ``owners`` may contain more bundles than real agents; the solver uses
    this to add its dummy agent.
    """

    def __init__(self, goods: Sequence[str], owners: Sequence[tuple]):
        self.goods = tuple(goods)
        self.vertices = frozenset(self.goods)
        self.owners = tuple((frozenset(b), v) for b, v in owners)
        self._pos = {g: i for i, g in enumerate(self.goods)}
        self._owner_of = {}
        for k, (bundle, _) in enumerate(self.owners):
            for g in bundle:
                self._owner_of[g] = k
        self._succ = {}

    def position(self, good) -> int:
        return self._pos[good]

    def owner_of(self, good) -> Optional[int]:
        """Position of the owning bundle in ``owners`` (0-based), or ``None``."""
        return self._owner_of.get(good)

    def successors(self, good) -> frozenset:
        out = self._succ.get(good)
        if out is None:
            k = self._owner_of.get(good)
            if k is None:
                out = frozenset()
            else:
                bundle, val = self.owners[k]
                out = val.swap_set(bundle, good, self.vertices)
            self._succ[good] = out
        return out

    def has_edge(self, g, h) -> bool:
        return h in self.successors(g)

    def edges(self) -> list:
        key = self._pos.__getitem__
        return [(g, h) for g in self.goods for h in sorted(self.successors(g), key=key)]

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.edges()]}

    # -- search ------------------------------------------------------------------
    def shortest_path(self, sources: Iterable[str], targets: Iterable[str]) -> Optional[tuple]:
        """Breadth-first search from ``sources`` to ``targets``.

        Sources and successors are expanded in canonical good order and
        the first target discovered wins, which fixes the choice among
        equally short paths.  A source that is also a target gives the
        one-vertex (degenerate) path.
        """
        key = self._pos.__getitem__
        src = sorted(set(sources) & self.vertices, key=key)
        tgt = set(targets) & self.vertices
        for s in src:
            if s in tgt:
                return (s,)
        parent = dict.fromkeys(src)
        frontier = src
        while frontier:
            nxt = []
            for y in frontier:
                for x in sorted(self.successors(y), key=key):
                    if x in parent:
                        continue
                    parent[x] = y
                    if x in tgt:
                        path = [x]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        return tuple(reversed(path))
                    nxt.append(x)
            frontier = nxt
        return None

    def distances_to(self, target) -> tuple:
        """Backward BFS: ``(dist, next_hop)`` for every good that can reach ``target``.

        ``next_hop[y]`` is the lowest-index successor of ``y`` one step
        closer to ``target``; following it from any good gives a shortest
        path.
        """
        key = self._pos.__getitem__
        dist = {target: 0}
        next_hop = {}
        frontier = {target}
        pending = [g for g in self.goods if g in self._owner_of and g != target]
        d = 0
        while frontier and pending:
            d += 1
            reached, rest = [], []
            for y in pending:
                succ = self.successors(y)
                if succ.isdisjoint(frontier):
                    rest.append(y)
                else:
                    next_hop[y] = min(succ & frontier, key=key)
                    reached.append(y)
            for y in reached:
                dist[y] = d
            frontier = set(reached)
            pending = rest
        return dist, next_hop

    @staticmethod
    def follow(start, next_hop) -> tuple:
        path = [start]
        while path[-1] in next_hop:
            path.append(next_hop[path[-1]])
        return tuple(path)


def build(inst: Instance, alloc: Allocation, check: bool = True) -> ExchangeGraph:
    check_allocation(inst, alloc)
    if check and not is_non_redundant(inst, alloc):
        raise PreconditionError("exchange graphs are only defined here for non-redundant allocations")
    return ExchangeGraph(inst.goods, zip(alloc.bundles, inst.valuations))


def augment_bundles(bundles: Sequence[frozenset], path: Sequence[str]) -> tuple:
    # replacements are decided on the original bundle, all at once
    repl = {path[j]: path[j + 1] for j in range(len(path) - 1)}
    if not repl:
        return tuple(bundles)
    return tuple(frozenset(repl.get(g, g) for g in b) if not repl.keys().isdisjoint(b) else b
                 for b in bundles)


def augment(alloc: Allocation, path: Sequence[str]) -> Allocation:
    """Replace every owned path good ``g_j`` (j < t) by its successor ``g_{j+1}``."""
    return Allocation(augment_bundles(alloc.bundles, path))


def transfer(inst: Instance, alloc: Allocation, gainer: int, loser: int) -> Optional[Allocation]:
    """Move one unit of utility from ``loser`` to ``gainer`` along a shortest path.

    The path runs from a good of marginal value one for the gainer to a
    good in the loser's bundle.  Returns ``None`` when no such path exists.
    """
    if gainer == loser:
        raise PreconditionError("gainer and loser must differ")
    graph = build(inst, alloc)
    sources = inst.agents[gainer - 1].valuation.f_set(alloc[gainer])
    path = graph.shortest_path(sources, alloc[loser])
    if path is None:
        return None
    bundles = list(augment_bundles(alloc.bundles, path))
    bundles[loser - 1] = bundles[loser - 1] - {path[-1]}
    bundles[gainer - 1] = bundles[gainer - 1] | {path[0]}
    return Allocation(tuple(bundles))
