"""Exact s-t minimum cut.

Capacities are exact costs; ``math.inf`` marks uncuttable edges and is
never replaced by a big-M constant.
"""

from __future__ import annotations

from collections import deque

from .costs import INF, Cost


class FlowNetwork:
    def __init__(self) -> None:
        self.cap: dict[object, dict[object, Cost]] = {}

    def add_node(self, u) -> None:
        self.cap.setdefault(u, {})

    def add_edge(self, u, v, capacity: Cost) -> None:
        if capacity == 0:
            return
        if capacity < 0:
            raise ValueError(f"negative capacity on {u}->{v}")
        self.add_node(u)
        self.add_node(v)
        self.cap[u][v] = self.cap[u].get(v, 0) + capacity
        self.cap[v].setdefault(u, 0)

    def _infinite_path(self, s, t) -> bool:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, c in self.cap[u].items():
                if c == INF and v not in seen:
                    if v == t:
                        return True
                    seen.add(v)
                    queue.append(v)
        return False

    def min_cut(self, s, t) -> tuple[Cost, set]:
        """Return ``(value, source_side)``.

        ``source_side`` is the set reachable from ``s`` in the final
        residual graph, i.e. the smallest source side among all minimum
        cuts. When the cut is infinite it is ``{s}``.
        """
        self.add_node(s)
        self.add_node(t)
        if self._infinite_path(s, t):
            return INF, {s}
        # no all-infinite path exists, so every augmenting path has a finite bottleneck
        residual = {u: dict(nbrs) for u, nbrs in self.cap.items()}
        flow: Cost = 0
        while True:
            parent = {s: None}
            queue = deque([s])
            while queue and t not in parent:
                u = queue.popleft()
                for v, c in residual[u].items():
                    if c > 0 and v not in parent:
                        parent[v] = u
                        queue.append(v)
            if t not in parent:
                break
            bottleneck = INF
            v = t
            while parent[v] is not None:
                u = parent[v]
                bottleneck = min(bottleneck, residual[u][v])
                v = u
            v = t
            while parent[v] is not None:
                u = parent[v]
                if residual[u][v] != INF:
                    residual[u][v] -= bottleneck
                if residual[v][u] != INF:
                    residual[v][u] += bottleneck
                v = u
            flow += bottleneck
        return flow, set(parent)
