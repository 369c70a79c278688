"""Small exact network-flow solvers (any ordered field: Fraction or float)."""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    """Residual graph in adjacency-list form; arcs are stored in pairs."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list = []
        self.cost: list = []

    def add_arc(self, u: int, v: int, cap, cost=0) -> int:
        idx = len(self.to)
        self.head[u].append(idx)
        self.to.append(v)
        self.cap.append(cap)
        self.cost.append(cost)
        self.head[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(cap * 0)
        self.cost.append(-cost)
        return idx

    def max_flow(self, s: int, t: int):
        """Edmonds-Karp; returns the flow value. Capacities are consumed."""
        total = None
        while True:
            parent = [-1] * self.n
            parent[s] = -2
            queue = deque([s])
            while queue and parent[t] == -1:
                u = queue.popleft()
                for e in self.head[u]:
                    v = self.to[e]
                    if parent[v] == -1 and self.cap[e] > 0:
                        parent[v] = e
                        queue.append(v)
            if parent[t] == -1:
                return total if total is not None else 0
            push = None
            v = t
            while v != s:
                e = parent[v]
                push = self.cap[e] if push is None or self.cap[e] < push else push
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = parent[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            total = push if total is None else total + push

    def min_cost_flow(self, s: int, t: int, demand):
        """Successive shortest paths with Bellman-Ford.

        Sends ``demand`` units from ``s`` to ``t`` at least cost and returns
        ``(sent, cost)``; negative residual costs are handled directly.
        """
        sent = demand * 0
        cost = demand * 0
        while sent < demand:
            dist = [None] * self.n
            parent = [-1] * self.n
            dist[s] = cost * 0
            in_queue = [False] * self.n
            queue = deque([s])
            in_queue[s] = True
            while queue:
                u = queue.popleft()
                in_queue[u] = False
                for e in self.head[u]:
                    if self.cap[e] <= 0:
                        continue
                    v = self.to[e]
                    nd = dist[u] + self.cost[e]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        parent[v] = e
                        if not in_queue[v]:
                            in_queue[v] = True
                            queue.append(v)
            if dist[t] is None:
                break
            push = demand - sent
            v = t
            while v != s:
                e = parent[v]
                if self.cap[e] < push:
                    push = self.cap[e]
                v = self.to[e ^ 1]
            v = t
            while v != s:
                e = parent[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            sent += push
            cost += push * dist[t]
        return sent, cost

    def flow_on(self, arc: int):
        """Flow currently carried by the forward arc ``arc``."""
        return self.cap[arc ^ 1]
