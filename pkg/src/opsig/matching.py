"""Subgraph correspondence between a referent signature and a candidate CFG.

The decision runs in three stages:

1. A viability matrix pairs referent node i with candidate node j only when
   (a) both sit at the same BFS depth from the entry node, (b) their
   in-degrees are equal, (c) the candidate's out-degree is at least the
   referent's, and (d) every referent parent of i has at least one viable
   candidate parent of j under (a)-(c).  Referent rows are filled in
   descending child-count order (entry row first, ties by ascending index);
   a row whose surviving choice is unique claims that candidate, removing it
   from later rows.  Ambiguous rows claim nothing and are left to the
   matching stage.
2. Hopcroft-Karp computes a maximum bipartite matching over the matrix; the
   embedding is structural when the matching covers every referent node.
3. Matched pairs are compared by block fingerprint, giving the x/m score
   that separates exact hits from variants.

Unreachable nodes have infinite depth and are never viable.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .cfg import Cfg
from .signature import Signature

KNOWN = "KNOWN"
VARIANT = "VARIANT"
NO_MATCH = "NO_MATCH"

_INF = -1  # sentinel depth/distance for "unreached"


@dataclass(frozen=True)
class CorrespondenceMatrix:
    m: int
    n: int
    rows: tuple[tuple[bool, ...], ...]

    def cell(self, i: int, j: int) -> bool:
        return self.rows[i][j]

    def ones(self) -> set[tuple[int, int]]:
        return {(i, j) for i in range(self.m) for j in range(self.n) if self.rows[i][j]}


@dataclass(frozen=True)
class MatchResult:
    structural: bool
    matching: dict[int, int]
    x: int
    m: int
    score: float
    verdict: str


def _graph(obj: Signature | Cfg) -> tuple[int, dict[int, tuple[int, ...]]]:
    if isinstance(obj, Signature):
        return obj.node_count, obj.adjacency
    return len(obj.blocks), obj.successors


def _fingerprints(obj: Signature | Cfg) -> tuple[str, ...]:
    return obj.fingerprints


def depth_map(graph: Signature | Cfg) -> dict[int, int]:
    """Shortest-path distance from node 0; unreachable nodes get _INF."""
    n, adj = _graph(graph)
    depth = {i: _INF for i in range(n)}
    depth[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj.get(u, ()):
            if depth[v] == _INF:
                depth[v] = depth[u] + 1
                queue.append(v)
    return depth


def _degrees(n: int, adj: dict[int, tuple[int, ...]]):
    indeg = [0] * n
    parents: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v in adj.get(u, ()):
            indeg[v] += 1
            parents[v].append(u)
    outdeg = [len(adj.get(u, ())) for u in range(n)]
    return indeg, outdeg, parents


def row_order(n: int, adj: dict[int, tuple[int, ...]]) -> list[int]:
    """Entry first, then descending child count, ties by ascending index."""
    rest = sorted((i for i in range(1, n)), key=lambda i: (-len(adj.get(i, ())), i))
    return [0] + rest


def build_correspondence(referent: Signature, candidate: Signature | Cfg) -> CorrespondenceMatrix:
    rn, radj = _graph(referent)
    cn, cadj = _graph(candidate)
    rdepth, cdepth = depth_map(referent), depth_map(candidate)
    rin, rout, rparents = _degrees(rn, radj)
    cin, cout, cparents = _degrees(cn, cadj)

    raw = [
        [
            rdepth[i] != _INF
            and rdepth[i] == cdepth[j]
            and rin[i] == cin[j]
            and cout[j] >= rout[i]
            for j in range(cn)
        ]
        for i in range(rn)
    ]

    def parents_ok(i: int, j: int) -> bool:
        return all(any(raw[p][q] for q in cparents[j]) for p in rparents[i])

    rows = [[False] * cn for _ in range(rn)]
    claimed: set[int] = set()
    for i in row_order(rn, radj):
        viable = [j for j in range(cn) if raw[i][j] and j not in claimed and parents_ok(i, j)]
        for j in viable:
            rows[i][j] = True
        if len(viable) == 1:
            claimed.add(viable[0])
    return CorrespondenceMatrix(rn, cn, tuple(tuple(r) for r in rows))


def hopcroft_karp(matrix: CorrespondenceMatrix) -> tuple[dict[int, int], int]:
    """Maximum-cardinality matching over the viability matrix, O(E*sqrt(V))."""
    m, n = matrix.m, matrix.n
    adj = [[j for j in range(n) if matrix.rows[i][j]] for i in range(m)]
    pair_l: list[int] = [_INF] * m
    pair_r: list[int] = [_INF] * n
    dist: list[int] = [0] * m

    def bfs() -> bool:
        queue = deque()
        for i in range(m):
            if pair_l[i] == _INF:
                dist[i] = 0
                queue.append(i)
            else:
                dist[i] = _INF
        found = False
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                k = pair_r[j]
                if k == _INF:
                    found = True
                elif dist[k] == _INF:
                    dist[k] = dist[i] + 1
                    queue.append(k)
        return found

    def dfs(i: int) -> bool:
        for j in adj[i]:
            k = pair_r[j]
            if k == _INF or (dist[k] == dist[i] + 1 and dfs(k)):
                pair_l[i] = j
                pair_r[j] = i
                return True
        dist[i] = _INF
        return False

    cardinality = 0
    while bfs():
        for i in range(m):
            if pair_l[i] == _INF and dfs(i):
                cardinality += 1
    matching = {i: pair_l[i] for i in range(m) if pair_l[i] != _INF}
    return matching, cardinality


def _augment(adj: list[list[int]], matching: dict[int, int]) -> dict[int, int]:
    """Grow a matching to maximum cardinality by augmenting paths (Kuhn)."""
    pair_r: dict[int, int] = {j: i for i, j in matching.items()}

    def try_augment(i: int, visited: set[int]) -> bool:
        for j in adj[i]:
            if j in visited:
                continue
            visited.add(j)
            if j not in pair_r or try_augment(pair_r[j], visited):
                pair_r[j] = i
                return True
        return False

    covered = set(matching)
    for i in range(len(adj)):
        if i not in covered and try_augment(i, set()):
            covered.add(i)
    return {i: j for j, i in pair_r.items()}


def match(referent: Signature, candidate: Signature | Cfg, threshold: float = 0.5) -> MatchResult:
    """Full comparison: structure via Hopcroft-Karp, then fingerprint score x/m.

    The reported matching is seeded with a maximum matching over
    fingerprint-equal viable pairs before being grown to full cardinality,
    so a program matched against its own signature always scores 1.
    """
    m = referent.node_count
    n = _graph(candidate)[0]
    if n < m:
        return MatchResult(False, {}, 0, m, 0.0, NO_MATCH)

    matrix = build_correspondence(referent, candidate)
    _, cardinality = hopcroft_karp(matrix)
    structural = cardinality == m

    rfp = _fingerprints(referent)
    cfp = _fingerprints(candidate)
    eq_matrix = CorrespondenceMatrix(
        matrix.m,
        matrix.n,
        tuple(
            tuple(matrix.rows[i][j] and rfp[i] == cfp[j] for j in range(n))
            for i in range(m)
        ),
    )
    seed, _ = hopcroft_karp(eq_matrix)
    adj = [[j for j in range(n) if matrix.rows[i][j]] for i in range(m)]
    matching = _augment(adj, seed)

    x = sum(1 for i, j in matching.items() if rfp[i] == cfp[j])
    score = x / m
    if structural and x == m and m == n:
        verdict = KNOWN
    elif structural and score >= threshold:
        verdict = VARIANT
    else:
        verdict = NO_MATCH
    return MatchResult(structural, matching, x, m, score, verdict)
