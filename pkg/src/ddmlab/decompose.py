"""Overlapping decompositions of a matrix graph or structured grid.

A Partition holds disjoint core sets covering all DoFs. expand_overlap grows
each core by adjacency layers of the (symmetrized) matrix graph and returns
a Decomposition carrying restriction index sets, partition-of-unity weights,
multiplicities, subdomain geometry statistics, the subdomain adjacency
graph, and a greedy coloring. Decompositions are treated as immutable; the
partition-of-unity builders return updated copies.
"""

import json

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Partition",
    "Decomposition",
    "cartesian_partition",
    "greedy_graph_partition",
    "expand_overlap",
    "multiplicity_pu",
    "boolean_pu",
    "decomposition_to_json",
]


class Partition:
    """Disjoint core DoF sets, one per subdomain."""

    def __init__(self, sets, source):
        self.sets = [np.unique(np.asarray(s, dtype=int)) for s in sets]
        self.source = source
        if any(len(s) == 0 for s in self.sets):
            raise ValueError("empty subdomain in partition")
        total = np.concatenate(self.sets)
        if len(np.unique(total)) != len(total):
            raise ValueError("partition sets must be pairwise disjoint")

    @property
    def N(self):
        return len(self.sets)


class Decomposition:
    """Overlapped subdomain sets with restrictions, PU weights, and stats.

    ``sets[i]`` holds the ascending global indices of subdomain i; the
    restriction R_i is plain index selection and ``weights[i]`` is the
    diagonal of D_i on those local DoFs.
    """

    def __init__(self, n_dofs, core_sets, sets, weights, multiplicity, delta,
                 adjacency, colors, n_colors, H, overlap_width, pu_kind):
        self.n_dofs = n_dofs
        self.core_sets = core_sets
        self.sets = sets
        self.weights = weights
        self.multiplicity = multiplicity
        self.delta = delta
        self.adjacency = adjacency
        self.colors = colors
        self.n_colors = n_colors
        self.H = H
        self.overlap_width = overlap_width
        self.pu_kind = pu_kind

    @property
    def N(self):
        return len(self.sets)

    @property
    def max_multiplicity(self):
        return int(self.multiplicity.max())

    def restrict(self, i, x):
        return x[self.sets[i]]

    def prolong(self, i, x_local):
        out = np.zeros(self.n_dofs, dtype=np.asarray(x_local).dtype)
        out[self.sets[i]] = x_local
        return out

    def _with_weights(self, weights, pu_kind):
        return Decomposition(
            self.n_dofs, self.core_sets, self.sets, weights, self.multiplicity,
            self.delta, self.adjacency, self.colors, self.n_colors, self.H,
            self.overlap_width, pu_kind,
        )


def _axis_blocks(n, p):
    if p > n:
        raise ValueError(f"cannot split {n} points into {p} parts")
    q, r = divmod(n, p)
    sizes = [q + 1] * r + [q] * (p - r)  # remainder spread from the left
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    return [np.arange(bounds[b], bounds[b + 1]) for b in range(p)]


def cartesian_partition(grid, p_x, p_y=None):
    """Contiguous block partition of a 1D range or structured 2D grid.

    Parameters
    ----------
    grid : int or StructuredGrid
        Either the number of 1D DoFs or a 2D grid whose interior nodes are
        indexed lexicographically.
    p_x, p_y : int
        Subdomain counts per axis; 1D uses p_x only.
    """
    if isinstance(grid, (int, np.integer)):
        return Partition(_axis_blocks(int(grid), p_x), source="cartesian")
    if grid.dim == 1:
        return Partition(_axis_blocks(grid.nx, p_x), source="cartesian")
    if p_y is None:
        raise ValueError("2D grids need p_x and p_y")
    xblocks = _axis_blocks(grid.nx, p_x)
    yblocks = _axis_blocks(grid.ny, p_y)
    sets = []
    for by in range(p_y):
        for bx in range(p_x):
            ix, iy = np.meshgrid(xblocks[bx], yblocks[by], indexing="xy")
            sets.append(np.sort(ix.ravel() + grid.nx * iy.ravel()))
    return Partition(sets, source="cartesian")


def _symmetric_adjacency(A):
    P = sp.csr_array(abs(A) + abs(A).T)
    P.setdiag(0)
    P.eliminate_zeros()
    return P


def _bfs_distances(adj, sources, n):
    dist = np.full(n, -1, dtype=int)
    frontier = list(sources)
    for s in frontier:
        dist[s] = 0
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]]:
                if dist[v] < 0:
                    dist[v] = d
                    nxt.append(int(v))
        frontier = nxt
    return dist


def greedy_graph_partition(A, N, seed=0):
    """Balanced breadth-first region growing on the matrix graph.

    Seeds are picked farthest-first starting from a node drawn with ``seed``;
    regions then claim one node per round in FIFO breadth-first order (an
    exhausted frontier falls back to the lowest unclaimed index). A repair
    pass reattaches any region fragment disconnected from its seed, and a
    rebalance pass moves boundary nodes from the largest region to an
    adjacent smaller one until sizes are within one of each other.
    Deterministic for a given seed.
    """
    n = A.shape[0]
    if N > n:
        raise ValueError(f"cannot grow {N} regions on {n} DoFs")
    adj = _symmetric_adjacency(A)
    rng = np.random.default_rng(seed)

    seeds = [int(rng.integers(n))]
    while len(seeds) < N:
        dist = _bfs_distances(adj, seeds, n)
        dist[dist < 0] = n + 1  # disconnected nodes are farthest
        nxt = int(np.argmax(dist))  # lowest index wins ties
        seeds.append(nxt)

    owner = np.full(n, -1, dtype=int)
    queues = []
    for r, s in enumerate(seeds):
        owner[s] = r
        queues.append([s])
    unclaimed = n - N
    heads = [0] * N
    while unclaimed > 0:
        for r in range(N):
            if unclaimed == 0:
                break
            claimed = False
            q = queues[r]
            while heads[r] < len(q):
                u = q[heads[r]]
                for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]]:
                    if owner[v] < 0:
                        owner[v] = r
                        q.append(int(v))
                        claimed = True
                        break
                if claimed:
                    break
                heads[r] += 1
            if not claimed:
                v = int(np.argmin(owner))  # lowest-index unclaimed node
                owner[v] = r
                q.append(v)
            unclaimed -= 1

    def repair():
        moved = True
        rounds = 0
        while moved and rounds < n:
            moved = False
            rounds += 1
            for r in range(N):
                members = np.flatnonzero(owner == r)
                if len(members) == 0:
                    continue
                inside = set(members.tolist())
                reach = {seeds[r]} if owner[seeds[r]] == r else set()
                stack = list(reach)
                while stack:
                    u = stack.pop()
                    for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]]:
                        v = int(v)
                        if v in inside and v not in reach:
                            reach.add(v)
                            stack.append(v)
                for u in sorted(inside - reach):
                    targets = {
                        int(owner[v])
                        for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]]
                        if owner[v] != r
                    }
                    if targets:
                        owner[u] = min(targets)
                        moved = True

    def region_neighbors(r):
        out = set()
        for u in np.flatnonzero(owner == r):
            for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]]:
                if owner[v] != r:
                    out.add(int(owner[v]))
        return sorted(out)

    def shift_one(src, dst):
        # move one src node adjacent to dst, preferring one whose removal
        # keeps src connected
        cands = [
            int(u)
            for u in np.flatnonzero(owner == src)
            if any(owner[v] == dst for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]])
        ]
        for u in cands:
            rest = set(np.flatnonzero(owner == src).tolist()) - {u}
            if not rest:
                break
            start = next(iter(sorted(rest)))
            reach = {start}
            stack = [start]
            while stack:
                w = stack.pop()
                for v in adj.indices[adj.indptr[w]:adj.indptr[w + 1]]:
                    v = int(v)
                    if v in rest and v not in reach:
                        reach.add(v)
                        stack.append(v)
            if reach == rest:
                owner[u] = dst
                return True
        if cands:
            owner[cands[0]] = dst
            return True
        return False

    def rebalance():
        # route single nodes along region-adjacency chains from the nearest
        # oversized region into the smallest one
        for _ in range(n * N):
            sizes = np.bincount(owner, minlength=N)
            if sizes.max() - sizes.min() <= 1:
                return
            small = int(np.argmin(sizes))
            parent = {small: None}
            frontier = [small]
            target = None
            while frontier and target is None:
                nxt = []
                for r in frontier:
                    for q in region_neighbors(r):
                        if q not in parent:
                            parent[q] = r
                            if sizes[q] >= sizes[small] + 2:
                                target = q
                                break
                            nxt.append(q)
                    if target is not None:
                        break
                frontier = nxt
            if target is None:
                return
            r = target
            while parent[r] is not None:
                if not shift_one(r, parent[r]):
                    return
                r = parent[r]

    repair()
    rebalance()
    sets = [np.flatnonzero(owner == r) for r in range(N)]
    return Partition(sets, source="greedy_graph")


def expand_overlap(A, partition, delta, coords=None, h=None):
    """Grow each core set by ``delta`` adjacency layers and build the decomposition.

    Each layer adds every DoF structurally connected to the current set.
    The returned Decomposition carries multiplicity partition-of-unity
    weights by default; use :func:`boolean_pu` to switch.

    Parameters
    ----------
    A : sparse matrix
    partition : Partition
    delta : int
        Number of overlap layers (per side).
    coords : ndarray or None
        DoF coordinates; enables the bounding-box diameter statistic H_j.
    h : float or None
        Mesh unit; the overlap width statistic is delta * h.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    n = A.shape[0]
    total = np.concatenate(partition.sets)
    if len(total) != n or len(np.unique(total)) != n:
        raise ValueError("partition must cover all DoFs disjointly")
    adj = _symmetric_adjacency(A)

    sets = []
    for core in partition.sets:
        mask = np.zeros(n, dtype=bool)
        mask[core] = True
        for _ in range(delta):
            current = np.flatnonzero(mask)
            nbrs = np.unique(
                np.concatenate(
                    [adj.indices[adj.indptr[u]:adj.indptr[u + 1]] for u in current]
                )
            ) if len(current) else np.empty(0, dtype=int)
            mask[nbrs] = True
        sets.append(np.flatnonzero(mask))

    multiplicity = np.zeros(n, dtype=int)
    for s in sets:
        multiplicity[s] += 1

    # subdomain adjacency: edge iff R_l A R_k^T is structurally nonzero,
    # i.e. the sets share a DoF or an A-edge connects them
    owners = [[] for _ in range(n)]
    for i, s in enumerate(sets):
        for u in s:
            owners[u].append(i)
    adjacency = [set() for _ in range(partition.N)]
    for u in range(n):
        for a in owners[u]:
            for b in owners[u]:
                if a != b:
                    adjacency[a].add(b)
        for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]]:
            for a in owners[u]:
                for b in owners[int(v)]:
                    if a != b:
                        adjacency[a].add(b)
    adjacency = [sorted(s) for s in adjacency]

    # greedy first-fit coloring, ascending (degree, index) order
    order = sorted(range(partition.N), key=lambda i: (len(adjacency[i]), i))
    colors = np.full(partition.N, -1, dtype=int)
    for i in order:
        used = {colors[j] for j in adjacency[i] if colors[j] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[i] = c
    n_colors = int(colors.max()) + 1

    if coords is not None:
        coords = np.asarray(coords)
        H = np.array(
            [np.linalg.norm(coords[s].max(axis=0) - coords[s].min(axis=0)) for s in sets]
        )
    else:
        H = np.full(partition.N, np.nan)
    overlap_width = delta * h if h is not None else np.nan

    weights = [1.0 / multiplicity[s] for s in sets]
    return Decomposition(
        n, partition.sets, sets, weights, multiplicity, delta,
        adjacency, colors, n_colors, H, overlap_width, pu_kind="multiplicity",
    )


def multiplicity_pu(dec):
    """Partition of unity with weights 1/m_j, m_j the DoF multiplicity."""
    weights = [1.0 / dec.multiplicity[s] for s in dec.sets]
    return dec._with_weights(weights, "multiplicity")


def boolean_pu(dec):
    """Partition of unity assigning each DoF to the lowest-index subdomain holding it."""
    claimed = np.zeros(dec.n_dofs, dtype=bool)
    weights = []
    for s in dec.sets:  # ascending subdomain index: lowest owner wins
        w = np.where(claimed[s], 0.0, 1.0)
        claimed[s] = True
        weights.append(w)
    return dec._with_weights(weights, "boolean")


def decomposition_to_json(dec):
    """Serialize the decomposition's index data for debugging."""
    return json.dumps(
        {
            "N": dec.N,
            "n_dofs": dec.n_dofs,
            "delta": dec.delta,
            "pu": dec.pu_kind,
            "sets": [s.tolist() for s in dec.sets],
            "weights": [w.tolist() for w in dec.weights],
            "multiplicity": dec.multiplicity.tolist(),
            "adjacency": dec.adjacency,
            "colors": dec.colors.tolist(),
            "n_colors": dec.n_colors,
        },
        indent=2,
    )
