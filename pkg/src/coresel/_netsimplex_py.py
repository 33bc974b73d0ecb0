"""Transportation network simplex, pure Python + numpy backend.

Solves  min <cost, X>  s.t.  X @ 1 = a,  X.T @ 1 = b,  X >= 0  for integer
supplies/demands (callers scale probability masses to a common integer
denominator, which keeps every marginal exact and makes degeneracy tests
exact as well).

The basis is a spanning tree over R supply nodes and C demand nodes, seeded
by a row-greedy allocation (each row ships to its cheapest open column;
zero-flow arcs patch the remaining forest into a tree, so no artificial arcs
or big-M costs are ever introduced). Pricing scans arcs in blocks of
~sqrt(R*C) and takes the most negative reduced cost in the block; after a
long run of degenerate pivots it falls back to Bland's rule, which cannot
cycle. Ties in the leaving-arc ratio test go to the lowest arc index so runs
are reproducible.

The compiled backend in ``_netsimplex_cy`` implements the identical pivot
rules; both produce the same tree, flows and potentials.
"""

import math

import numpy as np

OPTIMAL = 0
PIVOT_LIMIT = 1

# Entering tolerance: reduced costs above -EPS_SCALE*(1+max|cost|) do not
# enter. Potentials are exact path sums of costs, so the noise floor is well
# below this at any supported size.
EPS_SCALE = 1e-11


def solve(cost, a, b, max_pivots):
    """Run the network simplex; returns tree arrays, potentials and status.

    cost : (R, C) float64, C-contiguous
    a    : (R,) int64, all > 0
    b    : (C,) int64, all >= 0, sum(b) == sum(a)

    Returns (status, n_pivots, parent, parent_arc, flow, pi) where the four
    arrays have length R + C (node order: rows then columns), parent_arc[x]
    is the dense arc id i*C + j of the edge from x to parent[x], flow[x] is
    the integer flow carried on that edge, and pi holds the simplex node
    potentials (pi[root] = 0).
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    r_count, c_count = cost.shape
    n_nodes = r_count + c_count
    n_arcs = r_count * c_count
    cflat = cost.ravel()
    eps = EPS_SCALE * (1.0 + float(np.max(cflat, initial=0.0)))

    parent = np.full(n_nodes, -1, dtype=np.int64)
    parent_arc = np.full(n_nodes, -1, dtype=np.int64)
    flow = np.zeros(n_nodes, dtype=np.int64)
    depth = np.zeros(n_nodes, dtype=np.int64)
    pi = np.zeros(n_nodes, dtype=np.float64)
    children = [[] for _ in range(n_nodes)]

    _init_greedy(cost, a, b, parent, parent_arc, flow, depth, pi, children)

    # Wide pricing blocks keep the pivot count near the Dantzig floor, which
    # is what the 50*(N+B) pivot budget is calibrated against.
    block = max(64, 16 * (int(math.isqrt(n_arcs)) + 1))
    scan_from = 0
    bland = False
    bland_after = 2 * n_nodes + 64
    degen_streak = 0
    pivots = 0

    while True:
        entering, scan_from = _find_entering(
            cflat, pi, r_count, c_count, n_arcs, block, scan_from, eps, bland
        )
        if entering < 0:
            return OPTIMAL, pivots, parent, parent_arc, flow, pi
        if pivots >= max_pivots:
            return PIVOT_LIMIT, pivots, parent, parent_arc, flow, pi
        pivots += 1
        degenerate = _pivot(
            entering, cflat, parent, parent_arc, flow, depth, pi, children, r_count, c_count
        )
        if degenerate:
            degen_streak += 1
            if degen_streak > bland_after:
                bland = True
        else:
            degen_streak = 0


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, u):
        p = self.parent
        while p[u] != u:
            p[u] = p[p[u]]
            u = p[u]
        return u

    def union(self, u, v):
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[rv] = ru
        return True


def _init_greedy(cost, a, b, parent, parent_arc, flow, depth, pi, children):
    """Row-greedy starting basis, patched into a spanning tree.

    Every row ships its supply to the cheapest columns that still have open
    demand; each allocation closes a row or a column, so the support is a
    forest. Zero-flow arcs then connect the components (positive columns
    first to their cheapest row, anything left to row 0). Zero-demand
    columns are attached last as leaves on argmin_i(cost + pi_i), which
    makes every arc into them dual-feasible from the start.
    """
    r_count, c_count = cost.shape
    rem_b = b.astype(np.int64, copy=True)
    open_cost = np.empty(c_count, dtype=np.float64)
    uf = _UnionFind(r_count + c_count)
    edges = []  # (row, col, integer flow)
    for i in range(r_count):
        rem = int(a[i])
        row_cost = cost[i]
        while rem > 0:
            np.copyto(open_cost, row_cost)
            open_cost[rem_b == 0] = np.inf
            j = int(np.argmin(open_cost))
            f = min(rem, int(rem_b[j]))
            edges.append((i, j, f))
            uf.union(i, r_count + j)
            rem -= f
            rem_b[j] -= f

    positive = np.flatnonzero(b > 0)
    for j in positive:
        j = int(j)
        if uf.find(r_count + j) == uf.find(0):
            continue
        i_star = int(np.argmin(cost[:, j]))
        if uf.union(i_star, r_count + j):
            edges.append((i_star, j, 0))
    for j in positive:
        j = int(j)
        if uf.union(0, r_count + j):
            edges.append((0, j, 0))

    adj = [[] for _ in range(r_count + c_count)]
    for i, j, f in edges:
        arc = i * c_count + j
        adj[i].append((r_count + j, arc, f))
        adj[r_count + j].append((i, arc, f))

    # Root the tree at node 0 (row 0) and derive potentials along the way.
    parent[0] = -1
    pi[0] = 0.0
    stack = [0]
    seen = np.zeros(r_count + c_count, dtype=bool)
    seen[0] = True
    while stack:
        u = stack.pop()
        for v, arc, f in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            parent[v] = u
            parent_arc[v] = arc
            flow[v] = f
            depth[v] = depth[u] + 1
            c = cost[arc // c_count, arc % c_count]
            pi[v] = pi[u] + c if v >= r_count else pi[u] - c
            children[u].append(v)
            stack.append(v)

    if positive.size < c_count:
        pi_rows = pi[:r_count]
        for j in np.flatnonzero(b == 0):
            j = int(j)
            attach_cost = cost[:, j] + pi_rows
            i_star = int(np.argmin(attach_cost))
            node = r_count + j
            parent[node] = i_star
            parent_arc[node] = i_star * c_count + j
            flow[node] = 0
            depth[node] = depth[i_star] + 1
            pi[node] = attach_cost[i_star]
            children[i_star].append(node)


def _find_entering(cflat, pi, r_count, c_count, n_arcs, block, scan_from, eps, bland):
    """Pick the entering arc, or -1 when no reduced cost is below -eps."""
    pi_rows = pi[:r_count]
    pi_cols = pi[r_count:]
    if bland:
        for start in range(0, n_arcs, block):
            idx = np.arange(start, min(start + block, n_arcs))
            i = idx // c_count
            j = idx - i * c_count
            red = cflat[idx] + pi_rows[i] - pi_cols[j]
            hits = np.flatnonzero(red < -eps)
            if hits.size:
                return int(idx[hits[0]]), scan_from
        return -1, scan_from
    scanned = 0
    start = scan_from
    while scanned < n_arcs:
        take = min(block, n_arcs - scanned)
        idx = np.arange(start, start + take) % n_arcs
        i = idx // c_count
        j = idx - i * c_count
        red = cflat[idx] + pi_rows[i] - pi_cols[j]
        k = int(np.argmin(red))
        if red[k] < -eps:
            arc = int(idx[k])
            return arc, (arc + 1) % n_arcs
        scanned += take
        start = (start + take) % n_arcs
    return -1, scan_from


def _pivot(entering, cflat, parent, parent_arc, flow, depth, pi, children, r_count, c_count):
    """Push flow around the cycle closed by the entering arc; rehang the tree."""
    p = entering // c_count            # row endpoint (tail)
    q = r_count + (entering - p * c_count)  # column endpoint (head)

    # Walk both endpoints to the common ancestor. A step x -> parent(x) on
    # the q-leg pushes with the arc when x is a row node; on the p-leg the
    # traversal is reversed, so the signs flip.
    #
    # Ties in the ratio test follow the strongly-feasible-tree rule: take
    # the last blocking arc along the cycle orientation from the apex, i.e.
    # a q-leg candidate displaces any tie and p-leg candidates only win
    # strictly. This keeps degenerate runs short, which the pivot budget
    # depends on; the tree starts strongly feasible (zero-flow arcs always
    # have the column as the child) and this rule preserves that.
    theta = None
    leave_node = -1
    leave_on_p_side = False
    x, y = p, q
    while x != y:
        if depth[x] >= depth[y]:
            if x < r_count:  # row step on p-leg: flow decreases
                fx = flow[x]
                if theta is None or fx < theta:
                    theta, leave_node, leave_on_p_side = fx, x, True
            x = parent[x]
        else:
            if y >= r_count:  # column step on q-leg: flow decreases
                fy = flow[y]
                if theta is None or fy <= theta:
                    theta, leave_node, leave_on_p_side = fy, y, False
            y = parent[y]

    # A transportation cycle always contains a decreasing edge.
    assert theta is not None

    if theta > 0:
        x, y = p, q
        while x != y:
            if depth[x] >= depth[y]:
                flow[x] += theta if x >= r_count else -theta
                x = parent[x]
            else:
                flow[y] += theta if y < r_count else -theta
                y = parent[y]

    # Reverse the parent chain from the entering endpoint inside the cut
    # subtree up to the leaving edge, then attach it to the other endpoint.
    sub_root = p if leave_on_p_side else q
    attach = q if leave_on_p_side else p
    red = cflat[entering] + pi[p] - pi[q]
    delta = -red if leave_on_p_side else red

    node = sub_root
    prev_parent = parent[node]
    prev_arc = parent_arc[node]
    prev_flow = flow[node]
    children[prev_parent].remove(sub_root)
    parent[sub_root] = attach
    parent_arc[sub_root] = entering
    flow[sub_root] = theta
    children[attach].append(sub_root)
    while node != leave_node:
        nxt = prev_parent
        np_parent, np_arc, np_flow = parent[nxt], parent_arc[nxt], flow[nxt]
        children[np_parent].remove(nxt)
        parent[nxt] = node
        parent_arc[nxt] = prev_arc
        flow[nxt] = prev_flow
        children[node].append(nxt)
        prev_parent, prev_arc, prev_flow = np_parent, np_arc, np_flow
        node = nxt

    # Refresh depth and shift potentials across the rehung subtree.
    stack = [sub_root]
    while stack:
        u = stack.pop()
        depth[u] = depth[parent[u]] + 1
        pi[u] += delta
        stack.extend(children[u])

    return theta == 0
