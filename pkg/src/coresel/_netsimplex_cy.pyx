# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Transportation network simplex, compiled backend.

Pivot-for-pivot identical to ``_netsimplex_py`` (same greedy start, block
pricing, Bland fallback and tie-breaks), so both backends return the same
tree, flows and potentials. See the pure module for the algorithm notes.
"""

from libc.math cimport INFINITY, sqrt

import numpy as np

OPTIMAL = 0
PIVOT_LIMIT = 1

EPS_SCALE = 1e-11


cdef inline void _add_child(long long[::1] first_child, long long[::1] next_sib,
                            long long[::1] prev_sib, long long par, long long x) noexcept:
    cdef long long head = first_child[par]
    next_sib[x] = head
    prev_sib[x] = -1
    if head >= 0:
        prev_sib[head] = x
    first_child[par] = x


cdef inline void _remove_child(long long[::1] first_child, long long[::1] next_sib,
                               long long[::1] prev_sib, long long par, long long x) noexcept:
    if prev_sib[x] >= 0:
        next_sib[prev_sib[x]] = next_sib[x]
    else:
        first_child[par] = next_sib[x]
    if next_sib[x] >= 0:
        prev_sib[next_sib[x]] = prev_sib[x]


cdef long long _uf_find(long long[::1] uf, long long u) noexcept:
    while uf[u] != u:
        uf[u] = uf[uf[u]]
        u = uf[u]
    return u


def solve(cost_in, a_in, b_in, max_pivots_in):
    """Mirror of ``_netsimplex_py.solve``; see that module for the contract."""
    cdef double[:, ::1] cost = np.ascontiguousarray(cost_in, dtype=np.float64)
    cdef long long[::1] a = np.ascontiguousarray(a_in, dtype=np.int64)
    cdef long long[::1] b = np.ascontiguousarray(b_in, dtype=np.int64)
    cdef long long max_pivots = max_pivots_in

    cdef long long r_count = cost.shape[0]
    cdef long long c_count = cost.shape[1]
    cdef long long n_nodes = r_count + c_count
    cdef long long n_arcs = r_count * c_count

    parent_np = np.full(n_nodes, -1, dtype=np.int64)
    parent_arc_np = np.full(n_nodes, -1, dtype=np.int64)
    flow_np = np.zeros(n_nodes, dtype=np.int64)
    pi_np = np.zeros(n_nodes, dtype=np.float64)
    cdef long long[::1] parent = parent_np
    cdef long long[::1] parent_arc = parent_arc_np
    cdef long long[::1] flow = flow_np
    cdef double[::1] pi = pi_np
    cdef long long[::1] depth = np.zeros(n_nodes, dtype=np.int64)
    cdef long long[::1] first_child = np.full(n_nodes, -1, dtype=np.int64)
    cdef long long[::1] next_sib = np.full(n_nodes, -1, dtype=np.int64)
    cdef long long[::1] prev_sib = np.full(n_nodes, -1, dtype=np.int64)
    cdef long long[::1] stack = np.zeros(n_nodes, dtype=np.int64)

    cdef double cmax = 0.0
    cdef long long i, j
    for i in range(r_count):
        for j in range(c_count):
            if cost[i, j] > cmax:
                cmax = cost[i, j]
    cdef double eps = EPS_SCALE * (1.0 + cmax)

    _init_greedy(cost, a, b, parent, parent_arc, flow, depth, pi,
                 first_child, next_sib, prev_sib, stack)

    # Wide pricing blocks keep the pivot count near the Dantzig floor, which
    # is what the 50*(N+B) pivot budget is calibrated against.
    cdef long long block = 16 * (<long long>(sqrt(<double>n_arcs)) + 1)
    if block < 64:
        block = 64
    cdef long long scan_from = 0
    cdef bint bland = False
    cdef long long bland_after = 2 * n_nodes + 64
    cdef long long degen_streak = 0
    cdef long long pivots = 0
    cdef long long entering
    cdef bint degenerate

    while True:
        entering = _find_entering(cost, pi, r_count, c_count, n_arcs,
                                  block, &scan_from, eps, bland)
        if entering < 0:
            return OPTIMAL, pivots, parent_np, parent_arc_np, flow_np, pi_np
        if pivots >= max_pivots:
            return PIVOT_LIMIT, pivots, parent_np, parent_arc_np, flow_np, pi_np
        pivots += 1
        degenerate = _pivot(entering, cost, parent, parent_arc, flow, depth, pi,
                            first_child, next_sib, prev_sib, stack, r_count, c_count)
        if degenerate:
            degen_streak += 1
            if degen_streak > bland_after:
                bland = True
        else:
            degen_streak = 0


cdef void _init_greedy(double[:, ::1] cost, long long[::1] a, long long[::1] b,
                       long long[::1] parent, long long[::1] parent_arc,
                       long long[::1] flow, long long[::1] depth, double[::1] pi,
                       long long[::1] first_child, long long[::1] next_sib,
                       long long[::1] prev_sib, long long[::1] stack) noexcept:
    cdef long long r_count = cost.shape[0]
    cdef long long c_count = cost.shape[1]
    cdef long long n_nodes = r_count + c_count
    cdef long long[::1] rem_b = np.array(b, dtype=np.int64, copy=True)
    cdef long long[::1] uf = np.arange(n_nodes, dtype=np.int64)

    # Edge store: at most r_count + 2*c_count candidate edges.
    cdef long long cap = r_count + 2 * c_count
    cdef long long[::1] e_row = np.zeros(cap, dtype=np.int64)
    cdef long long[::1] e_col = np.zeros(cap, dtype=np.int64)
    cdef long long[::1] e_flow = np.zeros(cap, dtype=np.int64)
    cdef long long n_edges = 0

    cdef long long i, j, f, rem, i_star, u, v, arc, head
    cdef double best
    for i in range(r_count):
        rem = a[i]
        while rem > 0:
            best = INFINITY
            j = -1
            for v in range(c_count):
                if rem_b[v] > 0 and cost[i, v] < best:
                    best = cost[i, v]
                    j = v
            f = rem if rem < rem_b[j] else rem_b[j]
            e_row[n_edges] = i
            e_col[n_edges] = j
            e_flow[n_edges] = f
            n_edges += 1
            u = _uf_find(uf, i)
            v = _uf_find(uf, r_count + j)
            if u != v:
                uf[v] = u
            rem -= f
            rem_b[j] -= f

    for j in range(c_count):
        if b[j] == 0:
            continue
        if _uf_find(uf, r_count + j) == _uf_find(uf, 0):
            continue
        best = INFINITY
        i_star = 0
        for i in range(r_count):
            if cost[i, j] < best:
                best = cost[i, j]
                i_star = i
        u = _uf_find(uf, i_star)
        v = _uf_find(uf, r_count + j)
        if u != v:
            uf[v] = u
            e_row[n_edges] = i_star
            e_col[n_edges] = j
            e_flow[n_edges] = 0
            n_edges += 1
    for j in range(c_count):
        if b[j] == 0:
            continue
        u = _uf_find(uf, 0)
        v = _uf_find(uf, r_count + j)
        if u != v:
            uf[v] = u
            e_row[n_edges] = 0
            e_col[n_edges] = j
            e_flow[n_edges] = 0
            n_edges += 1

    # Adjacency over the n_nodes-1 tree edges (each occurs at both ends).
    cdef long long[::1] adj_head = np.full(n_nodes, -1, dtype=np.int64)
    cdef long long[::1] adj_next = np.zeros(2 * n_edges, dtype=np.int64)
    cdef long long[::1] adj_node = np.zeros(2 * n_edges, dtype=np.int64)
    cdef long long[::1] adj_edge = np.zeros(2 * n_edges, dtype=np.int64)
    cdef long long k, slot
    for k in range(n_edges):
        u = e_row[k]
        v = r_count + e_col[k]
        slot = 2 * k
        adj_node[slot] = v
        adj_edge[slot] = k
        adj_next[slot] = adj_head[u]
        adj_head[u] = slot
        slot = 2 * k + 1
        adj_node[slot] = u
        adj_edge[slot] = k
        adj_next[slot] = adj_head[v]
        adj_head[v] = slot

    parent[0] = -1
    pi[0] = 0.0
    cdef long long[::1] seen = np.zeros(n_nodes, dtype=np.int64)
    seen[0] = 1
    cdef long long top = 0
    stack[0] = 0
    cdef double c
    while top >= 0:
        u = stack[top]
        top -= 1
        slot = adj_head[u]
        while slot >= 0:
            v = adj_node[slot]
            k = adj_edge[slot]
            slot = adj_next[slot]
            if seen[v]:
                continue
            seen[v] = 1
            arc = e_row[k] * c_count + e_col[k]
            parent[v] = u
            parent_arc[v] = arc
            flow[v] = e_flow[k]
            depth[v] = depth[u] + 1
            c = cost[e_row[k], e_col[k]]
            if v >= r_count:
                pi[v] = pi[u] + c
            else:
                pi[v] = pi[u] - c
            _add_child(first_child, next_sib, prev_sib, u, v)
            top += 1
            stack[top] = v

    # Zero-demand columns become leaves on their dual-tightest row.
    for j in range(c_count):
        if b[j] != 0:
            continue
        best = INFINITY
        i_star = 0
        for i in range(r_count):
            c = cost[i, j] + pi[i]
            if c < best:
                best = c
                i_star = i
        v = r_count + j
        parent[v] = i_star
        parent_arc[v] = i_star * c_count + j
        flow[v] = 0
        depth[v] = depth[i_star] + 1
        pi[v] = best
        _add_child(first_child, next_sib, prev_sib, i_star, v)


cdef long long _find_entering(double[:, ::1] cost, double[::1] pi,
                              long long r_count, long long c_count, long long n_arcs,
                              long long block, long long* scan_from, double eps,
                              bint bland) noexcept:
    cdef long long arc, i, j, scanned, best_arc
    cdef double red, best
    if bland:
        for arc in range(n_arcs):
            i = arc // c_count
            j = arc - i * c_count
            red = cost[i, j] + pi[i] - pi[r_count + j]
            if red < -eps:
                return arc
        return -1
    scanned = 0
    arc = scan_from[0]
    best = -eps
    best_arc = -1
    cdef long long in_block = 0
    while scanned < n_arcs:
        i = arc // c_count
        j = arc - i * c_count
        red = cost[i, j] + pi[i] - pi[r_count + j]
        if red < best:
            best = red
            best_arc = arc
        scanned += 1
        in_block += 1
        arc += 1
        if arc == n_arcs:
            arc = 0
        if in_block == block:
            if best_arc >= 0:
                scan_from[0] = (best_arc + 1) % n_arcs
                return best_arc
            in_block = 0
    if best_arc >= 0:
        scan_from[0] = (best_arc + 1) % n_arcs
        return best_arc
    return -1


cdef bint _pivot(long long entering, double[:, ::1] cost,
                 long long[::1] parent, long long[::1] parent_arc, long long[::1] flow,
                 long long[::1] depth, double[::1] pi,
                 long long[::1] first_child, long long[::1] next_sib, long long[::1] prev_sib,
                 long long[::1] stack, long long r_count, long long c_count) noexcept:
    cdef long long p = entering // c_count
    cdef long long q = r_count + (entering - p * c_count)

    # Ratio-test ties follow the strongly-feasible-tree rule; see the pure
    # backend for the rationale.
    cdef long long theta = -1
    cdef long long leave_node = -1
    cdef bint leave_on_p_side = False
    cdef long long x = p
    cdef long long y = q
    cdef long long fx
    while x != y:
        if depth[x] >= depth[y]:
            if x < r_count:
                fx = flow[x]
                if theta < 0 or fx < theta:
                    theta = fx
                    leave_node = x
                    leave_on_p_side = True
            x = parent[x]
        else:
            if y >= r_count:
                fx = flow[y]
                if theta < 0 or fx <= theta:
                    theta = fx
                    leave_node = y
                    leave_on_p_side = False
            y = parent[y]

    if theta > 0:
        x = p
        y = q
        while x != y:
            if depth[x] >= depth[y]:
                if x >= r_count:
                    flow[x] += theta
                else:
                    flow[x] -= theta
                x = parent[x]
            else:
                if y < r_count:
                    flow[y] += theta
                else:
                    flow[y] -= theta
                y = parent[y]

    cdef long long sub_root = p if leave_on_p_side else q
    cdef long long attach = q if leave_on_p_side else p
    cdef double red = cost[p, entering - p * c_count] + pi[p] - pi[q]
    cdef double delta = -red if leave_on_p_side else red

    cdef long long node = sub_root
    cdef long long prev_parent = parent[node]
    cdef long long prev_arc = parent_arc[node]
    cdef long long prev_flow = flow[node]
    cdef long long nxt, np_parent, np_arc, np_flow
    _remove_child(first_child, next_sib, prev_sib, prev_parent, sub_root)
    parent[sub_root] = attach
    parent_arc[sub_root] = entering
    flow[sub_root] = theta
    _add_child(first_child, next_sib, prev_sib, attach, sub_root)
    while node != leave_node:
        nxt = prev_parent
        np_parent = parent[nxt]
        np_arc = parent_arc[nxt]
        np_flow = flow[nxt]
        _remove_child(first_child, next_sib, prev_sib, np_parent, nxt)
        parent[nxt] = node
        parent_arc[nxt] = prev_arc
        flow[nxt] = prev_flow
        _add_child(first_child, next_sib, prev_sib, node, nxt)
        prev_parent = np_parent
        prev_arc = np_arc
        prev_flow = np_flow
        node = nxt

    cdef long long top = 0
    cdef long long u, child
    stack[0] = sub_root
    while top >= 0:
        u = stack[top]
        top -= 1
        depth[u] = depth[parent[u]] + 1
        pi[u] += delta
        child = first_child[u]
        while child >= 0:
            top += 1
            stack[top] = child
            child = next_sib[child]

    return theta == 0
