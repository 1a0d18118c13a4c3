"""Pure-Python graph kernels; reference twin of ``_kernels.pyx``.

Graphs arrive in CSR form: the neighbours of node ``v`` are
``adj_node[indptr[v]:indptr[v+1]]`` reached through edge ids ``adj_edge[...]``,
sorted by (neighbour, edge). Parallel edges are allowed, self-loops are not.
"""
import numpy as np


def bridge_flags(n_nodes, indptr, adj_node, adj_edge, n_edges):
    """Tarjan low-link bridge detection, iterative.

    Returns ``(is_bridge, n_components)``; the tree edge to the parent is
    skipped by edge id so parallel edges are handled.
    """
    indptr = indptr.tolist()
    adj_node = adj_node.tolist()
    adj_edge = adj_edge.tolist()
    pre = [-1] * n_nodes
    low = [0] * n_nodes
    parent_edge = [-1] * n_nodes
    nxt = indptr[:-1]
    is_bridge = np.zeros(n_edges, dtype=np.uint8)
    t = 0
    n_comp = 0
    for root in range(n_nodes):
        if pre[root] != -1:
            continue
        n_comp += 1
        pre[root] = low[root] = t
        t += 1
        stack = [root]
        while stack:
            v = stack[-1]
            k = nxt[v]
            if k < indptr[v + 1]:
                nxt[v] = k + 1
                e = adj_edge[k]
                if e == parent_edge[v]:
                    continue
                w = adj_node[k]
                if pre[w] == -1:
                    pre[w] = low[w] = t
                    t += 1
                    parent_edge[w] = e
                    stack.append(w)
                elif pre[w] < low[v]:
                    low[v] = pre[w]
            else:
                stack.pop()
                if stack:
                    u = stack[-1]
                    if low[v] < low[u]:
                        low[u] = low[v]
                    if low[v] > pre[u]:
                        is_bridge[parent_edge[v]] = 1
    return is_bridge, n_comp


def paton_cycles(n_nodes, indptr, adj_node, adj_edge, n_edges):
    """Fundamental cycles of Paton's stack-ordered spanning tree.

    Roots are taken in ascending node id, neighbours in CSR order. Each
    non-tree edge ``(z, w)`` closes the cycle ``z -e- w -> lca -> z``; the
    result is ``(cycle_ptr, cycle_edges)`` in CSR layout.
    """
    indptr = indptr.tolist()
    adj_node = adj_node.tolist()
    adj_edge = adj_edge.tolist()
    visited = [False] * n_nodes
    pred_node = [-1] * n_nodes
    pred_edge = [-1] * n_nodes
    depth = [0] * n_nodes
    edge_done = [False] * n_edges
    ptr = [0]
    out = []
    for root in range(n_nodes):
        if visited[root]:
            continue
        visited[root] = True
        stack = [root]
        while stack:
            z = stack.pop()
            for k in range(indptr[z], indptr[z + 1]):
                e = adj_edge[k]
                if edge_done[e]:
                    continue
                edge_done[e] = True
                w = adj_node[k]
                if not visited[w]:
                    visited[w] = True
                    pred_node[w] = z
                    pred_edge[w] = e
                    depth[w] = depth[z] + 1
                    stack.append(w)
                    continue
                a, b = w, z
                left, right = [], []
                while depth[a] > depth[b]:
                    left.append(pred_edge[a])
                    a = pred_node[a]
                while depth[b] > depth[a]:
                    right.append(pred_edge[b])
                    b = pred_node[b]
                while a != b:
                    left.append(pred_edge[a])
                    a = pred_node[a]
                    right.append(pred_edge[b])
                    b = pred_node[b]
                out.append(e)
                out.extend(left)
                out.extend(reversed(right))
                ptr.append(len(out))
    return np.asarray(ptr, dtype=np.int64), np.asarray(out, dtype=np.int64)
