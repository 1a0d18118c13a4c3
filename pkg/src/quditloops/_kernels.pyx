# cython: boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled graph kernels; same contracts as ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libcpp.vector cimport vector

ctypedef cnp.int64_t i64


def bridge_flags(Py_ssize_t n_nodes, const i64[::1] indptr, const i64[::1] adj_node,
                 const i64[::1] adj_edge, Py_ssize_t n_edges):
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(n_edges, dtype=np.uint8)
    cdef cnp.uint8_t[::1] is_bridge = out
    cdef vector[i64] pre = vector[i64](n_nodes, -1)
    cdef vector[i64] low = vector[i64](n_nodes, 0)
    cdef vector[i64] parent_edge = vector[i64](n_nodes, -1)
    cdef vector[i64] nxt = vector[i64](n_nodes, 0)
    cdef vector[i64] stack
    cdef i64 t = 0, n_comp = 0, v, u, w, e, k
    cdef Py_ssize_t root, i
    for i in range(n_nodes):
        nxt[i] = indptr[i]
    with nogil:
        for root in range(n_nodes):
            if pre[root] != -1:
                continue
            n_comp += 1
            pre[root] = t
            low[root] = t
            t += 1
            stack.push_back(root)
            while stack.size() > 0:
                v = stack.back()
                k = nxt[v]
                if k < indptr[v + 1]:
                    nxt[v] = k + 1
                    e = adj_edge[k]
                    if e == parent_edge[v]:
                        continue
                    w = adj_node[k]
                    if pre[w] == -1:
                        pre[w] = t
                        low[w] = t
                        t += 1
                        parent_edge[w] = e
                        stack.push_back(w)
                    elif pre[w] < low[v]:
                        low[v] = pre[w]
                else:
                    stack.pop_back()
                    if stack.size() > 0:
                        u = stack.back()
                        if low[v] < low[u]:
                            low[u] = low[v]
                        if low[v] > pre[u]:
                            is_bridge[parent_edge[v]] = 1
    return out, int(n_comp)


def paton_cycles(Py_ssize_t n_nodes, const i64[::1] indptr, const i64[::1] adj_node,
                 const i64[::1] adj_edge, Py_ssize_t n_edges):
    cdef vector[char] visited = vector[char](n_nodes, 0)
    cdef vector[i64] pred_node = vector[i64](n_nodes, -1)
    cdef vector[i64] pred_edge = vector[i64](n_nodes, -1)
    cdef vector[i64] depth = vector[i64](n_nodes, 0)
    cdef vector[char] edge_done = vector[char](n_edges, 0)
    cdef vector[i64] stack, left, right, ptr, out
    cdef i64 z, w, e, k, a, b
    cdef Py_ssize_t root, j
    ptr.push_back(0)
    with nogil:
        for root in range(n_nodes):
            if visited[root]:
                continue
            visited[root] = 1
            stack.push_back(root)
            while stack.size() > 0:
                z = stack.back()
                stack.pop_back()
                for k in range(indptr[z], indptr[z + 1]):
                    e = adj_edge[k]
                    if edge_done[e]:
                        continue
                    edge_done[e] = 1
                    w = adj_node[k]
                    if not visited[w]:
                        visited[w] = 1
                        pred_node[w] = z
                        pred_edge[w] = e
                        depth[w] = depth[z] + 1
                        stack.push_back(w)
                        continue
                    a = w
                    b = z
                    left.clear()
                    right.clear()
                    while depth[a] > depth[b]:
                        left.push_back(pred_edge[a])
                        a = pred_node[a]
                    while depth[b] > depth[a]:
                        right.push_back(pred_edge[b])
                        b = pred_node[b]
                    while a != b:
                        left.push_back(pred_edge[a])
                        a = pred_node[a]
                        right.push_back(pred_edge[b])
                        b = pred_node[b]
                    out.push_back(e)
                    for j in range(<Py_ssize_t>left.size()):
                        out.push_back(left[j])
                    for j in range(<Py_ssize_t>right.size() - 1, -1, -1):
                        out.push_back(right[j])
                    ptr.push_back(out.size())
    cdef cnp.ndarray[i64, ndim=1] ptr_arr = np.empty(ptr.size(), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] out_arr = np.empty(out.size(), dtype=np.int64)
    for j in range(<Py_ssize_t>ptr.size()):
        ptr_arr[j] = ptr[j]
    for j in range(<Py_ssize_t>out.size()):
        out_arr[j] = out[j]
    return ptr_arr, out_arr
