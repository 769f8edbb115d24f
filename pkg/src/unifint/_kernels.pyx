# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled congruence kernels; see _pykernels for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"


cdef inline int _find(int* parent, int a) noexcept nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


cdef inline bint _union(int* parent, int u, int v) noexcept nogil:
    cdef int ru = _find(parent, u)
    cdef int rv = _find(parent, v)
    if ru == rv:
        return False
    if ru < rv:
        parent[rv] = ru
    else:
        parent[ru] = rv
    return True


cdef void _close(const int[:, ::1] trans, int* parent, int* queue, int top) noexcept nogil:
    # at most n - 1 successful unions, so the stack never exceeds 2 * n ints
    cdef int R = trans.shape[1]
    cdef int a, b, r, u, v
    while top > 0:
        top -= 2
        a = queue[top]
        b = queue[top + 1]
        for r in range(R):
            u = trans[a, r]
            v = trans[b, r]
            if _union(parent, u, v):
                queue[top] = u
                queue[top + 1] = v
                top += 2


def cg_close(const int[:, ::1] trans, const int[::1] rep, const int[:, ::1] seeds):
    cdef int n = trans.shape[0]
    cdef int m = seeds.shape[0]
    cdef int i, a, top = 0
    out = np.empty(n, dtype=np.int32)
    cdef int[::1] o = out
    cdef int* parent = <int*> malloc(n * sizeof(int))
    cdef int* queue = <int*> malloc((2 * n + 2) * sizeof(int))
    if parent == NULL or queue == NULL:
        free(parent)
        free(queue)
        raise MemoryError()
    with nogil:
        for i in range(n):
            parent[i] = rep[i]
        for i in range(m):
            if _union(parent, seeds[i, 0], seeds[i, 1]):
                queue[top] = seeds[i, 0]
                queue[top + 1] = seeds[i, 1]
                top += 2
        _close(trans, parent, queue, top)
        for a in range(n):
            o[a] = _find(parent, a)
    free(parent)
    free(queue)
    return out


def principal_batch(const int[:, ::1] trans, const int[:, ::1] pairs):
    cdef int n = trans.shape[0]
    cdef int m = pairs.shape[0]
    cdef int k, i, top
    out = np.empty((m, n), dtype=np.int32)
    cdef int[:, ::1] o = out
    cdef int* parent = <int*> malloc(n * sizeof(int))
    cdef int* queue = <int*> malloc((2 * n + 2) * sizeof(int))
    if parent == NULL or queue == NULL:
        free(parent)
        free(queue)
        raise MemoryError()
    with nogil:
        for k in range(m):
            for i in range(n):
                parent[i] = i
            top = 0
            if _union(parent, pairs[k, 0], pairs[k, 1]):
                queue[0] = pairs[k, 0]
                queue[1] = pairs[k, 1]
                top = 2
            _close(trans, parent, queue, top)
            for i in range(n):
                o[k, i] = _find(parent, i)
    free(parent)
    free(queue)
    return out


def partition_join(const int[::1] rep1, const int[::1] rep2):
    cdef int n = rep1.shape[0]
    cdef int a
    out = np.empty(n, dtype=np.int32)
    cdef int[::1] o = out
    cdef int* parent = <int*> malloc(n * sizeof(int))
    if parent == NULL:
        raise MemoryError()
    with nogil:
        for a in range(n):
            parent[a] = rep1[a]
        for a in range(n):
            _union(parent, a, rep2[a])
        for a in range(n):
            o[a] = _find(parent, a)
    free(parent)
    return out
