"""Pure-Python congruence kernels.

Same contract as the compiled ``_kernels`` module.  Partitions are int32
arrays mapping each element to the least element of its block; the
translation matrix ``trans`` has one row per element and one column per
basic translation (an operation with all but one argument fixed).
"""

import numpy as np

BACKEND = "python"


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def _close(rows, parent, queue):
    # queue holds pairs whose translates still need to be merged
    while queue:
        a, b = queue.pop()
        for u, v in zip(rows[a], rows[b]):
            ru = _find(parent, u)
            rv = _find(parent, v)
            if ru != rv:
                if ru < rv:
                    parent[rv] = ru
                else:
                    parent[ru] = rv
                queue.append((u, v))


def _seed(parent, seeds):
    queue = []
    for a, b in seeds:
        ra = _find(parent, a)
        rb = _find(parent, b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
            queue.append((a, b))
    return queue


def _canonical(parent):
    return np.fromiter((_find(parent, a) for a in range(len(parent))), np.int32, len(parent))


def cg_close(trans, rep, seeds):
    rows = trans.tolist()
    parent = [int(r) for r in rep]
    queue = _seed(parent, [(int(a), int(b)) for a, b in seeds])
    _close(rows, parent, queue)
    return _canonical(parent)


def principal_batch(trans, pairs):
    rows = trans.tolist()
    n = trans.shape[0]
    out = np.empty((len(pairs), n), dtype=np.int32)
    for k, (a, b) in enumerate(pairs):
        parent = list(range(n))
        queue = _seed(parent, [(int(a), int(b))])
        _close(rows, parent, queue)
        out[k] = _canonical(parent)
    return out


def partition_join(rep1, rep2):
    parent = [int(r) for r in rep1]
    for a, r in enumerate(rep2.tolist()):
        ra = _find(parent, a)
        rb = _find(parent, r)
        if ra < rb:
            parent[rb] = ra
        elif rb < ra:
            parent[ra] = rb
    return _canonical(parent)
