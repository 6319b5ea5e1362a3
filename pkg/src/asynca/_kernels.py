"""Compiled inner loops for exhaustive state-space analysis and simulation.

Every scheme's one-step successors are derived from the "difference mask"
``d = x ^ sync(x)``: the cells whose RMT is active. Updating a selection
``S`` yields ``x ^ (d & S)``, so

* synchronous:  ``x ^ d``
* fully async:  ``x ^ (d & cell_i)``            for each cell i
* skew async:   ``x ^ (d & (cell_i | cell_i+1))`` for each cell i
* alpha async:  ``x ^ s``                        for each submask s of d

Successors are generated on demand; no edge list is stored.
"""

from __future__ import annotations

import numpy as np
from numba import njit

SYNC, FULLY, SKEW, ALPHA = 0, 1, 2, 3


def sync_image_all(table: np.ndarray, n: int) -> np.ndarray:
    """Synchronous image of every code in ``[0, 2**n)`` as a uint32 array."""
    if n > 30:
        raise ValueError("exhaustive enumeration supports n <= 30")
    mask = np.uint32((1 << n) - 1)
    c = np.arange(1 << n, dtype=np.uint32)
    one = np.uint32(1)
    # bit p of `left` holds the left neighbour (cell i-1, bit p+1) of bit p
    left = (c >> one) | ((c & one) << np.uint32(n - 1))
    right = ((c << one) & mask) | (c >> np.uint32(n - 1))
    out = np.zeros_like(c)
    for r in range(8):
        if not table[r]:
            continue
        term = (left if r & 4 else ~left) & (c if r & 2 else ~c) & (right if r & 1 else ~right)
        out |= term
    return out & mask


@njit(cache=True, inline="always")
def _bit(n, i):
    return np.int64(1) << (n - 1 - (i % n))


@njit(cache=True, inline="always")
def _init_state(kind, d):
    if kind == ALPHA:
        return d
    return np.int64(0)


@njit(cache=True, inline="always")
def _next_succ(c, d, kind, n, state):
    """Return ``(successor, new_state)``; successor is -1 when exhausted.

    Self-loops are skipped; they never affect reachability.
    """
    if kind == SYNC:
        if state == 0 and d != 0:
            return c ^ d, np.int64(1)
        return np.int64(-1), np.int64(1)
    if kind == ALPHA:
        if state == 0:
            return np.int64(-1), state
        s = state
        return c ^ s, (s - 1) & d
    while state < n:
        if kind == FULLY:
            m = d & _bit(n, state)
        else:
            m = d & (_bit(n, state) | _bit(n, state + 1))
        state += 1
        if m != 0:
            return c ^ m, state
    return np.int64(-1), state


@njit(cache=True)
def tarjan_scc(sync_img, n, kind):
    """Iterative Tarjan over the implicit transition graph.

    Returns ``(comp, ncomp)``. Component ids come out in reverse topological
    order of the condensation: every edge goes from id ``a`` to id ``b <= a``.
    """
    N = sync_img.shape[0]
    index = np.full(N, -1, dtype=np.int32)
    low = np.zeros(N, dtype=np.int32)
    onstack = np.zeros(N, dtype=np.bool_)
    comp = np.full(N, -1, dtype=np.int32)
    stack = np.empty(N, dtype=np.int32)
    cs_node = np.empty(N, dtype=np.int32)
    cs_state = np.empty(N, dtype=np.int64)
    sp = 0
    csp = 0
    counter = 0
    ncomp = 0
    for root in range(N):
        if index[root] != -1:
            continue
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        cs_node[csp] = root
        cs_state[csp] = _init_state(kind, np.int64(root) ^ np.int64(sync_img[root]))
        csp += 1
        while csp > 0:
            v = cs_node[csp - 1]
            d = np.int64(v) ^ np.int64(sync_img[v])
            w, st = _next_succ(np.int64(v), d, kind, n, cs_state[csp - 1])
            cs_state[csp - 1] = st
            if w >= 0:
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    cs_node[csp] = w
                    cs_state[csp] = _init_state(kind, w ^ np.int64(sync_img[w]))
                    csp += 1
                elif onstack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        u = stack[sp]
                        onstack[u] = False
                        comp[u] = ncomp
                        if u == v:
                            break
                    ncomp += 1
                csp -= 1
                if csp > 0:
                    p = cs_node[csp - 1]
                    if low[v] < low[p]:
                        low[p] = low[v]
    return comp, ncomp


@njit(cache=True)
def closed_components(sync_img, n, kind, comp, ncomp):
    """Flag components with no outgoing edge; also return component sizes."""
    N = sync_img.shape[0]
    closed = np.ones(ncomp, dtype=np.bool_)
    sizes = np.zeros(ncomp, dtype=np.int64)
    for v in range(N):
        cv = comp[v]
        sizes[cv] += 1
        if not closed[cv]:
            continue
        d = np.int64(v) ^ np.int64(sync_img[v])
        st = _init_state(kind, d)
        while True:
            w, st = _next_succ(np.int64(v), d, kind, n, st)
            if w < 0:
                break
            if comp[w] != cv:
                closed[cv] = False
                break
    return closed, sizes


@njit(cache=True)
def reaches_any(sync_img, n, kind, comp, ncomp, targets):
    """Boolean per configuration: can it reach any code in ``targets``?

    Uses the reverse-topological numbering of ``tarjan_scc``: processing
    components by increasing id sees every successor component first.
    """
    N = sync_img.shape[0]
    order = np.argsort(comp, kind="mergesort")
    reach_comp = np.zeros(ncomp, dtype=np.bool_)
    for t in targets:
        reach_comp[comp[t]] = True
    for k in range(N):
        v = order[k]
        cv = comp[v]
        if reach_comp[cv]:
            continue
        d = np.int64(v) ^ np.int64(sync_img[v])
        st = _init_state(kind, d)
        while True:
            w, st = _next_succ(np.int64(v), d, kind, n, st)
            if w < 0:
                break
            if reach_comp[comp[w]]:
                reach_comp[cv] = True
                break
    out = np.empty(N, dtype=np.bool_)
    for v in range(N):
        out[v] = reach_comp[comp[v]]
    return out


# -- simulation on explicit cell arrays ------------------------------------


@njit(cache=True)
def replay(table, x0, masks):
    """Apply boolean selection masks ``(T, n)`` in order; return all states."""
    T, n = masks.shape
    states = np.empty((T + 1, n), dtype=np.uint8)
    states[0] = x0
    x = x0.copy()
    nxt = np.empty(n, dtype=np.uint8)
    for t in range(T):
        for j in range(n):
            if masks[t, j]:
                nxt[j] = table[4 * x[j - 1] + 2 * x[j] + x[(j + 1) % n]]
            else:
                nxt[j] = x[j]
        x[:] = nxt
        states[t + 1] = x
    return states


@njit(cache=True, inline="always")
def _is_active(table, x, j, n):
    return table[4 * x[(j - 1) % n] + 2 * x[j] + x[(j + 1) % n]] != x[j]


@njit(cache=True)
def init_active(table, x):
    n = x.shape[0]
    active = np.zeros(n, dtype=np.uint8)
    for j in range(n):
        if _is_active(table, x, j, n):
            active[j] = 1
    return active


@njit(cache=True)
def advance(table, x, active, x0, status, kind, sel, masks, every, trace, limit):
    """Run one chunk of a stochastic trial in place.

    ``status`` = [updates, hamming(x, x0), has_left_x0, first_return,
    active_count, converged_at, ones]. Stops early on reaching a point
    attractor or ``limit`` updates. ``sel`` holds cell draws (fully/skew,
    and sets the chunk length for synchronous runs), ``masks`` the alpha
    selections.
    """
    n = x.shape[0]
    t = status[0]
    diff = status[1]
    left = status[2]
    ret = status[3]
    nact = status[4]
    conv = status[5]
    ones = status[6]
    cells = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.uint8)
    nsteps = masks.shape[0] if kind == ALPHA else sel.shape[0]
    for k in range(nsteps):
        if nact == 0 or t >= limit:
            break
        m = 0
        if kind == SYNC:
            for j in range(n):
                cells[m] = j
                m += 1
        elif kind == FULLY:
            cells[0] = sel[k]
            m = 1
        elif kind == SKEW:
            cells[0] = sel[k]
            cells[1] = (sel[k] + 1) % n
            m = 2
        else:
            for j in range(n):
                if masks[k, j]:
                    cells[m] = j
                    m += 1
        for q in range(m):
            j = cells[q]
            vals[q] = table[4 * x[(j - 1) % n] + 2 * x[j] + x[(j + 1) % n]]
        changed = False
        for q in range(m):
            j = cells[q]
            if vals[q] != x[j]:
                changed = True
                if x[j] == x0[j]:
                    diff += 1
                else:
                    diff -= 1
                if vals[q]:
                    ones += 1
                else:
                    ones -= 1
                x[j] = vals[q]
        if changed:
            if m > 3:
                nact = 0
                for j in range(n):
                    a = 1 if _is_active(table, x, j, n) else 0
                    active[j] = a
                    nact += a
            else:
                for q in range(m):
                    for off in range(-1, 2):
                        j = (cells[q] + off) % n
                        a = 1 if _is_active(table, x, j, n) else 0
                        nact += a - active[j]
                        active[j] = a
        t += 1
        if diff > 0:
            left = 1
        elif left == 1 and ret < 0:
            ret = t
        if every > 0 and t % every == 0 and t // every < trace.shape[0]:
            trace[t // every] = ones / n
    if nact == 0 and conv < 0:
        conv = t
    status[0] = t
    status[1] = diff
    status[2] = left
    status[3] = ret
    status[4] = nact
    status[5] = conv
    status[6] = ones


def reaches_target(sync_img, n, kind, comp, ncomp, target):
    return reaches_any(sync_img, n, kind, comp, ncomp, np.array([target], dtype=np.int64))
