"""Hot loops, each with a numba-compiled path and a pure numpy/Python path.

The backend is chosen by ``CUBESHADOW_BACKEND`` (``numba`` or ``numpy``);
numba is used by default when it imports.  Both paths must agree exactly,
which the test suite checks by running under each backend.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKENDS = ("numba", "numpy")
_backend = None


def _default_backend() -> str:
    name = os.environ.get("CUBESHADOW_BACKEND", "numba" if HAVE_NUMBA else "numpy").lower()
    if name not in BACKENDS:
        raise ValueError(f"CUBESHADOW_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ValueError("CUBESHADOW_BACKEND=numba but numba is not installed")
    return name


def backend() -> str:
    global _backend
    if _backend is None:
        _backend = _default_backend()
        threads = os.environ.get("CUBESHADOW_THREADS")
        if threads and HAVE_NUMBA:
            numba.set_num_threads(int(threads))
    return _backend


def set_backend(name: str) -> str:
    """Switch backend at runtime; returns the previous one."""
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ValueError("numba is not installed")
    previous = backend()
    _backend = name
    return previous


def _jit(**options):
    def wrap(func):
        if not HAVE_NUMBA:
            return func
        return njit(cache=True, **options)(func)

    return wrap


# ---------------------------------------------------------------- presence


def _presence_numpy(labels, c, keep_axes):
    drop = tuple(a for a in range(labels.ndim) if a not in keep_axes)
    kept = 1
    for a in keep_axes:
        kept *= labels.shape[a]
    out = np.empty((kept, c), dtype=np.bool_)
    for alpha in range(1, c + 1):
        out[:, alpha - 1] = np.any(labels == alpha, axis=drop).reshape(-1)
    return out


@_jit()
def _presence_scan(flat, shape, keep, c):
    ndim = shape.shape[0]
    # stride of each axis in the projected (kept) index
    pstride = np.zeros(ndim, dtype=np.int64)
    kept = 1
    for a in range(ndim - 1, -1, -1):
        if keep[a]:
            pstride[a] = kept
            kept *= shape[a]
    out = np.zeros((kept, c), dtype=np.bool_)
    idx = np.zeros(ndim, dtype=np.int64)
    p = 0
    for cell in range(flat.shape[0]):
        out[p, flat[cell] - 1] = True
        # odometer step on the cell index, keeping p in sync
        a = ndim - 1
        while a >= 0:
            idx[a] += 1
            p += pstride[a]
            if idx[a] < shape[a]:
                break
            p -= pstride[a] * shape[a]
            idx[a] = 0
            a -= 1
    return out


def presence(labels: np.ndarray, c: int, keep_axes) -> np.ndarray:
    """Table ``T[x, alpha-1]``: is color ``alpha`` above projected cell ``x``.

    ``x`` runs over the stored grid restricted to ``keep_axes`` in row-major
    order.  Dropping every axis yields a single row.
    """
    keep_axes = tuple(sorted(keep_axes))
    if backend() == "numpy":
        return _presence_numpy(labels, c, keep_axes)
    keep = np.zeros(labels.ndim, dtype=np.bool_)
    keep[list(keep_axes)] = True
    shape = np.asarray(labels.shape, dtype=np.int64)
    return _presence_scan(labels.reshape(-1), shape, keep, c)


# ------------------------------------------------------- exhaustive search


def _branch_and_bound_py(proj, nproj, c, cellmap, use_symmetry, budget):
    m, M = proj.shape
    counts = np.zeros((m, c, nproj), dtype=np.int32)
    vols = np.zeros((m, c), dtype=np.int64)
    choice = np.zeros(M, dtype=np.int64)
    maxused = np.zeros(M + 1, dtype=np.int64)
    witness = np.zeros(M, dtype=np.int64)
    relabel = np.zeros(c + 1, dtype=np.int64)
    best = nproj + 1
    # stats: nodes, leaves, bound_pruned, symmetry_pruned, exhausted
    stats = np.zeros(5, dtype=np.int64)
    p = 0
    while p >= 0:
        if choice[p] > 0:
            a = choice[p] - 1
            for s in range(m):
                x = proj[s, p]
                counts[s, a, x] -= 1
                if counts[s, a, x] == 0:
                    vols[s, a] -= 1
        choice[p] += 1
        limit = c
        if use_symmetry and maxused[p] + 1 < c:
            limit = maxused[p] + 1
        if choice[p] > limit:
            choice[p] = 0
            p -= 1
            continue
        stats[0] += 1
        if stats[0] > budget:
            stats[4] = 1
            break
        a = choice[p] - 1
        for s in range(m):
            x = proj[s, p]
            if counts[s, a, x] == 0:
                vols[s, a] += 1
            counts[s, a, x] += 1
        maxused[p + 1] = max(maxused[p], choice[p])
        current = vols.max()
        if current >= best:
            stats[2] += 1
            continue
        if use_symmetry:
            # Is some coordinate permutation, followed by first-occurrence
            # color relabeling, already known to map every completion of
            # choice[:q] to a lexicographically smaller labeling?
            q = p + 1
            canonical = True
            for g in range(cellmap.shape[0]):
                relabel[:] = 0
                used = 0
                for j in range(q):
                    src = cellmap[g, j]
                    if src >= q:
                        break
                    v = choice[src]
                    if relabel[v] == 0:
                        used += 1
                        relabel[v] = used
                    if relabel[v] < choice[j]:
                        canonical = False
                        break
                    if relabel[v] > choice[j]:
                        break
                if not canonical:
                    break
            if not canonical:
                stats[3] += 1
                continue
        if p + 1 == M:
            stats[1] += 1
            best = current
            witness[:] = choice
            continue
        p += 1
        choice[p] = 0
    return best, witness, stats


def _brute_force_py(proj, nproj, member, budget):
    """Plain odometer over every symbol assignment; mpv recomputed from scratch."""
    m, M = proj.shape
    nsym, c = member.shape
    sym = np.zeros(M, dtype=np.int64)
    seen = np.zeros((m, c, nproj), dtype=np.bool_)
    witness = np.zeros(M, dtype=np.int64)
    best = nproj + 1
    stats = np.zeros(5, dtype=np.int64)
    while True:
        stats[0] += 1
        if stats[0] > budget:
            stats[4] = 1
            break
        seen[:] = False
        value = 0
        for s in range(m):
            for a in range(c):
                vol = 0
                for cell in range(M):
                    if member[sym[cell], a]:
                        x = proj[s, cell]
                        if not seen[s, a, x]:
                            seen[s, a, x] = True
                            vol += 1
                if vol > value:
                    value = vol
        stats[1] += 1
        if value < best:
            best = value
            witness[:] = sym
        k = M - 1
        while k >= 0:
            sym[k] += 1
            if sym[k] < nsym:
                break
            sym[k] = 0
            k -= 1
        if k < 0:
            break
    return best, witness, stats


if HAVE_NUMBA:
    _branch_and_bound_nb = njit(cache=True)(_branch_and_bound_py)
    _brute_force_nb = njit(cache=True)(_brute_force_py)


def branch_and_bound(proj, nproj, c, cellmap, use_symmetry, budget):
    """Lexicographic DFS over colorings with projection-volume bounding.

    ``proj[s, cell]`` is the projected index of ``cell`` for the ``s``-th
    coordinate set; all sets share one size, so volumes compare as counts.
    Returns ``(best_count, witness_labels, stats)`` where stats holds nodes,
    leaves, bound prunes, symmetry prunes and a budget-exhausted flag.
    """
    if backend() == "numba":
        return _branch_and_bound_nb(proj, nproj, c, cellmap, use_symmetry, budget)
    return _branch_and_bound_py(proj, nproj, c, cellmap, use_symmetry, budget)


def brute_force(proj, nproj, member, budget):
    """Enumerate every assignment of symbols to cells; symbol ``k`` belongs to
    part ``a`` when ``member[k, a]``.  Witness holds symbol indices."""
    if backend() == "numba":
        return _brute_force_nb(proj, nproj, member, budget)
    return _brute_force_py(proj, nproj, member, budget)
