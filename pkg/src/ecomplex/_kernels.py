"""Hot inner loop of the fitness-complexity iteration.

Two interchangeable implementations operate on the same CSR-style link
arrays: a numba @njit kernel and a pure-numpy fallback. Selection:

    ECOMPLEX_NO_NUMBA=1  -> force the numpy path
    numba import failure -> numpy path with a one-time warning

Both paths perform one update step

    F_new[r] = sum over links (r, c) of Q[c]        (frozen rows kept)
    Q_new[c] = 1 / sum over links (r, c) of 1/F[r]  (frozen cols kept)

followed by mean normalization of both vectors, and return the max
relative change over non-frozen entries. Links must be sorted by
(row, col) so accumulation order is deterministic.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

_FORCE_NUMPY = os.environ.get("ECOMPLEX_NO_NUMBA", "") not in ("", "0")

if not _FORCE_NUMPY:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        HAVE_NUMBA = False
        warnings.warn("numba unavailable; falling back to the numpy solver path")
else:
    HAVE_NUMBA = False


def _step_numpy(link_rows, link_cols, f, q, frozen_f, frozen_q):
    n_rows, n_cols = f.shape[0], q.shape[0]
    f_new = np.bincount(link_rows, weights=q[link_cols], minlength=n_rows)
    inv_sum = np.bincount(link_cols, weights=1.0 / f[link_rows], minlength=n_cols)
    q_new = 1.0 / inv_sum
    f_new[frozen_f] = f[frozen_f]
    q_new[frozen_q] = q[frozen_q]
    f_new /= f_new.mean()
    q_new /= q_new.mean()
    delta = 0.0
    live_f = ~frozen_f
    live_q = ~frozen_q
    if live_f.any():
        delta = float(np.max(np.abs(f_new[live_f] - f[live_f]) / f[live_f]))
    if live_q.any():
        delta = max(delta, float(np.max(np.abs(q_new[live_q] - q[live_q]) / q[live_q])))
    return f_new, q_new, delta


if HAVE_NUMBA:

    @njit(cache=True)
    def _step_numba(link_rows, link_cols, f, q, frozen_f, frozen_q):  # pragma: no cover
        n_rows = f.shape[0]
        n_cols = q.shape[0]
        f_new = np.zeros(n_rows)
        inv_sum = np.zeros(n_cols)
        for k in range(link_rows.shape[0]):
            r = link_rows[k]
            c = link_cols[k]
            f_new[r] += q[c]
            inv_sum[c] += 1.0 / f[r]
        q_new = np.empty(n_cols)
        for c in range(n_cols):
            q_new[c] = 1.0 / inv_sum[c]
        for r in range(n_rows):
            if frozen_f[r]:
                f_new[r] = f[r]
        for c in range(n_cols):
            if frozen_q[c]:
                q_new[c] = q[c]
        f_new /= f_new.mean()
        q_new /= q_new.mean()
        delta = 0.0
        for r in range(n_rows):
            if not frozen_f[r]:
                d = abs(f_new[r] - f[r]) / f[r]
                if d > delta:
                    delta = d
        for c in range(n_cols):
            if not frozen_q[c]:
                d = abs(q_new[c] - q[c]) / q[c]
                if d > delta:
                    delta = d
        return f_new, q_new, delta

    iteration_step = _step_numba
else:
    iteration_step = _step_numpy
