"""Pure numpy versions of the probe kernels.

Points are passed in polar form: unit direction ``(cos, sin)`` and depth
``d = 1 - |z|``.  Keeping the depth separate keeps ``1 - rho^2`` accurate
for points much closer to the circle than double precision can resolve
through ``|z|``.
"""

import numpy as np

_CHUNK = 1 << 16


def point_sums(pc, ps, pd, zc, zs, zd, zm, ac, as_, am):
    """Per probe: sum of ``-mult log rho`` over zeros, Poisson sum, min rho.

    Returns three float arrays; ``minrho`` is ``inf`` when there are no zeros.
    """
    n = pc.shape[0]
    neglog = np.zeros(n)
    poisson = np.zeros(n)
    minrho = np.full(n, np.inf)
    for s in range(0, n, _CHUNK):
        sl = slice(s, s + _CHUNK)
        d = pd[sl][:, None]
        one_m_z2 = d * (2.0 - d)
        if zc.shape[0]:
            chord2 = (pc[sl][:, None] - zc) ** 2 + (ps[sl][:, None] - zs) ** 2
            cross = zd + d - zd * d
            denom = cross * cross + (1.0 - zd) * (1.0 - d) * chord2
            with np.errstate(divide="ignore", invalid="ignore"):
                x = np.where(denom > 0.0, one_m_z2 * (zd * (2.0 - zd)) / denom, 1.0)
                x = np.minimum(x, 1.0)
                terms = -0.5 * zm * np.log1p(-x)
            neglog[sl] = terms.sum(axis=1)
            minrho[sl] = np.sqrt(1.0 - x.max(axis=1))
        if ac.shape[0]:
            chord2 = (pc[sl][:, None] - ac) ** 2 + (ps[sl][:, None] - as_) ** 2
            poisson[sl] = (am * one_m_z2 / (d * d + (1.0 - d) * chord2)).sum(axis=1)
    return neglog, poisson, minrho


def bucket_min(values, keys, thresholds):
    """Minimum of ``values`` per bucket ``#{thresholds <= key}``.

    ``thresholds`` is sorted ascending.  Returns ``(best, idx)`` of length
    ``len(thresholds) + 1``; ``idx`` is the first index attaining the minimum
    (``-1`` for empty buckets).
    """
    nt = thresholds.shape[0]
    best = np.full(nt + 1, np.inf)
    idx = np.full(nt + 1, -1, dtype=np.int64)
    buckets = np.searchsorted(thresholds, keys, side="right")
    for b in np.unique(buckets):
        members = np.flatnonzero(buckets == b)
        j = int(np.argmin(values[members]))
        if values[members[j]] < np.inf:
            best[b] = values[members[j]]
            idx[b] = members[j]
    return best, idx
