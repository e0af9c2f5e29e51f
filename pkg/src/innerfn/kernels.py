"""Backend selection for the probe kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over.  Both expose ``point_sums`` and ``bucket_min``
with identical semantics.
"""

import numpy as np

from innerfn import _pykernels

try:
    from innerfn import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

BACKEND = "cython" if _ckernels is not None else "python"


def get_backend(name: str | None = None):
    return BACKENDS[name or BACKEND]


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def point_sums(probes, zeros, atoms, backend=None):
    """Evaluate probe sums.

    ``probes`` and ``zeros`` are ``(cos, sin, depth)`` triples (zeros also carry
    a multiplicity array as a fourth member); ``atoms`` is ``(cos, sin, mass)``.
    """
    pc, ps, pd = probes
    zc, zs, zd, zm = zeros
    ac, as_, am = atoms
    return get_backend(backend).point_sums(
        _c(pc), _c(ps), _c(pd), _c(zc), _c(zs), _c(zd), _c(zm),
        _c(ac), _c(as_), _c(am))


def bucket_min(values, keys, thresholds, backend=None):
    return get_backend(backend).bucket_min(_c(values), _c(keys), _c(thresholds))
