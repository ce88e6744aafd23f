"""Complete elliptic integrals by the arithmetic-geometric mean.

Both functions take the *modulus* ``k`` (not the parameter ``m = k**2``) and
are vectorized over numpy arrays.
"""

import numpy as np

from .exceptions import DomainError

_MAX_ITER = 64


def _agm_sums(k):
    # Returns the AGM limit of (1, k') and sum_{n>=0} 2^(n-1) c_n^2.
    a = np.ones_like(k)
    b = np.sqrt((1.0 - k) * (1.0 + k))
    c = k.copy()
    weight = 0.5
    acc = weight * c * c
    for _ in range(_MAX_ITER):
        if np.all(np.abs(c) <= 1e-17 * a):
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        weight *= 2.0
        acc = acc + weight * c * c
    return a, acc


def _as_modulus(k, allow_one):
    k = np.asarray(k, dtype=float)
    bad = (k < 0) | (k > 1) | ~np.isfinite(k)
    if not allow_one:
        bad |= k >= 1
    if np.any(bad):
        raise DomainError("elliptic modulus out of range")
    return k


def elliptic_K(k):
    """Complete elliptic integral of the first kind, ``0 <= k < 1``."""
    k = _as_modulus(k, allow_one=False)
    a, _ = _agm_sums(np.atleast_1d(k))
    out = (np.pi / (2.0 * a)).reshape(k.shape)
    return out if out.ndim else float(out)


def elliptic_E(k):
    """Complete elliptic integral of the second kind, ``0 <= k <= 1``."""
    k = _as_modulus(k, allow_one=True)
    flat = np.atleast_1d(k)
    out = np.ones_like(flat)
    inner = flat < 1.0
    if np.any(inner):
        a, acc = _agm_sums(flat[inner])
        out[inner] = np.pi / (2.0 * a) * (1.0 - acc)
    out = out.reshape(k.shape)
    return out if out.ndim else float(out)
