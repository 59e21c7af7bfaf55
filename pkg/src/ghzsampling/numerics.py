"""Log-domain products and compensated summation helpers.

Products over up to 64 per-qubit factors are taken in log-magnitude +
accumulated-phase form so that nothing overflows even when individual
factors are large, and reductions across sub-batches use Neumaier
compensation so the accumulation order cannot leak rounding noise.
"""

from __future__ import annotations

import numpy as np


def stable_sech(x):
    """1/cosh(x), overflow-free for any float64 input."""
    ax = np.abs(x)
    e = np.exp(-ax)
    return 2.0 * e / (1.0 + e * e)


def logpolar_product(factors, axis=-1):
    """Product of complex factors via summed log-magnitudes and phases.

    Equivalent to factors.prod(axis) but immune to overflow/underflow of
    intermediate partial products.  Any zero factor makes the product an
    exact zero.
    """
    factors = np.asarray(factors)
    mag = np.abs(factors)
    zero = np.any(mag == 0.0, axis=axis)
    with np.errstate(divide="ignore"):
        log_mag = np.sum(np.log(mag), axis=axis)
    phase = np.sum(np.angle(factors), axis=axis)
    out = np.exp(log_mag) * np.exp(1j * phase)
    return np.where(zero, 0.0 + 0.0j, out)


def neumaier_sum(values) -> float:
    """Compensated (Neumaier) sum of a 1-D array of floats."""
    total = 0.0
    comp = 0.0
    for v in np.asarray(values, dtype=float):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def compensated_mean(values) -> complex:
    """Mean of a complex array: pairwise block sums, compensated reduction."""
    values = np.asarray(values)
    n = values.size
    if n == 0:
        raise ValueError("cannot average an empty array")
    block = 4096
    if n <= block:
        re = neumaier_sum(values.real)
        im = neumaier_sum(values.imag) if np.iscomplexobj(values) else 0.0
        return complex(re, im) / n
    nblocks = (n + block - 1) // block
    re_parts = np.empty(nblocks)
    im_parts = np.empty(nblocks)
    for b in range(nblocks):
        seg = values[b * block : (b + 1) * block]
        re_parts[b] = np.sum(seg.real)
        im_parts[b] = np.sum(seg.imag) if np.iscomplexobj(values) else 0.0
    return complex(neumaier_sum(re_parts), neumaier_sum(im_parts)) / n
