"""Portable seeded random streams for reproducible problem instances.

Benchmarks here are averaged stochastic experiments, so instance streams
must be reproducible bit-for-bit across platforms and runtimes. Rather
than depending on any library's generator internals, instances are drawn
from SplitMix64 used counter-style:

    out(i) = mix64(seed + i * 0x9E3779B97F4A7C15)   for i = 1, 2, ...

with the standard finalizer (xor-shift 30 / multiply 0xBF58476D1CE4E5B9 /
xor-shift 27 / multiply 0x94D049BB133111EB / xor-shift 31), all in uint64
wraparound arithmetic. Uniform variates take the top 53 bits:

    u(i) = (out(i) >> 11 + 1) * 2^-53   in (0, 1],

and standard normals come from the Box-Muller transform on consecutive
pairs (u1, u2):

    z1 = sqrt(-2 ln u1) * cos(2 pi u2)
    z2 = sqrt(-2 ln u1) * sin(2 pi u2).

Any implementation of this recipe reproduces the exact same instances.
"""

import numpy as np

__all__ = ["splitmix64", "uniforms", "normals", "normal_cloud"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed, count):
    """First ``count`` outputs of SplitMix64 for the given 64-bit seed."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return z


def uniforms(seed, count):
    """``count`` uniforms in (0, 1], from the top 53 bits of splitmix64."""
    bits = splitmix64(seed, count)
    return ((bits >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0 ** -53


def normals(seed, count):
    """``count`` standard normals via Box-Muller on consecutive uniforms."""
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs)
    u1 = u[0::2]
    u2 = u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(2.0 * np.pi * u2)
    out[1::2] = r * np.sin(2.0 * np.pi * u2)
    return out[:count]


def normal_cloud(n, dim, seed):
    """(n, dim) array of i.i.d. standard normals, row-major draw order."""
    return normals(seed, n * dim).reshape(n, dim)
