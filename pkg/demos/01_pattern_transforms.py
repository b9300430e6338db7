"""Patterns and their fast Fourier transform.

A regular integer matrix M defines a pattern P(M): the |det M| points of
M^{-1}Z^2 folded into the half-open unit cell.  The matching frequency
set is the generating set of M^T.  The fast transform factors M through
its Smith normal form, so non-separable (sheared) sampling lattices cost
the same as tensor grids.
"""

import time

import numpy as np

from lathom import (
    as_pattern_matrix,
    generating_set,
    pattern_dft,
    pattern_fft,
    pattern_ifft,
    pattern_points,
    smith_normal_form,
)

mat = [[4, -2], [4, 14]]
pm = as_pattern_matrix(mat)
print(f"M = {pm.entries.tolist()}, m = |det M| = {pm.m}")

snf = smith_normal_form(pm.entries)
print("Smith form diagonal:", snf.grid)

pattern = pattern_points(mat)
freqs = generating_set(mat).freqs
print("first pattern points:\n", pattern.points[:4])
print("first frequencies:   ", freqs[:4].tolist())

# round trip and agreement with the quadratic-cost reference transform
rng = np.random.default_rng(0)
a = rng.normal(size=pm.m) + 1j * rng.normal(size=pm.m)
ahat = pattern_fft(mat, a)
back = pattern_ifft(mat, ahat)
print("fft vs direct dft :", np.linalg.norm(ahat - pattern_dft(mat, a)))
print("round trip error  :", np.linalg.norm(back - a))
print("Parseval defect   :", abs(np.linalg.norm(ahat) - np.linalg.norm(a)))

# the transform is unitary, so random vectors keep their norm; timing on
# a larger sheared pattern shows the Smith route at work
big = [[16, 7], [0, 16]]
m = as_pattern_matrix(big).m
b = rng.normal(size=m)
t0 = time.perf_counter()
for _ in range(100):
    pattern_fft(big, b)
dt = (time.perf_counter() - t0) / 100
print(f"m = {m} sheared pattern: {dt * 1e6:.0f} us per transform")
