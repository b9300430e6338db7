"""The three shipped kernel families and their coefficient tables.

Each kernel is stored as Fourier coefficients on the generating set plus
a few lattice shifts per class.  Orthonormalisation rescales every class
so the translates become an orthonormal basis: m * [|c|^2]_h = 1.
"""

import numpy as np

from lathom import (
    KernelSpec,
    coefficient_table,
    interpolant_coeffs,
    orthonormalize,
    synthesize,
    three_direction_set,
)
from lathom.lattice import pattern_points

mat = [[8, 0], [0, 8]]
specs = {
    "dirichlet": KernelSpec.dirichlet(mat),
    "dlvp(0.25, 0.25)": KernelSpec.dlvp(mat, (0.25, 0.25)),
    "box (2,2,0)": KernelSpec.box_spline(mat, three_direction_set(2, 2, 0), radius=16),
}

for name, spec in specs.items():
    table = coefficient_table(spec)
    ortho = orthonormalize(table)
    bracket = np.einsum("mt,mt->m", ortho.coeffs, ortho.coeffs)
    print(f"{name:18s} shifts={len(table.shifts):4d}  "
          f"class sums flat: {np.ptp(table.class_sums()):.2e}  "
          f"m*bracket-1: {np.max(np.abs(64 * bracket - 1)):.2e}")

# the fundamental interpolant is the cardinal function of the space: it
# is 1 at the origin and 0 at the other pattern points
spec = KernelSpec.dlvp(mat, (0.4, 0.1))
table = coefficient_table(spec)
lagrange = interpolant_coeffs(np.full(64, 1.0 / 64), table)
points = pattern_points(mat).points
full_freqs = (table.freqs[:, None, :] + table.shifts[None] @ np.array(mat)).reshape(-1, 2)
full_coeffs = (lagrange[:, None] * table.coeffs).ravel()
values = synthesize(full_freqs, full_coeffs, 2.0 * np.pi * points)
print("interpolant at origin :", values[0])
print("worst off-origin value:", np.max(np.abs(values[1:])))

# trapezoid windows trade interpolation sharpness for smoothness; the
# alpha = 0 corner is exactly the flat indicator (dirichlet) spectrum
flat = coefficient_table(KernelSpec.dirichlet(mat))
corner = coefficient_table(KernelSpec.dlvp(mat, (0.0, 0.0)))
agree = np.max(np.abs(np.sort(flat.class_sums()) - np.sort(corner.class_sums())))
print("alpha=0 window vs flat indicator class sums:", agree)
