"""Benchmark geometries, reference solutions and error metrics.

Two microstructure families are provided: a three-phase assembly of two
confocal ellipses in a matrix, and a two-phase layered medium.  Both are
sampled pointwise on a pattern (each pattern point gets the stiffness of
the phase it falls in; no voxel averaging).  The layered medium has an
exact effective tensor from the interface conditions, which serves as the
reference for convergence studies.
"""

import dataclasses
import itertools
import math
import os

import numpy as np

from .errors import (
    InvalidGeometry,
    NonElliptic,
    PatternMismatch,
    ShapeMismatch,
    ValidationError,
)
from .green import strain_basis
from .lattice import as_pattern_matrix, pattern_points
from .pattern_fft import smith_normal_form
from .solver import effective_action
from .tensor import isotropic_stiffness, to_mandel_operator

__all__ = [
    "DEFAULT_MATRIX_MATERIAL",
    "HashinGeometry",
    "LaminateGeometry",
    "rotation_matrix",
    "rasterize_hashin",
    "rasterize_laminate",
    "laminate_phases",
    "laminate_effective_oracle",
    "error_metrics",
    "restrict_field",
    "nearest_point_grid",
    "write_phase_csv",
    "write_phase_pgm",
]

# Documented default for the third phase: a mildly stiff isotropic matrix
# halfway between the default core and coating moduli.
DEFAULT_MATRIX_MATERIAL = (5.0, 0.3)

_PHASE_NAMES = ("core", "coating", "matrix")


def _as_mandel(c):
    c = np.asarray(c, dtype=float)
    if c.ndim == 4:
        return to_mandel_operator(c)
    if c.ndim == 2 and c.shape[0] == c.shape[1]:
        return c
    raise ShapeMismatch(f"stiffness must be (n_s, n_s) or rank 4, got {c.shape}")


def _check_elastic_pair(name, pair):
    young, poisson = pair
    if not (young > 0.0):
        raise InvalidGeometry(f"{name}: Young modulus must be positive, got {young}")
    if not (-1.0 < poisson < 0.5):
        raise InvalidGeometry(f"{name}: Poisson ratio must lie in (-1, 1/2), got {poisson}")


def rotation_matrix(degrees):
    """Plane rotation by `degrees`, exact for multiples of 90.

    The quarter-turn part is split off as a signed permutation so that
    rotating a geometry by an extra 90 degrees permutes sampled phase maps
    without any floating point drift.
    """
    q, r = divmod(float(degrees), 90.0)
    quarter = np.array([[0.0, -1.0], [1.0, 0.0]])
    base = np.linalg.matrix_power(quarter, int(q) % 4)
    if r == 0.0:
        return base
    t = math.radians(r)
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    return base @ rot


@dataclasses.dataclass(eq=False)
class HashinGeometry:
    """Two confocal ellipses (core plus coating) embedded in a matrix.

    The core has semi-axes (c1, c2); the coating boundary is the confocal
    ellipse with squared semi-axes (c1^2 + rho_outer, c2^2 + rho_outer).
    Both are rotated by `rotation_degrees` about the cell centre.  Core and
    coating are isotropic, given as (young, poisson); the matrix stiffness
    is an explicit Mandel (or full rank-4) tensor so anisotropic matrices
    can be benchmarked.  The outer ellipse should fit inside the unit cell
    (largest semi-axis below 1/2), otherwise the periodic images overlap.
    """

    c1: float = 0.05
    c2: float = 0.35
    rho_outer: float = 0.09
    rotation_degrees: float = 60.0
    core_material: tuple = (1.0, 0.3)
    coating_material: tuple = (10.0, 0.3)
    matrix_material: np.ndarray = None

    def __post_init__(self):
        if not (0.0 < self.c1 < self.c2):
            raise InvalidGeometry(
                f"semi-axes must satisfy 0 < c1 < c2, got c1={self.c1}, c2={self.c2}"
            )
        if not (self.rho_outer > 0.0):
            raise InvalidGeometry(f"rho_outer must be positive, got {self.rho_outer}")
        _check_elastic_pair("core", self.core_material)
        _check_elastic_pair("coating", self.coating_material)
        if self.matrix_material is None:
            self.matrix_material = isotropic_stiffness(*DEFAULT_MATRIX_MATERIAL)
        self.matrix_material = _as_mandel(self.matrix_material)
        if self.matrix_material.shape != (3, 3):
            raise InvalidGeometry(
                f"matrix stiffness must be 3x3 in Mandel form, got {self.matrix_material.shape}"
            )

    def phase_of(self, points):
        """Phase index per point: 0 core, 1 coating, 2 matrix."""
        x = np.atleast_2d(np.asarray(points, dtype=float))
        x = x @ rotation_matrix(self.rotation_degrees)
        core = (x[:, 0] / self.c1) ** 2 + (x[:, 1] / self.c2) ** 2
        outer = x[:, 0] ** 2 / (self.c1**2 + self.rho_outer)
        outer = outer + x[:, 1] ** 2 / (self.c2**2 + self.rho_outer)
        return np.where(core <= 1.0, 0, np.where(outer <= 1.0, 1, 2)).astype(np.int8)

    def stiffness_by_phase(self):
        """(3, 3, 3) stack indexed by phase code."""
        return np.stack(
            [
                isotropic_stiffness(*self.core_material),
                isotropic_stiffness(*self.coating_material),
                self.matrix_material,
            ]
        )


def rasterize_hashin(m_mat, geom):
    """Sample the three-phase geometry on P(M).

    Returns (c, phases): the stiffness field (m, 3, 3) in canonical pattern
    ordering and the phase codes (m,) with 0 core, 1 coating, 2 matrix.
    """
    pat = pattern_points(m_mat)
    phases = geom.phase_of(pat.points)
    return geom.stiffness_by_phase()[phases], phases


@dataclasses.dataclass(eq=False)
class LaminateGeometry:
    """Two-phase layered medium, layers orthogonal to a lattice direction.

    `normal` is an integer direction; phase 1 occupies the slab where the
    layer coordinate (n . y wrapped into [-1/2, 1/2)) lies in
    [-1/2, -1/2 + f1).  volume_fraction = 1 keeps only phase 1.  Materials
    are stiffness tensors (Mandel or full rank 4); anisotropic layers are
    allowed, the effective tensor below handles them.
    """

    material_1: np.ndarray
    material_2: np.ndarray
    normal: tuple = (1, 0)
    volume_fraction: float = 0.5

    def __post_init__(self):
        self.material_1 = _as_mandel(self.material_1)
        self.material_2 = _as_mandel(self.material_2)
        if self.material_1.shape != self.material_2.shape:
            raise InvalidGeometry(
                f"phase stiffness shapes differ: {self.material_1.shape} "
                f"vs {self.material_2.shape}"
            )
        n_s = self.material_1.shape[0]
        if n_s not in (3, 6):
            raise InvalidGeometry(f"stiffness must be 3x3 or 6x6 Mandel, got {n_s}x{n_s}")
        d = {3: 2, 6: 3}[n_s]
        normal = np.asarray(self.normal)
        if normal.shape != (d,) or not np.issubdtype(normal.dtype, np.integer):
            raise InvalidGeometry(f"normal must be {d} integers, got {self.normal!r}")
        if not normal.any():
            raise InvalidGeometry("normal must be nonzero")
        self.normal = tuple(int(v) for v in normal)
        if not (0.0 < self.volume_fraction <= 1.0):
            raise InvalidGeometry(
                f"volume fraction must lie in (0, 1], got {self.volume_fraction}"
            )


def laminate_phases(m_mat, geom):
    """Phase codes (m,) on P(M): 0 for phase 1, 1 for phase 2.

    The layer coordinate is evaluated in exact integer arithmetic, so the
    half-open slab boundary never flickers: with f1 = 1/2 and M = 4 I the
    normal e1 splits the 16 points exactly 8 / 8.
    """
    pat = pattern_points(as_pattern_matrix(m_mat))
    nvec = np.asarray(geom.normal, dtype=np.int64)
    if nvec.shape != (pat.z.shape[1],):
        raise PatternMismatch(
            f"normal has {nvec.shape[0]} components for a {pat.z.shape[1]}-d pattern"
        )
    # n . y = t / den exactly; shift by 1/2 and wrap into [0, 1).
    t = pat.numerators @ nvec
    den = int(pat.denominator)
    u = np.mod(2 * t + den, 2 * den)
    return np.where(u < geom.volume_fraction * (2 * den), 0, 1).astype(np.int8)


def rasterize_laminate(m_mat, geom):
    """Stiffness field (m, n_s, n_s) of the layered medium on P(M)."""
    phases = laminate_phases(m_mat, geom)
    return np.where(
        (phases == 0)[:, None, None], geom.material_1, geom.material_2
    )


def laminate_effective_oracle(geom):
    """Exact effective stiffness of the layered medium.

    Interface conditions (continuous traction, continuous tangential
    strain) force the strain jump across a layer interface to be of the
    form sym(a (x) n).  For each macroscopic strain this pins the per-phase
    strains down to one small linear solve; averaging the per-phase
    stresses column by column yields the tensor.  Independent of any
    transform-based machinery.
    """
    c1 = geom.material_1
    c2 = geom.material_2
    for name, c in (("phase 1", c1), ("phase 2", c2)):
        if np.linalg.eigvalsh(c)[0] <= 0.0:
            raise NonElliptic(f"{name} stiffness is not positive definite")
    f1 = geom.volume_fraction
    f2 = 1.0 - f1
    w = strain_basis(np.asarray(geom.normal, dtype=float))
    n_s = w.shape[0]
    # Traction continuity: W^T [C1 (e + f2 W a) - C2 (e - f1 W a)] = 0,
    # one column per Mandel basis strain e.
    amix = w.T @ (f2 * c1 + f1 * c2) @ w
    a = np.linalg.solve(amix, w.T @ (c2 - c1))
    jump = w @ a
    e1 = np.eye(n_s) + f2 * jump
    e2 = np.eye(n_s) - f1 * jump
    ceff = f1 * c1 @ e1 + f2 * c2 @ e2
    return 0.5 * (ceff + ceff.T)


def _relative_norm(diff, ref):
    num = np.linalg.norm(np.asarray(diff).ravel())
    den = np.linalg.norm(np.asarray(ref).ravel())
    if num == 0.0:
        return 0.0
    if den == 0.0:
        return math.inf
    return float(num / den)


def error_metrics(solution, reference, c, eps0, ref_effective, mode="mean_total"):
    """Compare a strain field against a reference on the same pattern.

    Returns (e_eff, e_l2, e_log):

    - e_eff: relative distance of the effective (mean total) stress from
      `ref_effective`.  mode="summed_action" instead sums C : E over the
      pattern without mean or loading; `ref_effective` must then be
      produced the same way.
    - e_l2: relative l2 distance of the total strain fields.
    - e_log: pointwise log(1 + |e11 - e11~|), returned as a field (m,).
    """
    solution = np.asarray(solution)
    reference = np.asarray(reference)
    if solution.shape != reference.shape:
        raise PatternMismatch(
            f"solution shape {solution.shape} vs reference shape {reference.shape}"
        )
    if solution.ndim != 2:
        raise ShapeMismatch(f"strain fields must be 2-d, got shape {solution.shape}")
    eps0 = np.asarray(eps0)
    ref_effective = np.asarray(ref_effective)
    if mode == "mean_total":
        act = effective_action(c, solution, eps0)
    elif mode == "summed_action":
        act = len(solution) * effective_action(c, solution - eps0, eps0)
    else:
        raise ValidationError(f"unknown metric mode {mode!r}")
    e_eff = _relative_norm(act - ref_effective, ref_effective)
    e_l2 = _relative_norm(solution - reference, reference + eps0)
    e_log = np.log1p(np.abs(reference[:, 0] - solution[:, 0]))
    return e_eff, e_l2, e_log


def restrict_field(field, fine_mat, coarse_mat):
    """Restrict a field on P(M_fine) to the sub-pattern P(M_coarse).

    Requires M_fine M_coarse^-1 to be integer (the coarse points are then a
    subset of the fine ones); raises PatternMismatch otherwise.  Works for
    any trailing field shape.
    """
    fm = as_pattern_matrix(fine_mat)
    cm = as_pattern_matrix(coarse_mat)
    if fm.dim != cm.dim:
        raise PatternMismatch(f"dimension {fm.dim} vs {cm.dim}")
    lf = fm.entries @ np.linalg.inv(cm.entries.astype(float))
    l_int = np.rint(lf).astype(np.int64)
    if not np.array_equal(l_int @ cm.entries, fm.entries):
        raise PatternMismatch("fine lattice does not refine the coarse pattern")
    field = np.asarray(field)
    fine = pattern_points(fm)
    if field.shape[0] != len(fine):
        raise ShapeMismatch(
            f"field has {field.shape[0]} rows, fine pattern has {len(fine)} points"
        )
    rows = fine.index(pattern_points(cm).z @ l_int.T)
    return field[rows]


def nearest_point_grid(m_mat, shape=None):
    """Raster of pattern indices: each pixel gets the nearest point of P(M).

    Pixel (row r, column c) of an (H, W) raster samples the cell location
    x = (c / W - 1/2, 1/2 - (r + 1) / H); distances are measured on the
    torus.  With the default shape the raster has exactly m pixels and on a
    diagonal matrix every pixel sits on its own pattern point.  Ties and
    the candidate search use a fixed stencil, so the output is
    deterministic.
    """
    pm = as_pattern_matrix(m_mat)
    if pm.dim != 2:
        raise ShapeMismatch(f"rasters are 2-d only, got a {pm.dim}-d pattern")
    if shape is None:
        a = pm.entries
        if a[0, 1] == 0 and a[1, 0] == 0:
            shape = (abs(int(a[1, 1])), abs(int(a[0, 0])))
        else:
            d1, d2 = smith_normal_form(pm).grid
            shape = (d1, d2)
    height, width = (int(v) for v in shape)
    if height < 1 or width < 1:
        raise ShapeMismatch(f"raster shape must be positive, got {shape}")
    pat = pattern_points(pm)
    offs = np.array(list(itertools.product(range(-2, 3), repeat=2)), dtype=np.int64)
    minv_t = np.linalg.inv(pm.entries.astype(float)).T
    x1 = np.arange(width) / width - 0.5
    x2 = 0.5 - (np.arange(height) + 1.0) / height
    out = np.empty((height, width), dtype=np.int64)
    for r in range(height):
        x = np.column_stack([x1, np.full(width, x2[r])])
        z0 = np.rint(x @ pm.entries.T).astype(np.int64)
        zc = z0[:, None, :] + offs[None, :, :]
        delta = zc @ minv_t - x[:, None, :]
        delta -= np.rint(delta)
        best = np.argmin(np.einsum("nkd,nkd->nk", delta, delta), axis=1)
        out[r] = pat.index(np.take_along_axis(zc, best[:, None, None], axis=1)[:, 0, :])
    return out


def _write_atomic(path, data):
    """Write bytes to path via a temporary sibling and an atomic rename."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as handle:
        handle.write(data)
    os.replace(tmp, path)


def _check_phases(m_mat, phases):
    pm = as_pattern_matrix(m_mat)
    phases = np.asarray(phases)
    if phases.shape != (pm.m,):
        raise ShapeMismatch(f"expected {pm.m} phase codes, got shape {phases.shape}")
    if not np.issubdtype(phases.dtype, np.integer) or phases.min() < 0:
        raise ShapeMismatch("phase codes must be non-negative integers")
    return pm, phases


def write_phase_csv(path, m_mat, phases):
    """Phase codes as CSV rows y1,y2,phase in canonical pattern order."""
    pm, phases = _check_phases(m_mat, phases)
    pat = pattern_points(pm)
    lines = ["y1,y2,phase"]
    for point, code in zip(pat.points, phases):
        coords = ",".join("%.17g" % v for v in point)
        lines.append(f"{coords},{int(code)}")
    _write_atomic(path, ("\n".join(lines) + "\n").encode("ascii"))


def write_phase_pgm(path, m_mat, phases, shape=None):
    """Phase map as a binary PGM image (nearest pattern point per pixel).

    Phase 0 renders white and the highest code black, with evenly spaced
    grey levels in between.
    """
    pm, phases = _check_phases(m_mat, phases)
    grid = nearest_point_grid(pm, shape)
    span = max(int(phases.max()), 1)
    levels = ((span - np.arange(span + 1)) * 255 // span).astype(np.uint8)
    img = levels[phases[grid]]
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    _write_atomic(path, header + img.tobytes())
