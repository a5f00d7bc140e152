"""Transmission geometry, interface-aligned grids, and coefficient pairs.

Layout and sign conventions:

- The domain splits as Omega = Omega1 | S | Omega2.  In 1D, Omega1 = (0, x_S)
  and Omega2 = (x_S, 1); the interface is the single interior point x_S (the
  closed-hypersurface hypothesis has no 1D realization, so the interior
  point stands in for it -- a documented geometric simplification).
- 2D geometries: a vertical-line interface on a rectangle that is periodic
  in y (strip), or a circle centered in the domain with Omega2 = inner disk
  and Omega1 = the surrounding annulus (polar grid).
- ``nu`` is the outward normal of Omega1 on S: +e_x in 1D/strip, -e_r on the
  circle.  The conormal flux jump reads  a grad(y1) . nu = atilde grad(y2) . nu + beta2.
- Interface nodes are duplicated: each interface location carries one trace
  slot in each subdomain array, so jump conditions are imposable exactly.
- Grids are uniform within each subdomain; all constructed objects are
  immutable (arrays are set read-only) and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    ConfigError,
    GeometryNotSupportedError,
    GridAlignmentError,
    PreconditionError,
    ResolutionError,
    TensorDataError,
)
from .fields import TensorCoefficient, as_points

Array = np.ndarray


def _frozen(a: Array) -> Array:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# regions (observation sets)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def contains(self, pts: Array, closed: bool, tol: float) -> Array:
        x = pts[:, 0]
        if closed:
            return (x >= self.a - tol) & (x <= self.b + tol)
        return (x > self.a + tol) & (x < self.b - tol)

    def centroid(self) -> Array:
        return np.array([0.5 * (self.a + self.b)])


@dataclass(frozen=True)
class Box:
    x0: float
    x1: float
    y0: float
    y1: float

    def contains(self, pts: Array, closed: bool, tol: float) -> Array:
        x, y = pts[:, 0], pts[:, 1]
        if closed:
            return (
                (x >= self.x0 - tol)
                & (x <= self.x1 + tol)
                & (y >= self.y0 - tol)
                & (y <= self.y1 + tol)
            )
        return (
            (x > self.x0 + tol)
            & (x < self.x1 - tol)
            & (y > self.y0 + tol)
            & (y < self.y1 - tol)
        )

    def centroid(self) -> Array:
        return np.array([0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1)])


@dataclass(frozen=True)
class Ball:
    cx: float
    cy: float
    r: float

    def contains(self, pts: Array, closed: bool, tol: float) -> Array:
        d = np.hypot(pts[:, 0] - self.cx, pts[:, 1] - self.cy)
        return d <= self.r + tol if closed else d < self.r - tol

    def centroid(self) -> Array:
        return np.array([self.cx, self.cy])


Primitive = Union[Interval, Box, Ball]


@dataclass(frozen=True)
class Region:
    """Union of open primitive shapes (intervals, boxes, balls)."""

    parts: tuple

    def contains(self, pts, dim: int, closed: bool = False, tol: float = 0.0) -> Array:
        pts = as_points(pts, dim)
        mask = np.zeros(pts.shape[0], dtype=bool)
        for p in self.parts:
            mask |= p.contains(pts, closed, tol)
        return mask

    def is_empty(self) -> bool:
        return len(self.parts) == 0

    def targets(self, m: int, dim: int) -> Array:
        """Deterministic interior points, one per part first, then spread
        around the part centroids."""
        if not self.parts:
            raise PreconditionError("empty region has no target points")
        pts = []
        k = 0
        while len(pts) < m:
            part = self.parts[k % len(self.parts)]
            c = part.centroid()
            layer = k // len(self.parts)
            if layer > 0:
                if isinstance(part, Interval):
                    span = 0.5 * (part.b - part.a)
                    off = np.array([span * 0.4 * (-1.0) ** layer / layer])
                elif isinstance(part, Box):
                    span = 0.5 * min(part.x1 - part.x0, part.y1 - part.y0)
                    ang = 2.39996 * layer  # golden-angle spread
                    off = span * 0.4 / layer * np.array([np.cos(ang), np.sin(ang)])
                else:
                    ang = 2.39996 * layer
                    off = part.r * 0.4 / layer * np.array([np.cos(ang), np.sin(ang)])
                c = c + off
            pts.append(c[:dim])
            k += 1
        return np.array(pts)


def region_from_intervals(intervals: Sequence[Sequence[float]]) -> Region:
    return Region(tuple(Interval(float(a), float(b)) for a, b in intervals))


def region_from_boxes(boxes: Sequence[Sequence[float]]) -> Region:
    return Region(tuple(Box(*map(float, b)) for b in boxes))


# ---------------------------------------------------------------------------
# geometry specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointInterface:
    x: float


@dataclass(frozen=True)
class LineInterface:
    x: float


@dataclass(frozen=True)
class CircleInterface:
    cx: float
    cy: float
    r: float


Interface = Union[PointInterface, LineInterface, CircleInterface]


@dataclass(frozen=True)
class GeometrySpec:
    """Static description of the transmission configuration.

    ``extent`` is (x0, x1) in 1D and ((x0, x1), (y0, y1)) in 2D; strip
    geometries are periodic in y.  ``omega`` is the observation set, with
    ``omega1``/``omega2`` compactly inside omega & Omega1 / omega & Omega2.
    """

    dimension: int
    extent: tuple
    interface: Interface
    omega: Region
    omega1: Region
    omega2: Region
    T: float

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ConfigError("dimension must be 1 or 2")
        if self.T <= 0:
            raise ConfigError("final time T must be positive")
        if self.dimension == 1:
            if not isinstance(self.interface, PointInterface):
                raise ConfigError("1D geometry needs a point interface")
            x0, x1 = self.extent
            if not x0 < self.interface.x < x1:
                raise ConfigError(
                    f"interface x_S={self.interface.x} outside the domain ({x0},{x1})"
                )
        else:
            (x0, x1), (y0, y1) = self.extent
            if isinstance(self.interface, LineInterface):
                if not x0 < self.interface.x < x1:
                    raise ConfigError("interface line outside the domain")
            elif isinstance(self.interface, CircleInterface):
                c = self.interface
                if (
                    c.cx - c.r <= x0
                    or c.cx + c.r >= x1
                    or c.cy - c.r <= y0
                    or c.cy + c.r >= y1
                ):
                    raise ConfigError("interface circle touches the outer boundary")
            else:
                raise ConfigError("2D geometry needs a line or circle interface")

    @property
    def kind(self) -> str:
        if self.dimension == 1:
            return "interval"
        return "strip" if isinstance(self.interface, LineInterface) else "disk"


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

LABEL_INTERIOR = 0
LABEL_INTERFACE = 1
LABEL_OUTER = 2


@dataclass(frozen=True)
class SubGrid:
    """Structured node set of one subdomain (interface nodes included)."""

    points: Array  # (N, dim)
    label: Array  # (N,) int8
    iface: Array  # indices of interface nodes, ordered along S
    outer: Array  # indices of outer Dirichlet nodes
    shape: tuple  # structured index shape
    h: float  # spacing along x (1D/strip) or r (disk)

    @property
    def n_nodes(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class Grid:
    spec: GeometrySpec
    kind: str
    sub1: SubGrid
    sub2: SubGrid
    times: Array
    dt: float
    hy: Optional[float] = None  # strip: y spacing
    ny: Optional[int] = None  # strip: number of y intervals (periodic)
    ntheta: Optional[int] = None  # disk: angular node count
    snap_distance: float = 0.0
    interface_points: Array = field(default=None)  # (nS, dim)
    normal: Array = field(default=None)  # (nS, dim), outward of Omega1

    @property
    def n_interface(self) -> int:
        return self.interface_points.shape[0]

    @property
    def min_h(self) -> float:
        hs = [self.sub1.h, self.sub2.h]
        if self.hy is not None:
            hs.append(self.hy)
        return min(hs)

    # -- distance utilities (the O_delta(G) machinery) ---------------------

    def dist_to_interface(self, pts) -> Array:
        pts = as_points(pts, self.spec.dimension)
        if self.kind in ("interval", "strip"):
            return np.abs(pts[:, 0] - self.spec.interface.x)
        c = self.spec.interface
        return np.abs(np.hypot(pts[:, 0] - c.cx, pts[:, 1] - c.cy) - c.r)

    def dist_to_gamma(self, pts, side: int) -> Array:
        """Distance to Gamma_i = boundary of Omega_i (interface included)."""
        pts = as_points(pts, self.spec.dimension)
        ds = self.dist_to_interface(pts)
        if self.kind == "interval":
            x0, x1 = self.spec.extent
            other = pts[:, 0] - x0 if side == 1 else x1 - pts[:, 0]
            return np.minimum(ds, np.abs(other))
        if self.kind == "strip":
            (x0, x1), _ = self.spec.extent
            other = pts[:, 0] - x0 if side == 1 else x1 - pts[:, 0]
            return np.minimum(ds, np.abs(other))
        c = self.spec.interface
        r = np.hypot(pts[:, 0] - c.cx, pts[:, 1] - c.cy)
        if side == 1:  # annulus: S and the outer circle
            (x0, x1), _ = self.spec.extent
            r_out = self._disk_router()
            return np.minimum(ds, np.abs(r_out - r))
        return ds  # inner disk: Gamma2 = S

    def _disk_router(self) -> float:
        (x0, x1), (y0, y1) = self.spec.extent
        c = self.spec.interface
        return min(c.cx - x0, x1 - c.cx, c.cy - y0, y1 - c.cy)

    def o_delta_mask(self, pts, target: str, delta: float) -> Array:
        """Mask of points within distance delta of S / Gamma1 / Gamma2."""
        if target == "S":
            return self.dist_to_interface(pts) < delta
        if target == "Gamma1":
            return self.dist_to_gamma(pts, 1) < delta
        if target == "Gamma2":
            return self.dist_to_gamma(pts, 2) < delta
        raise PreconditionError(f"unknown target {target!r}")


def _interval_subgrids(x0, x_s, x1, n1, n2):
    xs1 = np.linspace(x0, x_s, n1 + 1)
    xs2 = np.linspace(x_s, x1, n2 + 1)
    lab1 = np.zeros(n1 + 1, dtype=np.int8)
    lab1[0] = LABEL_OUTER
    lab1[-1] = LABEL_INTERFACE
    lab2 = np.zeros(n2 + 1, dtype=np.int8)
    lab2[-1] = LABEL_OUTER
    lab2[0] = LABEL_INTERFACE
    sub1 = SubGrid(
        _frozen(xs1[:, None]),
        _frozen(lab1),
        _frozen(np.array([n1])),
        _frozen(np.array([0])),
        (n1 + 1,),
        (x_s - x0) / n1,
    )
    sub2 = SubGrid(
        _frozen(xs2[:, None]),
        _frozen(lab2),
        _frozen(np.array([0])),
        _frozen(np.array([n2])),
        (n2 + 1,),
        (x1 - x_s) / n2,
    )
    return sub1, sub2


def _strip_subgrid(xs: Array, ys: Array, iface_col: int, outer_col: int, h: float):
    nx, ny = len(xs), len(ys)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    lab = np.zeros(nx * ny, dtype=np.int8)
    idx = np.arange(nx * ny).reshape(nx, ny)
    lab[idx[outer_col, :]] = LABEL_OUTER
    lab[idx[iface_col, :]] = LABEL_INTERFACE
    return SubGrid(
        _frozen(pts),
        _frozen(lab),
        _frozen(idx[iface_col, :].copy()),
        _frozen(idx[outer_col, :].copy()),
        (nx, ny),
        h,
    )


def _disk_subgrids(spec: GeometrySpec, n1: int, n2: int, ntheta: int):
    c = spec.interface
    (x0, x1), (y0, y1) = spec.extent
    router = min(c.cx - x0, x1 - c.cx, c.cy - y0, y1 - c.cy)
    theta = np.arange(ntheta) * (2.0 * np.pi / ntheta)
    ct, st = np.cos(theta), np.sin(theta)

    # Omega2: inner disk, rings r = h2, ..., r_S plus the center node.
    h2 = c.r / n2
    pts2 = [np.array([[c.cx, c.cy]])]
    for i in range(1, n2 + 1):
        r = i * h2
        pts2.append(np.column_stack([c.cx + r * ct, c.cy + r * st]))
    pts2 = np.vstack(pts2)
    lab2 = np.zeros(pts2.shape[0], dtype=np.int8)
    if2 = np.arange(1 + (n2 - 1) * ntheta, 1 + n2 * ntheta)
    lab2[if2] = LABEL_INTERFACE
    sub2 = SubGrid(
        _frozen(pts2),
        _frozen(lab2),
        _frozen(if2),
        _frozen(np.array([], dtype=int)),
        ("disk-inner", n2 + 1, ntheta),
        h2,
    )

    # Omega1: annulus, rings r = r_S, ..., r_outer.
    h1 = (router - c.r) / n1
    pts1 = []
    for i in range(n1 + 1):
        r = c.r + i * h1
        pts1.append(np.column_stack([c.cx + r * ct, c.cy + r * st]))
    pts1 = np.vstack(pts1)
    lab1 = np.zeros(pts1.shape[0], dtype=np.int8)
    if1 = np.arange(ntheta)
    out1 = np.arange(n1 * ntheta, (n1 + 1) * ntheta)
    lab1[if1] = LABEL_INTERFACE
    lab1[out1] = LABEL_OUTER
    sub1 = SubGrid(
        _frozen(pts1),
        _frozen(lab1),
        _frozen(if1),
        _frozen(out1),
        ("disk-annulus", n1 + 1, ntheta),
        h1,
    )
    iface_pts = pts1[if1]
    normal = -np.column_stack([ct, st])  # outward of the annulus on S
    return sub1, sub2, iface_pts, normal


def build_grid(
    spec: GeometrySpec,
    nx,
    nt: int,
    ny: Optional[int] = None,
    ntheta: Optional[int] = None,
    uniform_global: bool = False,
    allow_snap: bool = True,
) -> Grid:
    """Build an interface-aligned space-time grid.

    ``nx`` is the interval count per subdomain (int, or (n1, n2)).  With
    ``uniform_global=True``, ``nx`` counts intervals across the whole x
    extent instead and the interface is snapped to the nearest node; the
    snap distance is reported on the grid, and snapping beyond h/2 rounding
    noise raises when ``allow_snap`` is False.  Deterministic: identical
    arguments give bit-identical grids.
    """
    if isinstance(nx, (tuple, list)):
        n1, n2 = int(nx[0]), int(nx[1])
    else:
        n1 = n2 = int(nx)
    if min(n1, n2) < 8 and not uniform_global:
        raise PreconditionError("need nx >= 8 intervals per subdomain")
    if nt < 2:
        raise PreconditionError("need nt >= 2 time intervals")

    snap = 0.0
    if spec.kind == "interval":
        x0, x1 = spec.extent
        x_s = spec.interface.x
        if uniform_global:
            ntot = n1 if isinstance(nx, int) else n1 + n2
            h = (x1 - x0) / ntot
            k = round((x_s - x0) / h)
            snap = abs(x_s - (x0 + k * h))
            if not allow_snap and snap > 1e-12 * (x1 - x0):
                raise GridAlignmentError(
                    f"interface x_S={x_s} not on the uniform grid (snap {snap:.3e})"
                )
            if k <= 0 or k >= ntot:
                raise GridAlignmentError("snapped interface hits the boundary")
            x_s = x0 + k * h
            n1, n2 = k, ntot - k
        sub1, sub2 = _interval_subgrids(x0, x_s, x1, n1, n2)
        iface_pts = np.array([[x_s]])
        normal = np.array([[1.0]])
        hy = None
        ny_out = None
    elif spec.kind == "strip":
        (x0, x1), (y0, y1) = spec.extent
        if ny is None:
            ny = n1 + n2
        x_s = spec.interface.x
        xs1 = np.linspace(x0, x_s, n1 + 1)
        xs2 = np.linspace(x_s, x1, n2 + 1)
        ys = np.linspace(y0, y1, ny + 1)
        hy = (y1 - y0) / ny
        sub1 = _strip_subgrid(xs1, ys, n1, 0, (x_s - x0) / n1)
        sub2 = _strip_subgrid(xs2, ys, 0, n2, (x1 - x_s) / n2)
        iface_pts = np.column_stack([np.full(ny + 1, x_s), ys])
        normal = np.tile(np.array([[1.0, 0.0]]), (ny + 1, 1))
        ny_out = ny
    else:  # disk
        if ntheta is None:
            ntheta = 4 * max(n1, n2)
        sub1, sub2, iface_pts, normal = _disk_subgrids(spec, n1, n2, ntheta)
        hy = None
        ny_out = None

    times = np.linspace(0.0, spec.T, nt + 1)
    grid = Grid(
        spec=spec,
        kind=spec.kind,
        sub1=sub1,
        sub2=sub2,
        times=_frozen(times),
        dt=spec.T / nt,
        hy=hy,
        ny=ny_out,
        ntheta=ntheta if spec.kind == "disk" else None,
        snap_distance=snap,
        interface_points=_frozen(iface_pts),
        normal=_frozen(normal),
    )
    _validate_regions(grid)
    return grid


def _validate_regions(grid: Grid) -> None:
    spec = grid.spec
    dim = spec.dimension
    p1, p2 = grid.sub1.points, grid.sub2.points
    in1 = grid.sub1.label == LABEL_INTERIOR
    in2 = grid.sub2.label == LABEL_INTERIOR
    om1 = spec.omega.contains(p1, dim) & in1
    om2 = spec.omega.contains(p2, dim) & in2
    if not om1.any() or not om2.any():
        raise ConfigError(
            "omega must contain at least one grid node in each subdomain"
        )
    h = grid.min_h
    for name, sub, reg, par in (
        ("omega1", grid.sub1, spec.omega1, 1),
        ("omega2", grid.sub2, spec.omega2, 2),
    ):
        pts = sub.points
        closure = reg.contains(pts, dim, closed=True, tol=1e-12)
        if not closure.any():
            raise ConfigError(f"{name} contains no grid node")
        # one-cell margin: every node within one cell of closure(omega_i)
        # must lie in omega and strictly inside Omega_i.
        near = reg.contains(pts, dim, closed=True, tol=h * (1 + 1e-9))
        ok = spec.omega.contains(pts, dim) & (sub.label == LABEL_INTERIOR)
        bad = near & ~ok
        if bad.any():
            j = int(np.flatnonzero(bad)[0])
            raise ConfigError(
                f"closure({name}) not compactly inside omega & Omega{par} "
                f"(violated near node {pts[j]})"
            )
    # interface must not touch the outer boundary (distance >= one cell)
    d_iface = grid.dist_to_gamma(grid.interface_points, 1)
    if grid.kind == "interval":
        x0, x1 = spec.extent
        clearance = min(spec.interface.x - x0, x1 - spec.interface.x)
    elif grid.kind == "strip":
        (x0, x1), _ = spec.extent
        clearance = min(spec.interface.x - x0, x1 - spec.interface.x)
    else:
        clearance = grid._disk_router() - spec.interface.r
    if clearance < grid.min_h - 1e-12:
        raise ConfigError("interface closer than one cell to the outer boundary")


# ---------------------------------------------------------------------------
# diffusion pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffusionPair:
    """The two tensor fields with their shared ellipticity constant s0."""

    a: TensorCoefficient
    a_tilde: TensorCoefficient
    s0: float

    def __post_init__(self):
        if self.s0 <= 0:
            raise ConfigError("ellipticity constant s0 must be positive")
        if self.a.dim != self.a_tilde.dim:
            raise ConfigError("tensor dimensions differ")

    @property
    def time_dependent(self) -> bool:
        return self.a.time_dependent or self.a_tilde.time_dependent


def check_tensor(pair: DiffusionPair, grid: Grid, time_samples: int = 5) -> dict:
    """Certify symmetry and ellipticity of both tensors on the grid.

    Returns max |a^ij - a^ji|, min over samples of (lambda_min - s0), and
    the pass verdict (residual <= 1e-12 and margin >= 0).
    """
    t_idx = np.unique(
        np.linspace(0, len(grid.times) - 1, max(2, time_samples)).astype(int)
    )
    sym = 0.0
    margin = np.inf
    for tens, sub in ((pair.a, grid.sub1), (pair.a_tilde, grid.sub2)):
        for k in t_idx:
            a = tens(float(grid.times[k]), sub.points)
            if not np.all(np.isfinite(a)):
                raise TensorDataError("non-finite tensor entry")
            sym = max(sym, float(np.max(np.abs(a - np.swapaxes(a, 1, 2)))))
            ev = np.linalg.eigvalsh(a)
            margin = min(margin, float(ev[:, 0].min() - pair.s0))
    return {
        "symmetry_residual": sym,
        "ellipticity_margin": margin,
        "passed": bool(sym <= 1e-12 and margin >= 0.0),
    }


# ---------------------------------------------------------------------------
# transmission states and interface trace jumps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransmissionState:
    """Discrete piecewise solution with duplicated interface trace slots.

    ``y1``/``y2`` have shape (nt+1, *subgrid shape); ``beta1``/``beta2`` are
    (nt+1, nS) time series on the interface; ``f1``/``f2`` match ``y1``/``y2``.
    The diffusion pair travels with the state so conormal fluxes are
    computable without extra context.
    """

    grid: Grid
    pair: DiffusionPair
    y1: Array
    y2: Array
    f1: Array
    f2: Array
    beta1: Array
    beta2: Array

    def __post_init__(self):
        nt1 = len(self.grid.times)
        for name in ("y1", "y2", "f1", "f2", "beta1", "beta2"):
            arr = getattr(self, name)
            if arr.shape[0] != nt1:
                raise PreconditionError(f"{name} has wrong time extent")
        ns = self.grid.n_interface
        if self.beta1.shape[1] != ns or self.beta2.shape[1] != ns:
            raise PreconditionError("interface series length mismatch")

    @property
    def y1_T(self) -> Array:
        return self.y1[-1]

    @property
    def y2_T(self) -> Array:
        return self.y2[-1]


def _one_sided_x(field2d: Array, h: float, at_start: bool) -> Array:
    """Second-order one-sided d/dx along axis 0 at the first/last slice."""
    if field2d.shape[0] < 3:
        raise ResolutionError("one-sided stencil needs >= 3 nodes on a side")
    if at_start:
        return (-3.0 * field2d[0] + 4.0 * field2d[1] - field2d[2]) / (2.0 * h)
    return (3.0 * field2d[-1] - 4.0 * field2d[-2] + field2d[-3]) / (2.0 * h)


def interface_trace_jump(state: TransmissionState, k: int) -> dict:
    """Dirichlet and conormal-flux jumps at time level k.

    One-sided gradients use 3-point second-order stencils.  For a state
    honoring the transmission relations the jumps reproduce (beta1, beta2)
    up to the discretization residual of the stencils.
    """
    grid = state.grid
    if grid.kind == "disk":
        raise GeometryNotSupportedError("trace jumps on polar grids not supported")
    t = float(grid.times[k])
    if grid.kind == "interval":
        y1k = state.y1[k][:, None]
        y2k = state.y2[k][:, None]
    else:
        y1k = state.y1[k]
        y2k = state.y2[k]
    if y1k.shape[0] < 3 or y2k.shape[0] < 3:
        raise ResolutionError("one-sided stencil needs >= 3 nodes on a side")
    d_jump = y1k[-1] - y2k[0]
    g1x = _one_sided_x(y1k, grid.sub1.h, at_start=False)
    g2x = _one_sided_x(y2k, grid.sub2.h, at_start=True)
    a = state.pair.a(t, grid.interface_points)
    at = state.pair.a_tilde(t, grid.interface_points)
    nu = grid.normal
    if grid.kind == "interval":
        grad1 = g1x[:, None]
        grad2 = g2x[:, None]
    else:
        hy = grid.hy
        g1y = _periodic_dy(y1k[-1], hy)
        g2y = _periodic_dy(y2k[0], hy)
        grad1 = np.column_stack([g1x, g1y])
        grad2 = np.column_stack([g2x, g2y])
    flux1 = np.einsum("sij,si,sj->s", a, grad1, nu)
    flux2 = np.einsum("sij,si,sj->s", at, grad2, nu)
    return {
        "dirichlet_jump": np.asarray(d_jump).reshape(-1),
        "flux_jump": flux1 - flux2,
    }


def _periodic_dy(col: Array, hy: float) -> Array:
    """Centered d/dy of interface-column values (periodic, duplicate last row)."""
    v = col[:-1]  # unique rows
    dv = (np.roll(v, -1) - np.roll(v, 1)) / (2.0 * hy)
    return np.append(dv, dv[0])
