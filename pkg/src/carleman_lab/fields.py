"""Closed-form scalar fields, C2 profile functions, and coefficient tensors.

Conventions used throughout the package:

- Spatial points are arrays of shape ``(m, dim)`` (``dim`` = 1 or 2); scalar
  field values have shape ``(m,)``, gradients ``(m, dim)``, Hessians
  ``(m, dim, dim)``.
- Time enters as a plain float (fields are evaluated one time level at a
  time); coefficient tensors return ``(m, dim, dim)``.
- All derivatives are closed-form closures, never finite differences, so
  that identity and certification residuals sit at rounding level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import PreconditionError, TensorDataError

Array = np.ndarray


def as_points(x, dim: int) -> Array:
    """Coerce input to an (m, dim) float array of evaluation points."""
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    if pts.shape[-1] != dim:
        pts = pts.reshape(-1, dim)
    return pts


# ---------------------------------------------------------------------------
# scalar fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpatialField:
    """Time-independent scalar field with closed-form derivatives."""

    dim: int
    f: Callable[[Array], Array]
    df: Callable[[Array], Array]
    d2f: Optional[Callable[[Array], Array]] = None

    def value(self, x) -> Array:
        return self.f(as_points(x, self.dim))

    def grad(self, x) -> Array:
        return self.df(as_points(x, self.dim))

    def hess(self, x) -> Array:
        if self.d2f is None:
            raise PreconditionError("field has no Hessian closure")
        return self.d2f(as_points(x, self.dim))

    def __mul__(self, other: "SpatialField") -> "SpatialField":
        if self.dim != other.dim:
            raise PreconditionError("field dimensions differ")
        a, b = self, other

        def f(x):
            return a.f(x) * b.f(x)

        def df(x):
            return a.f(x)[:, None] * b.df(x) + b.f(x)[:, None] * a.df(x)

        d2f = None
        if a.d2f is not None and b.d2f is not None:

            def d2f(x):
                fa, fb = a.f(x), b.f(x)
                ga, gb = a.df(x), b.df(x)
                cross = ga[:, :, None] * gb[:, None, :]
                return (
                    fa[:, None, None] * b.d2f(x)
                    + fb[:, None, None] * a.d2f(x)
                    + cross
                    + np.swapaxes(cross, 1, 2)
                )

        return SpatialField(self.dim, f, df, d2f)

    def scaled(self, c: float) -> "SpatialField":
        d2f = None
        if self.d2f is not None:
            d2f = lambda x, s=self: c * s.d2f(x)
        return SpatialField(
            self.dim,
            lambda x, s=self: c * s.f(x),
            lambda x, s=self: c * s.df(x),
            d2f,
        )


@dataclass(frozen=True)
class SpaceTimeField:
    """Scalar field of (t, x) with spatial derivatives and optional d/dt."""

    dim: int
    f: Callable[[float, Array], Array]
    df: Callable[[float, Array], Array]
    d2f: Optional[Callable[[float, Array], Array]] = None
    ft: Optional[Callable[[float, Array], Array]] = None

    def value(self, t: float, x) -> Array:
        return self.f(t, as_points(x, self.dim))

    def grad(self, t: float, x) -> Array:
        return self.df(t, as_points(x, self.dim))

    def hess(self, t: float, x) -> Array:
        if self.d2f is None:
            raise PreconditionError("field has no Hessian closure")
        return self.d2f(t, as_points(x, self.dim))

    def dt(self, t: float, x) -> Array:
        pts = as_points(x, self.dim)
        if self.ft is None:
            return np.zeros(pts.shape[0])
        return self.ft(t, pts)

    @staticmethod
    def from_spatial(field: SpatialField) -> "SpaceTimeField":
        d2f = None
        if field.d2f is not None:
            d2f = lambda t, x, s=field: s.d2f(x)
        return SpaceTimeField(
            field.dim,
            lambda t, x, s=field: s.f(x),
            lambda t, x, s=field: s.df(x),
            d2f,
            ft=lambda t, x, s=field: np.zeros(x.shape[0]),
        )


def constant_spatial(dim: int, c: float) -> SpatialField:
    return SpatialField(
        dim,
        lambda x: np.full(x.shape[0], c),
        lambda x: np.zeros_like(x),
        lambda x: np.zeros((x.shape[0], dim, dim)),
    )


# ---------------------------------------------------------------------------
# C2 piecewise-polynomial profiles
# ---------------------------------------------------------------------------


def smoothstep(u: Array) -> Array:
    """Quintic step: 0 for u<=0, 1 for u>=1, C2 across the joins."""
    u = np.clip(u, 0.0, 1.0)
    return u**3 * (10.0 - 15.0 * u + 6.0 * u**2)


def smoothstep_d(u: Array) -> Array:
    out = np.zeros_like(u)
    inside = (u > 0.0) & (u < 1.0)
    ui = u[inside]
    out[inside] = 30.0 * ui**2 * (1.0 - ui) ** 2
    return out


def plateau(u: Array) -> Array:
    """C2 profile equal to 1 for u<=0 and 0 for u>=1."""
    return 1.0 - smoothstep(u)


def plateau_d(u: Array) -> Array:
    return -smoothstep_d(u)


def dist_decay(d: Array, inner: float, outer: float) -> Array:
    """1 for d<=inner, 0 for d>=outer, C2 ramp in between (d = distance)."""
    if not outer > inner >= 0.0:
        raise PreconditionError("need 0 <= inner < outer")
    return plateau((d - inner) / (outer - inner))


def dist_decay_d(d: Array, inner: float, outer: float) -> Array:
    return plateau_d((d - inner) / (outer - inner)) / (outer - inner)


# ---------------------------------------------------------------------------
# tube bumps for relocation flows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TubeBump:
    """C2 bump equal to 1 on the segment A->B, supported in a tube.

    Built as the product of a cap profile in the axial coordinate and a
    radial profile in the squared perpendicular distance; both coordinates
    are smooth functions of x, so the product is C2 even at the end caps.
    ``radius`` bounds both the tube half-width and the axial cap extension.
    """

    a: Array
    b: Array
    radius: float

    def _coords(self, x: Array):
        e = self.b - self.a
        length = float(np.linalg.norm(e))
        if length == 0.0:
            raise PreconditionError("degenerate segment")
        e = e / length
        rel = x - self.a[None, :]
        xi = rel @ e
        d2 = np.maximum(np.einsum("ij,ij->i", rel, rel) - xi**2, 0.0)
        return e, length, rel, xi, d2

    def value(self, x: Array) -> Array:
        e, length, _, xi, d2 = self._coords(x)
        r = self.radius
        cap = plateau(-xi / r) * plateau((xi - length) / r)
        rad = plateau(d2 / r**2)
        return cap * rad

    def grad(self, x: Array) -> Array:
        e, length, rel, xi, d2 = self._coords(x)
        r = self.radius
        c1 = plateau(-xi / r)
        c2 = plateau((xi - length) / r)
        rad = plateau(d2 / r**2)
        dc1 = plateau_d(-xi / r) * (-1.0 / r)
        dc2 = plateau_d((xi - length) / r) / r
        drad = plateau_d(d2 / r**2) / r**2
        # d(xi)/dx = e ; d(d2)/dx = 2(rel - xi e)
        g_xi = (dc1 * c2 + c1 * dc2) * rad
        g_d2 = c1 * c2 * drad
        return g_xi[:, None] * e[None, :] + g_d2[:, None] * 2.0 * (
            rel - xi[:, None] * e[None, :]
        )


# ---------------------------------------------------------------------------
# coefficient tensors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TensorCoefficient:
    """Symmetric diffusion tensor field a^{ij}(t, x) on one subdomain.

    ``val(t, x)`` returns (m, dim, dim); constructors symmetrize.
    ``dval_dx`` returns (m, dim, dim, dim) with index order [m, k, i, j] for
    d(a^{ij})/dx_k (zero for the spatially constant built-ins); ``dval_dt``
    is the pointwise time derivative.  ``time_dependent`` is advisory.
    """

    dim: int
    val: Callable[[float, Array], Array]
    dval_dx: Optional[Callable[[float, Array], Array]] = None
    dval_dt: Optional[Callable[[float, Array], Array]] = None
    time_dependent: bool = False

    def __call__(self, t: float, x) -> Array:
        pts = as_points(x, self.dim)
        a = np.asarray(self.val(t, pts), dtype=float)
        if not np.all(np.isfinite(a)):
            raise TensorDataError("non-finite tensor entry")
        return a

    def grad_x(self, t: float, x) -> Array:
        pts = as_points(x, self.dim)
        if self.dval_dx is None:
            raise PreconditionError("tensor has no spatial-derivative closure")
        return self.dval_dx(t, pts)

    def dt(self, t: float, x) -> Array:
        pts = as_points(x, self.dim)
        if self.dval_dt is None:
            return np.zeros((pts.shape[0], self.dim, self.dim))
        return self.dval_dt(t, pts)


def _symmetrized(matrix) -> Array:
    m = np.asarray(matrix, dtype=float)
    return 0.5 * (m + m.T)


def constant_tensor(matrix) -> TensorCoefficient:
    m = _symmetrized(matrix)
    dim = m.shape[0]

    def val(t, x):
        return np.broadcast_to(m, (x.shape[0], dim, dim)).copy()

    def dvx(t, x):
        return np.zeros((x.shape[0], dim, dim, dim))

    def dvt(t, x):
        return np.zeros((x.shape[0], dim, dim))

    return TensorCoefficient(dim, val, dvx, dvt, time_dependent=False)


def time_scaled_tensor(
    matrix, g: Callable[[float], float], gprime: Callable[[float], float]
) -> TensorCoefficient:
    """Smooth-in-t scalar multiple g(t) * A of a constant tensor."""
    m = _symmetrized(matrix)
    dim = m.shape[0]

    def val(t, x):
        return g(t) * np.broadcast_to(m, (x.shape[0], dim, dim)).copy()

    def dvx(t, x):
        return np.zeros((x.shape[0], dim, dim, dim))

    def dvt(t, x):
        return gprime(t) * np.broadcast_to(m, (x.shape[0], dim, dim)).copy()

    return TensorCoefficient(dim, val, dvx, dvt, time_dependent=True)


def piecewise_constant_tensor(
    thresholds: Sequence[float], matrices: Sequence
) -> TensorCoefficient:
    """Piecewise-constant in the first coordinate: matrices[i] applies on
    [thresholds[i-1], thresholds[i]) with thresholds strictly increasing
    and one more matrix than threshold."""
    if len(matrices) != len(thresholds) + 1:
        raise PreconditionError("need len(matrices) == len(thresholds) + 1")
    mats = [_symmetrized(m) for m in matrices]
    dim = mats[0].shape[0]
    th = np.asarray(thresholds, dtype=float)

    def val(t, x):
        idx = np.searchsorted(th, x[:, 0], side="right")
        return np.stack([mats[i] for i in idx], axis=0)

    def dvx(t, x):
        return np.zeros((x.shape[0], dim, dim, dim))

    return TensorCoefficient(dim, val, dvx, None, time_dependent=False)


def tabulated_tensor(path, dim: int) -> TensorCoefficient:
    """Load tensor samples from CSV with columns t, x[, y], a11[, a12, a22]
    on a full tensor-product (t, x[, y]) grid; multilinear interpolation."""
    from scipy.interpolate import RegularGridInterpolator

    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    ncoord = 1 + dim
    ncomp = 1 if dim == 1 else 3
    if raw.shape[1] != ncoord + ncomp:
        raise PreconditionError(
            f"tabulated tensor CSV needs {ncoord + ncomp} columns, got {raw.shape[1]}"
        )
    axes = [np.unique(raw[:, k]) for k in range(ncoord)]
    shape = tuple(len(ax) for ax in axes)
    if int(np.prod(shape)) != raw.shape[0]:
        raise PreconditionError("tabulated tensor CSV is not a full tensor grid")
    order = np.lexsort([raw[:, k] for k in range(ncoord - 1, -1, -1)])
    comp_interp = []
    for c in range(ncomp):
        grid_vals = raw[order, ncoord + c].reshape(shape)
        comp_interp.append(
            RegularGridInterpolator(
                axes, grid_vals, bounds_error=False, fill_value=None
            )
        )

    def val(t, x):
        pts = np.column_stack([np.full(x.shape[0], t), x])
        out = np.zeros((x.shape[0], dim, dim))
        if dim == 1:
            out[:, 0, 0] = comp_interp[0](pts)
        else:
            out[:, 0, 0] = comp_interp[0](pts)
            out[:, 0, 1] = out[:, 1, 0] = comp_interp[1](pts)
            out[:, 1, 1] = comp_interp[2](pts)
        return out

    return TensorCoefficient(dim, val, None, None, time_dependent=len(axes[0]) > 1)
