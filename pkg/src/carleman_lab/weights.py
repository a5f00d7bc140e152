"""Construction and certification of the Carleman weight pairs.

The pipeline, for one subdomain pair:

1. ``build_tilde_phi``: a positive C2 profile on Omega2 vanishing on Gamma2
   whose critical points end up inside omega2 (directly placed in 1D,
   flow-relocated in 2D).
2. ``base_xi_hat`` + ``interface_scaling``: a base profile on Omega1 and the
   scaling factor sigma = sqrt(QF_tilde / QF_hat) blended to 1 away from S,
   so that xi = sigma * xi_hat matches the conormal energies
   sum a^ij xi_i xi_j = sum atilde^ij phitilde_i phitilde_j exactly on S.
3. A seeded Morse tilt blended through the boundary cutoff chi isolates the
   critical points of xi without touching boundary values, and
   ``relocate_critical_points`` composes with time-1 flows of tube-supported
   constant transport fields to move every critical point onto a prescribed
   target inside omega1.
4. Time-dependent coefficients: ``pick_slab_count`` chooses the slab count L
   from the certified constants (c1, c2) and the C1 modulus of xi, and the
   construction is repeated per slab from xi(t_l, .).

``verify_weight_conditions`` certifies the four structural conditions
(positivity, boundary vanishing, gradient floor outside omega_i, interface
matching) on the grid and is the module's acceptance gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateNormalError,
    FlowIntegrationError,
    NeighborhoodTooThinError,
    PreconditionError,
    ResolutionError,
    RoutingError,
)
from .fields import (
    SpaceTimeField,
    SpatialField,
    TubeBump,
    as_points,
    dist_decay,
    dist_decay_d,
)
from .geometry import (
    LABEL_INTERIOR,
    DiffusionPair,
    Grid,
    Region,
    SubGrid,
)
from .theta import SlabPartition

Array = np.ndarray

FLOW_STEPS = 100  # fixed RK4 step count per unit flow time
TOL_CRIT_REL = 1e-6  # |grad| threshold (relative to max) for critical points


# ---------------------------------------------------------------------------
# closed-form profiles
# ---------------------------------------------------------------------------


def exp_parabola(r0: float, r1: float, vertex: float, amplitude: float = 1.0) -> dict:
    """1D profile (x-r0)(r1-x)e^{c(x-r0)} with its critical point at ``vertex``.

    Vanishes at r0 and r1 with nonzero slopes; c = 0 when the vertex is the
    midpoint, recovering the plain parabola.  Returns value/deriv closures
    on the x coordinate (used as a factor of 1D/strip fields).
    """
    if not r0 < vertex < r1:
        raise PreconditionError("vertex must lie strictly inside (r0, r1)")
    c = 1.0 / (r1 - vertex) - 1.0 / (vertex - r0)
    # normalize so the profile value at the vertex equals `amplitude`
    raw_peak = (vertex - r0) * (r1 - vertex) * math.exp(c * (vertex - r0))
    s = amplitude / raw_peak

    def val(x):
        return s * (x - r0) * (r1 - x) * np.exp(c * (x - r0))

    def dval(x):
        e = np.exp(c * (x - r0))
        a = (x - r0) * (r1 - x)
        da = (r1 - x) - (x - r0)
        return s * (da + c * a) * e

    def d2val(x):
        e = np.exp(c * (x - r0))
        a = (x - r0) * (r1 - x)
        da = (r1 - x) - (x - r0)
        return s * (-2.0 + 2.0 * c * da + c * c * a) * e

    return {"val": val, "d": dval, "d2": d2val, "c": c}


def profile_1d_field(prof: dict, dim: int, axis: int = 0) -> SpatialField:
    """Lift a 1D profile to a SpatialField acting on coordinate ``axis``."""

    def f(x):
        return prof["val"](x[:, axis])

    def df(x):
        g = np.zeros_like(x)
        g[:, axis] = prof["d"](x[:, axis])
        return g

    def d2f(x):
        h = np.zeros((x.shape[0], dim, dim))
        h[:, axis, axis] = prof["d2"](x[:, axis])
        return h

    return SpatialField(dim, f, df, d2f)


def cosine_modulation(
    dim: int, axis: int, period: float, center: float, depth: float
) -> SpatialField:
    """1 + depth*cos(2 pi (x_axis - center)/period), positive for |depth|<1."""
    if abs(depth) >= 1.0:
        raise PreconditionError("modulation depth must satisfy |depth| < 1")
    w = 2.0 * math.pi / period

    def f(x):
        return 1.0 + depth * np.cos(w * (x[:, axis] - center))

    def df(x):
        g = np.zeros_like(x)
        g[:, axis] = -depth * w * np.sin(w * (x[:, axis] - center))
        return g

    def d2f(x):
        h = np.zeros((x.shape[0], dim, dim))
        h[:, axis, axis] = -depth * w * w * np.cos(w * (x[:, axis] - center))
        return h

    return SpatialField(dim, f, df, d2f)


def radial_profile_field(
    center: Array, fun, dfun, d2fun
) -> SpatialField:
    """Field g(|x-center|) with closed-form radial derivatives (2D)."""
    c = np.asarray(center, dtype=float)

    def f(x):
        return fun(np.hypot(x[:, 0] - c[0], x[:, 1] - c[1]))

    def df(x):
        z = x - c[None, :]
        r = np.hypot(z[:, 0], z[:, 1])
        r = np.where(r == 0.0, 1.0, r)
        return (dfun(r) / r)[:, None] * z

    def d2f(x):
        z = x - c[None, :]
        r = np.hypot(z[:, 0], z[:, 1])
        r = np.where(r == 0.0, 1.0, r)
        er = z / r[:, None]
        eye = np.eye(2)[None, :, :]
        proj = er[:, :, None] * er[:, None, :]
        return d2fun(r)[:, None, None] * proj + (dfun(r) / r)[:, None, None] * (
            eye - proj
        )

    return SpatialField(2, f, df, d2f)


# ---------------------------------------------------------------------------
# subdomain context (what relocation and certification need to know)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SideContext:
    """Grid-side bundle: node set, boundary distances, spacing."""

    grid: Grid
    side: int  # 1 or 2

    @property
    def sub(self) -> SubGrid:
        return self.grid.sub1 if self.side == 1 else self.grid.sub2

    @property
    def h(self) -> float:
        hs = [self.sub.h]
        if self.grid.hy is not None:
            hs.append(self.grid.hy)
        return min(hs)

    def interior_points(self) -> Array:
        return self.sub.points[self.sub.label == LABEL_INTERIOR]

    def dist_to_gamma(self, pts) -> Array:
        return self.grid.dist_to_gamma(pts, self.side)

    def contains(self, pts) -> Array:
        """Strict interior membership of the subdomain."""
        pts = as_points(pts, self.grid.spec.dimension)
        d = self.dist_to_gamma(pts)
        inside = d > 0
        # distance to Gamma_i is unsigned; also require the correct side of S
        if self.grid.kind in ("interval", "strip"):
            xs = self.grid.spec.interface.x
            inside &= pts[:, 0] < xs if self.side == 1 else pts[:, 0] > xs
            if self.grid.kind == "interval":
                x0, x1 = self.grid.spec.extent
            else:
                (x0, x1), _ = self.grid.spec.extent
            inside &= (pts[:, 0] > x0) & (pts[:, 0] < x1)
        else:
            c = self.grid.spec.interface
            r = np.hypot(pts[:, 0] - c.cx, pts[:, 1] - c.cy)
            if self.side == 2:
                inside &= r < c.r
            else:
                inside &= (r > c.r) & (r < c.r + 1e300)
        return inside


# ---------------------------------------------------------------------------
# critical point detection
# ---------------------------------------------------------------------------


def _fd_jacobian(gradf: Callable[[Array], Array], x: Array, step: float) -> Array:
    """Central-difference Jacobian of a gradient closure at points (m, d)."""
    m, d = x.shape
    jac = np.zeros((m, d, d))
    for k in range(d):
        dx = np.zeros(d)
        dx[k] = step
        jac[:, :, k] = (gradf(x + dx) - gradf(x - dx)) / (2.0 * step)
    return jac


def detect_critical_points(
    field: SpaceTimeField,
    t: float,
    ctx: SideContext,
    n_seeds: int = 40,
    newton_steps: int = 60,
) -> Array:
    """Grid-detected critical points of ``field(t, .)`` inside the subdomain.

    Nodes with the smallest |grad| seed a Newton polish on the analytic
    gradient (finite-difference Jacobian); converged points are deduped and
    kept when |grad| < 1e-6 * max |grad| over the grid.
    Returns an (m, dim) array sorted lexicographically (deterministic).
    """
    pts = ctx.interior_points()
    g = field.grad(t, pts)
    gn = np.linalg.norm(g, axis=1)
    gmax = float(gn.max())
    if gmax == 0.0:
        raise PreconditionError("field gradient vanishes identically")
    order = np.argsort(gn, kind="stable")[:n_seeds]
    seeds = pts[order]
    h = ctx.h
    step = 1e-6 * max(1.0, float(np.abs(pts).max()))
    found = []
    for s in seeds:
        x = s.copy()[None, :]
        ok = True
        for _ in range(newton_steps):
            gx = field.grad(t, x)
            if np.linalg.norm(gx) < 1e-13 * gmax:
                break
            jac = _fd_jacobian(lambda p: field.grad(t, p), x, step)
            try:
                dx = np.linalg.solve(jac[0], gx[0])
            except np.linalg.LinAlgError:
                ok = False
                break
            if not np.all(np.isfinite(dx)):
                ok = False
                break
            # damped step, capped at one cell per iteration
            nrm = np.linalg.norm(dx)
            if nrm > h:
                dx = dx * (h / nrm)
            x = x - dx
            if not ctx.contains(x)[0]:
                ok = False
                break
            if nrm < 1e-14:
                break
        if not ok or not ctx.contains(x)[0]:
            continue
        if np.linalg.norm(field.grad(t, x)) >= TOL_CRIT_REL * gmax:
            continue
        found.append(x[0])
    if not found:
        return np.zeros((0, ctx.grid.spec.dimension))
    found = np.array(found)
    # dedupe within a quarter cell
    keep: List[int] = []
    for i in range(found.shape[0]):
        if all(np.linalg.norm(found[i] - found[j]) > 0.25 * h for j in keep):
            keep.append(i)
    out = found[keep]
    order = np.lexsort(out.T[::-1])
    return out[order]


def critical_points_isolated(
    field: SpaceTimeField, t: float, ctx: SideContext
) -> bool:
    """Grid isolation check: connected clusters of low-|grad| nodes must
    have diameter <= 2 cells (degenerate ridges form long clusters)."""
    pts = ctx.interior_points()
    g = np.linalg.norm(field.grad(t, pts), axis=1)
    mask = g < 0.02 * g.max()
    low = pts[mask]
    if low.shape[0] == 0:
        return True
    h = ctx.h
    n = low.shape[0]
    if n > 400:
        return False  # an extended near-critical set is not isolated
    # union-find clustering by <=1.5h adjacency
    parent = list(range(n))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        d = np.linalg.norm(low - low[i], axis=1)
        for j in np.flatnonzero(d < 1.5 * h):
            ri, rj = root(i), root(int(j))
            if ri != rj:
                parent[rj] = ri
    clusters: dict = {}
    for i in range(n):
        clusters.setdefault(root(i), []).append(i)
    for idx in clusters.values():
        c = low[idx]
        if np.linalg.norm(c.max(axis=0) - c.min(axis=0)) > 2.0 * h + 1e-12:
            return False
    return True


# ---------------------------------------------------------------------------
# Morse tilt
# ---------------------------------------------------------------------------

TILT_LADDER = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 0.0)


def seeded_tilt(ctx: SideContext, seed: int) -> SpatialField:
    """Unit-scale generic tilt direction, periodic-aware on strips."""
    rng = np.random.default_rng(seed)
    dim = ctx.grid.spec.dimension
    if dim == 1:
        wx = 1.0 if rng.random() < 0.5 else -1.0

        def f(x):
            return wx * x[:, 0]

        def df(x):
            g = np.zeros_like(x)
            g[:, 0] = wx
            return g

        return SpatialField(1, f, df, lambda x: np.zeros((x.shape[0], 1, 1)))
    w = rng.normal(size=2)
    w /= np.linalg.norm(w)
    if ctx.grid.kind == "strip":
        _, (y0, y1) = ctx.grid.spec.extent
        ly = y1 - y0
        yr = y0 + rng.random() * ly
        k = 2.0 * math.pi / ly

        def f(x):
            return w[0] * x[:, 0] + w[1] * np.sin(k * (x[:, 1] - yr))

        def df(x):
            g = np.zeros_like(x)
            g[:, 0] = w[0]
            g[:, 1] = w[1] * k * np.cos(k * (x[:, 1] - yr))
            return g

        return SpatialField(2, f, df, None)

    def f(x):
        return x @ w

    def df(x):
        return np.broadcast_to(w, x.shape).copy()

    return SpatialField(2, f, df, None)


def morse_blend(
    xi: SpaceTimeField,
    t_ref: float,
    chi: SpatialField,
    ctx: SideContext,
    seed: int,
) -> Tuple[SpaceTimeField, float]:
    """rho = xi_k + chi (xi - xi_k) with xi_k = xi(t_ref,.) + eps * tilt.

    chi = 1 near Gamma (so boundary values and the interface matching are
    those of xi, for every t) and 0 away from it (where rho is the tilted,
    time-independent Morse surrogate).  The tilt size is the smallest in
    {1e-2 ... 1e-10, 0} whose grid critical points are isolated.
    """
    tilt = seeded_tilt(ctx, seed)
    dim = ctx.grid.spec.dimension

    def make_rho(eps: float) -> SpaceTimeField:
        def f(t, x):
            xk = xi.value(t_ref, x) + eps * tilt.value(x)
            return xk + chi.value(x) * (xi.value(t, x) - xk)

        def df(t, x):
            xk = xi.value(t_ref, x) + eps * tilt.value(x)
            gk = xi.grad(t_ref, x) + eps * tilt.grad(x)
            c = chi.value(x)[:, None]
            return (
                gk
                + chi.grad(x) * (xi.value(t, x) - xk)[:, None]
                + c * (xi.grad(t, x) - gk)
            )

        def ft(t, x):
            return chi.value(x) * xi.dt(t, x)

        return SpaceTimeField(dim, f, df, None, ft)

    best = None
    for eps in TILT_LADDER:
        rho = make_rho(eps)
        if critical_points_isolated(rho, t_ref, ctx):
            best = (eps, rho)
    if best is None:
        raise ResolutionError(
            "no tilt in the ladder isolates the critical points at this resolution"
        )
    return best[1], best[0]


# ---------------------------------------------------------------------------
# relocation flows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SegmentFlow:
    """Time-1 flow of V = bump * eta with constant eta = end - start."""

    bump: TubeBump
    eta: Array

    def apply(self, x: Array, jac: Optional[Array]):
        h = 1.0 / FLOW_STEPS
        eta = self.eta

        def vel(p):
            return self.bump.value(p)[:, None] * eta[None, :]

        def dvel(p):
            # DV_{pq} = eta_p d_q bump
            return eta[None, :, None] * self.bump.grad(p)[:, None, :]

        for _ in range(FLOW_STEPS):
            k1 = vel(x)
            k2 = vel(x + 0.5 * h * k1)
            k3 = vel(x + 0.5 * h * k2)
            k4 = vel(x + h * k3)
            if jac is not None:
                j1 = dvel(x) @ jac
                j2 = dvel(x + 0.5 * h * k1) @ (jac + 0.5 * h * j1)
                j3 = dvel(x + 0.5 * h * k2) @ (jac + 0.5 * h * j2)
                j4 = dvel(x + h * k3) @ (jac + h * j3)
                jac = jac + (h / 6.0) * (j1 + 2 * j2 + 2 * j3 + j4)
            x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise FlowIntegrationError("flow produced non-finite points")
        return x, jac


@dataclass(frozen=True)
class FlowMap:
    """g = S_1 o S_2 o ... o S_m (S_m applied first), with Jacobians."""

    flows: tuple  # tuple of SegmentFlow, outermost first

    def apply(self, x: Array, with_jac: bool = False):
        x = np.array(x, dtype=float)
        jac = None
        if with_jac:
            d = x.shape[1]
            jac = np.broadcast_to(np.eye(d), (x.shape[0], d, d)).copy()
        for flow in reversed(self.flows):
            x, jac = flow.apply(x, jac)
        return (x, jac) if with_jac else x


def _segment_distance(a0, a1, b0, b1) -> float:
    """Minimal distance between two segments, by dense parameter sampling
    (adequate at grid scale; segments here have grid-size lengths)."""
    s = np.linspace(0.0, 1.0, 33)
    pa = a0[None, :] + s[:, None] * (a1 - a0)[None, :]
    pb = b0[None, :] + s[:, None] * (b1 - b0)[None, :]
    d = np.linalg.norm(pa[:, None, :] - pb[None, :, :], axis=2)
    return float(d.min())


def _route_curves(
    crits: Array, targets: Array, ctx: SideContext, delta1: float
) -> List[List[Tuple[Array, Array]]]:
    """Choose pairwise-disjoint curves target -> critical point.

    Straight segments when possible; otherwise a single-waypoint detour per
    curve, scanned deterministically.  Each curve is a list of legs
    (start, end).  Raises RoutingError when no disjoint configuration exists.
    """
    m = crits.shape[0]
    dim = crits.shape[1]
    # deterministic matching: lexicographic order on both sides
    order_c = np.lexsort(crits.T[::-1])
    order_t = np.lexsort(targets.T[::-1])
    pairs = [(targets[order_t[i]], crits[order_c[i]]) for i in range(m)]

    if dim == 1:
        intervals = sorted(
            (min(a[0], b[0]), max(a[0], b[0])) for a, b in pairs
        )
        for (l0, r0), (l1, r1) in zip(intervals, intervals[1:]):
            if r0 >= l1:
                raise RoutingError(
                    "relocation intervals overlap; targets and critical points interleave"
                )
        return [[(a, b)] for a, b in pairs]

    def curves_ok(curves) -> bool:
        legs = [(c, leg) for c, cur in enumerate(curves) for leg in cur]
        for i in range(len(legs)):
            for j in range(i + 1, len(legs)):
                ci, (a0, a1) = legs[i]
                cj, (b0, b1) = legs[j]
                if ci == cj:
                    continue
                if _segment_distance(a0, a1, b0, b1) < 4.0 * ctx.h:
                    return False
        # legs must stay clear of the boundary collar
        for _, (a0, a1) in legs:
            s = np.linspace(0, 1, 17)
            p = a0[None, :] + s[:, None] * (a1 - a0)[None, :]
            if np.any(ctx.dist_to_gamma(p) <= delta1 + 2.0 * ctx.h):
                return False
        return True

    straight = [[(a, b)] for a, b in pairs]
    if curves_ok(straight):
        return straight
    # single-waypoint detours, greedy deterministic scan
    for bend in range(m):
        a, b = pairs[bend]
        mid = 0.5 * (a + b)
        d = b - a
        perp = np.array([-d[1], d[0]])
        nrm = np.linalg.norm(perp)
        if nrm == 0.0:
            continue
        perp /= nrm
        for k in (1, -1, 2, -2, 3, -3):
            w = mid + perp * (k * 3.0 * ctx.h)
            candidate = list(straight)
            candidate[bend] = [(a, w), (w, b)]
            if np.all(ctx.contains(w[None, :])) and curves_ok(candidate):
                return candidate
    raise RoutingError("relocation curves cannot be made pairwise disjoint")


@dataclass(frozen=True)
class RelocationResult:
    field: SpaceTimeField
    flow: Optional[FlowMap]
    critical_points: Array  # detected on the input field
    targets: Array
    tube_radius: float
    delta1: float
    tilt_eps: float = 0.0


def relocate_critical_points(
    rho: SpaceTimeField,
    targets: Array,
    ctx: SideContext,
    delta1: float,
    t_ref: Optional[float] = None,
) -> RelocationResult:
    """Compose rho with tube flows so its critical points land on targets.

    Preconditions: the detected critical points of rho lie at distance
    > delta1 from Gamma; targets are pairwise distinct interior points of
    omega_i (the caller chooses them there).  With no critical points the
    identity map is returned and the field is rho itself.
    """
    if t_ref is None:
        ta = float(ctx.grid.times[0])
        tb = float(ctx.grid.times[-1])
        t_ref = 0.5 * (ta + tb)
    crits = detect_critical_points(rho, t_ref, ctx)
    m = crits.shape[0]
    targets = as_points(targets, ctx.grid.spec.dimension)
    if m == 0:
        return RelocationResult(rho, None, crits, targets[:0], 0.0, delta1)
    if targets.shape[0] < m:
        raise PreconditionError(
            f"{m} critical points detected but only {targets.shape[0]} targets given"
        )
    targets = targets[:m]
    if m >= 2:
        dmin = min(
            np.linalg.norm(targets[i] - targets[j])
            for i in range(m)
            for j in range(i + 1, m)
        )
        if dmin < 1e-12:
            raise PreconditionError("targets must be pairwise distinct")
    dist_crit = ctx.dist_to_gamma(crits)
    if np.any(dist_crit <= delta1):
        raise PreconditionError(
            "critical points intrude into the boundary collar O_delta1(Gamma)"
        )

    curves = _route_curves(crits, targets, ctx, delta1)

    # tube radius: a third of the tightest clearance in play (leg lengths,
    # collar clearance, and distances between legs of different curves)
    clearances = []
    legs_by_curve = [(ci, leg) for ci, cur in enumerate(curves) for leg in cur]
    for i, (ci, (a0, a1)) in enumerate(legs_by_curve):
        clearances.append(float(np.linalg.norm(a1 - a0)))
        s = np.linspace(0, 1, 17)
        p = a0[None, :] + s[:, None] * (a1 - a0)[None, :]
        clearances.append(float(ctx.dist_to_gamma(p).min() - delta1))
        for cj, (b0, b1) in legs_by_curve[i + 1 :]:
            if cj == ci:
                continue  # legs of one curve share their waypoint
            clearances.append(_segment_distance(a0, a1, b0, b1))
    radius = max(min(clearances) / 3.0, 0.0)
    if radius < 2.0 * ctx.h / 3.0:
        raise ResolutionError(
            "relocation tubes thinner than the grid; refine or enlarge omega_i"
        )

    flows = []
    for cur in curves:
        for a0, a1 in cur:
            flows.append(SegmentFlow(TubeBump(a0, a1, radius), a1 - a0))
    # curve order: one composite flow per curve; legs of a curve are applied
    # start-leg first, so list them innermost-last.
    flow_map = FlowMap(tuple(flows[::-1]))

    dim = ctx.grid.spec.dimension

    def f(t, x):
        return rho.value(t, flow_map.apply(x))

    def df(t, x):
        g, jac = flow_map.apply(x, with_jac=True)
        return np.einsum("mij,mi->mj", jac, rho.grad(t, g))

    def ft(t, x):
        return rho.dt(t, flow_map.apply(x))

    phi = SpaceTimeField(dim, f, df, None, ft)

    # certify the flowed targets land on the critical points (injection)
    img = flow_map.apply(np.array(targets, dtype=float))
    # match against the routing order
    order_c = np.lexsort(crits.T[::-1])
    order_t = np.lexsort(targets.T[::-1])
    err = np.linalg.norm(img[order_t] - crits[order_c], axis=1).max()
    if err > 1e-6 * max(1.0, float(np.abs(crits).max())):
        raise FlowIntegrationError(
            f"flow does not carry targets onto critical points (err {err:.2e})"
        )
    return RelocationResult(phi, flow_map, crits, targets, radius, delta1)


# ---------------------------------------------------------------------------
# boundary cutoff and collar width
# ---------------------------------------------------------------------------


def boundary_cutoff(ctx: SideContext, delta1: float) -> SpatialField:
    """chi in C2: 1 on the delta1/2 collar of Gamma, 0 beyond delta1."""
    dim = ctx.grid.spec.dimension
    grid = ctx.grid
    side = ctx.side

    def f(x):
        d = grid.dist_to_gamma(as_points(x, dim), side)
        return dist_decay(d, delta1 / 2.0, delta1)

    def df(x):
        pts = as_points(x, dim)
        d = grid.dist_to_gamma(pts, side)
        dd = dist_decay_d(d, delta1 / 2.0, delta1)
        return dd[:, None] * _grad_dist_to_gamma(grid, side, pts)

    return SpatialField(dim, f, df, None)


def _grad_dist_to_gamma(grid: Grid, side: int, pts: Array) -> Array:
    """Gradient of the distance to Gamma_i (away from the medial axis)."""
    dim = grid.spec.dimension
    g = np.zeros((pts.shape[0], dim))
    if grid.kind in ("interval", "strip"):
        xs = grid.spec.interface.x
        if grid.kind == "interval":
            x0, x1 = grid.spec.extent
        else:
            (x0, x1), _ = grid.spec.extent
        x = pts[:, 0]
        if side == 1:
            left = x - x0
            right = xs - x
            g[:, 0] = np.where(left < right, 1.0, -1.0)
        else:
            left = x - xs
            right = x1 - x
            g[:, 0] = np.where(left < right, 1.0, -1.0)
        return g
    c = grid.spec.interface
    z = pts - np.array([c.cx, c.cy])[None, :]
    r = np.hypot(z[:, 0], z[:, 1])
    r = np.where(r == 0.0, 1.0, r)
    er = z / r[:, None]
    if side == 2:
        return -er  # distance to S = r_S - r grows toward the center
    r_out = grid._disk_router()
    din = r - c.r
    dout = r_out - r
    sign = np.where(din < dout, 1.0, -1.0)
    return sign[:, None] * er


def collar_width(ctx: SideContext, crits: Array, omega_i: Region) -> float:
    """delta1: boundary collar clear of critical points (2 cells), capped so
    the collar misses closure(omega_i)."""
    h = ctx.h
    grid = ctx.grid
    pts = ctx.sub.points
    dim = grid.spec.dimension
    in_omega = omega_i.contains(pts, dim, closed=True, tol=1e-12)
    if not in_omega.any():
        raise PreconditionError("omega_i contains no grid node")
    d_omega = float(ctx.dist_to_gamma(pts[in_omega]).min())
    cap = d_omega - h
    if crits.shape[0]:
        cap = min(cap, float(ctx.dist_to_gamma(crits).min()) - 2.0 * h)
    if cap < 2.0 * h:
        raise ResolutionError(
            "no admissible boundary collar: critical points or omega_i too close to Gamma"
        )
    return min(cap, 0.45 * _subdomain_width(ctx))


def _subdomain_width(ctx: SideContext) -> float:
    grid = ctx.grid
    if grid.kind in ("interval", "strip"):
        xs = grid.spec.interface.x
        if grid.kind == "interval":
            x0, x1 = grid.spec.extent
        else:
            (x0, x1), _ = grid.spec.extent
        return xs - x0 if ctx.side == 1 else x1 - xs
    c = grid.spec.interface
    return (grid._disk_router() - c.r) if ctx.side == 1 else c.r
