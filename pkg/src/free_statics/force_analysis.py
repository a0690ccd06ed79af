"""Force zonotopes, control authority, inverse statics and workspace sweeps.

The set of wrenches an assembly can exert with pressures in the box
[0, p_max] is a zonotope: the image of the box under the transposed assembly
Jacobian. It is built here by enumerating all 2^n pressure corners and taking
the convex hull, which is exact at the actuator counts this targets (n <= 20).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .assembly import Assembly, PlatformState, assembly_jacobian, dof_indices
from .errors import (
    DimensionMismatch,
    KinematicsInvalid,
    TooManyFrees,
    ValidationError,
    WrongDimension,
)

HULL_TOL = 1e-9  # relative to the largest generator norm
MAX_FREES = 20  # 2^n corner enumeration guard
COLLAPSE_TOL = 1e-6  # newtons of attainable contraction treated as zero


@dataclass(frozen=True)
class Zonotope:
    """Attainable wrench set at one state, projected onto selected components.

    ``generators`` holds one row per actuator: its projected Jacobian row
    scaled by its maximum pressure. ``vertices`` is the hull of all corner
    pressure images; for two selected components it is ordered
    counterclockwise starting from the lexicographic minimum. ``scale`` is
    the largest generator norm and anchors all tolerances.
    """

    dofs: tuple
    generators: np.ndarray
    vertices: np.ndarray
    center: np.ndarray
    scale: float

    @property
    def dim(self) -> int:
        return self.generators.shape[1]


@dataclass(frozen=True)
class PressureSolution:
    """Result of inverse statics: pressures, wrench residual, feasibility."""

    pressures: np.ndarray
    residual: float
    feasible: bool


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points: np.ndarray, tol: float) -> np.ndarray:
    """Monotone-chain convex hull.

    Returns vertices counterclockwise starting at the lexicographic minimum;
    points whose turn is within ``tol`` of collinear are dropped, so the
    output is strictly convex at that tolerance. Degenerate inputs yield a
    single point or a two-point segment.
    """
    pts = np.unique(points, axis=0)
    if len(pts) == 1:
        return pts
    seq = [tuple(p) for p in pts]

    def build(ordered):
        out = []
        for p in ordered:
            while len(out) > 1 and _cross(out[-2], out[-1], p) <= tol:
                out.pop()
            out.append(p)
        return out

    lower = build(seq)
    upper = build(seq[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _corner_images(generators: np.ndarray) -> np.ndarray:
    """All 2^n corner pressure images, built by doubling to bound peak memory."""
    images = np.zeros((1, generators.shape[1]))
    for g in generators:
        images = np.vstack([images, images + g])
    return images


def zonotope_from_generators(generators, dofs=("Fz", "Mz")) -> Zonotope:
    """Build the zonotope spanned by segments [0, g_i] via corner enumeration."""
    gens = np.atleast_2d(np.asarray(generators, dtype=float))
    dofs = tuple(dofs)
    if gens.shape[1] != len(dofs):
        raise DimensionMismatch(
            f"generators have {gens.shape[1]} components but {len(dofs)} dofs selected"
        )
    n, k = gens.shape
    if n > MAX_FREES:
        raise TooManyFrees(f"{n} generators exceed the corner enumeration guard of {MAX_FREES}")
    norms = np.linalg.norm(gens, axis=1)
    scale = float(norms.max()) if n else 0.0
    center = 0.5 * gens.sum(axis=0)
    if k == 1:
        lo = float(np.minimum(gens, 0.0).sum())
        hi = float(np.maximum(gens, 0.0).sum())
        vertices = np.array([[lo]]) if lo == hi else np.array([[lo], [hi]])
    elif k == 2:
        vertices = _hull_2d(_corner_images(gens), HULL_TOL * scale * scale)
    else:
        images = _corner_images(gens)
        try:
            from scipy.spatial import ConvexHull

            hull = ConvexHull(images)
            vertices = images[hull.vertices]
        except Exception:
            # Lower-dimensional image; keep the distinct corner points.
            vertices = np.unique(images, axis=0)
    vertices = np.array(vertices, dtype=float)
    vertices.setflags(write=False)
    gens = gens.copy()
    gens.setflags(write=False)
    return Zonotope(dofs=dofs, generators=gens, vertices=vertices, center=center, scale=scale)


def force_zonotope(assembly: Assembly, state: PlatformState, dofs=None) -> Zonotope:
    """Zonotope of attainable wrenches at a state, projected onto ``dofs``."""
    dofs = tuple(dofs) if dofs is not None else assembly.dofs
    indices = dof_indices(dofs)
    if len(assembly.frees) > MAX_FREES:
        raise TooManyFrees(
            f"{len(assembly.frees)} actuators exceed the corner enumeration "
            f"guard of {MAX_FREES}"
        )
    jacobian = assembly_jacobian(assembly, state)
    generators = jacobian[:, list(indices)] * assembly.p_max()[:, None]
    return zonotope_from_generators(generators, dofs)


def _segment_distance(a, b, p) -> float:
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    p = np.asarray(p, float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def _polygon_distance(vertices: np.ndarray, point: np.ndarray) -> float:
    m = len(vertices)
    if m == 1:
        return float(np.linalg.norm(point - vertices[0]))
    if m == 2:
        return _segment_distance(vertices[0], vertices[1], point)
    inside = all(
        _cross(vertices[i], vertices[(i + 1) % m], point) >= 0.0 for i in range(m)
    )
    if inside:
        return 0.0
    return min(
        _segment_distance(vertices[i], vertices[(i + 1) % m], point) for i in range(m)
    )


def hull_distance(zonotope: Zonotope, point) -> float:
    """Euclidean distance from a point to the attainable set (0 inside)."""
    point = np.asarray(point, dtype=float)
    if point.shape != (zonotope.dim,):
        raise DimensionMismatch(
            f"point has shape {point.shape}, zonotope spans {zonotope.dim} components"
        )
    if zonotope.dim == 1:
        lo = float(zonotope.vertices.min())
        hi = float(zonotope.vertices.max())
        return max(lo - point[0], point[0] - hi, 0.0)
    if zonotope.dim == 2:
        return _polygon_distance(zonotope.vertices, point)
    _, residual = solve_box_lsq(zonotope.generators.T, point, np.ones(len(zonotope.generators)))
    return residual


def contains(zonotope: Zonotope, point, tol=None) -> bool:
    """Whether a point lies within ``tol`` of the attainable set (boundary counts)."""
    if tol is None:
        tol = HULL_TOL * zonotope.scale
    return hull_distance(zonotope, point) <= tol


def zonotope_area(zonotope: Zonotope) -> float:
    """Exact area of a planar zonotope: sum of |det[g_i g_j]| over pairs."""
    if zonotope.dim != 2:
        raise WrongDimension(f"area requires 2 selected components, got {zonotope.dim}")
    gx = zonotope.generators[:, 0]
    gy = zonotope.generators[:, 1]
    cross = gx[:, None] * gy[None, :] - gy[:, None] * gx[None, :]
    return float(np.triu(np.abs(cross), k=1).sum())


def origin_strictly_inside(zonotope: Zonotope, tol=None) -> bool:
    """Whether the origin is strictly interior to the attainable set."""
    if tol is None:
        tol = HULL_TOL * zonotope.scale
    if zonotope.scale == 0.0:
        return False
    if zonotope.dim == 1:
        lo = float(zonotope.vertices.min())
        hi = float(zonotope.vertices.max())
        return lo < -tol and hi > tol
    if zonotope.dim == 2:
        vertices = zonotope.vertices
        m = len(vertices)
        if m < 3:
            return False
        origin = np.zeros(2)
        for i in range(m):
            a = vertices[i]
            b = vertices[(i + 1) % m]
            edge = float(np.linalg.norm(b - a))
            if edge == 0.0 or _cross(a, b, origin) <= tol * edge:
                return False
        return True
    try:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(zonotope.vertices)
    except Exception:
        return False
    # Facet equations normal . x + offset <= 0 inside; at the origin the
    # value reduces to the offset.
    return bool(np.all(hull.equations[:, -1] < -tol))


def full_authority(assembly: Assembly, state: PlatformState, dofs=None) -> bool:
    """Whether positive pressures can exert force in every projected direction.

    True exactly when the generators positively span the projected wrench
    space, i.e. the origin is strictly inside the zonotope boundary. With n
    generators in n dimensions this is never true, which is why antagonistic
    arrangements need at least n+1 actuators.
    """
    return origin_strictly_inside(force_zonotope(assembly, state, dofs))


def generator_extremes(generators: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise (min, max) attainable over the zonotope."""
    lo = np.minimum(generators, 0.0).sum(axis=0)
    hi = np.maximum(generators, 0.0).sum(axis=0)
    return lo, hi


def solve_box_lsq(matrix, target, upper, max_outer=None):
    """Deterministic active-set least squares over the box 0 <= x <= upper.

    Minimizes ||matrix @ x - target||_2. The lowest-index variable with the
    most violated bound gradient enters the free set first, and the free
    subproblem is solved with a minimum-norm least-squares step, so
    rank-deficient systems resolve deterministically. Returns
    ``(x, residual_norm)``; the solution is the global minimizer because the
    problem is convex.
    """
    matrix = np.asarray(matrix, dtype=float)
    target = np.asarray(target, dtype=float)
    upper = np.asarray(upper, dtype=float)
    m, n = matrix.shape
    if target.shape != (m,):
        raise DimensionMismatch(f"target: expected {m} components, got shape {target.shape}")
    if upper.shape != (n,):
        raise DimensionMismatch(f"upper: expected {n} bounds, got shape {upper.shape}")

    x = np.zeros(n)
    on_bound = np.full(n, -1, dtype=int)  # -1 lower, +1 upper, 0 free
    gradient_scale = max(1.0, float(np.abs(matrix.T @ target).max(initial=0.0)))
    kkt_tol = 1e-12 * gradient_scale
    if max_outer is None:
        max_outer = 50 * n + 50

    for _ in range(max_outer):
        gradient = matrix.T @ (target - matrix @ x)
        improvement = np.where(
            on_bound == -1, gradient, np.where(on_bound == 1, -gradient, -np.inf)
        )
        j = int(np.argmax(improvement))
        if improvement[j] <= kkt_tol:
            break
        on_bound[j] = 0

        for _ in range(n + 1):
            free = np.flatnonzero(on_bound == 0)
            if free.size == 0:
                break
            at_upper = on_bound == 1
            rhs = target - matrix[:, at_upper] @ upper[at_upper]
            step, *_ = np.linalg.lstsq(matrix[:, free], rhs, rcond=None)
            below = step < 0.0
            above = step > upper[free]
            if not (below.any() or above.any()):
                x[free] = step
                break
            # Move from the current point toward the step until the first
            # bound blocks, then fix the blocking variable there.
            current = x[free]
            delta = step - current
            with np.errstate(divide="ignore", invalid="ignore"):
                to_lower = np.where(below & (delta != 0.0), (0.0 - current) / delta, np.inf)
                to_upper = np.where(above & (delta != 0.0), (upper[free] - current) / delta, np.inf)
            ratios = np.minimum(to_lower, to_upper)
            blocker = int(np.argmin(ratios))
            alpha = max(float(ratios[blocker]), 0.0)
            x[free] = np.clip(current + alpha * delta, 0.0, upper[free])
            if to_lower[blocker] <= to_upper[blocker]:
                x[free[blocker]] = 0.0
                on_bound[free[blocker]] = -1
            else:
                x[free[blocker]] = upper[free[blocker]]
                on_bound[free[blocker]] = 1

    residual = float(np.linalg.norm(matrix @ x - target))
    return x, residual


def solve_pressures(
    assembly: Assembly, state: PlatformState, target, tol: float = 1e-6, dofs=None
) -> PressureSolution:
    """Pressures whose projected wrench best matches ``target`` inside the box.

    Infeasible targets return the box-constrained least-squares projection,
    so the residual equals the distance from the target to the attainable
    set; ``feasible`` compares that residual against tol * max(1, |target|).
    """
    dofs = tuple(dofs) if dofs is not None else assembly.dofs
    indices = dof_indices(dofs)
    target = np.asarray(target, dtype=float)
    if target.shape != (len(indices),):
        raise DimensionMismatch(
            f"target: expected {len(indices)} components, got shape {target.shape}"
        )
    jacobian = assembly_jacobian(assembly, state)
    matrix = jacobian[:, list(indices)].T
    pressures, residual = solve_box_lsq(matrix, target, assembly.p_max())
    feasible = residual <= tol * max(1.0, float(np.linalg.norm(target)))
    return PressureSolution(pressures=pressures, residual=residual, feasible=feasible)


@dataclass(frozen=True)
class GridAxis:
    """One swept platform coordinate: inclusive range and point count."""

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in ("dl", "dphi"):
            raise ValidationError(f"grid axis: unknown platform coordinate {self.name!r}")
        if self.count < 1:
            raise ValidationError(f"grid axis {self.name}: count must be >= 1, got {self.count}")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepEntry:
    """Zonotope summary at one grid state."""

    state: PlatformState
    verdict: str
    area: float | None
    attainable_min: np.ndarray | None
    attainable_max: np.ndarray | None
    collapsed: bool | None

    @property
    def valid(self) -> bool:
        return self.verdict == "Valid"


@dataclass(frozen=True)
class CollapseLocus:
    """Grid state at the boundary where contraction authority is lost."""

    axis: str
    state: PlatformState


@dataclass(frozen=True)
class SweepReport:
    """Row-major sweep results plus detected collapse boundaries."""

    dofs: tuple
    axes: tuple
    entries: tuple
    collapse_loci: tuple

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(axis.count for axis in self.axes)


def _sweep_state(axes, values) -> PlatformState:
    coords = {"dl": 0.0, "dphi": 0.0}
    for axis, value in zip(axes, values):
        coords[axis.name] = float(value)
    return PlatformState(dl=coords["dl"], dphi=coords["dphi"])


def _evaluate_state(assembly, state, dofs, fz_pos, collapse_tol) -> SweepEntry:
    try:
        zonotope = force_zonotope(assembly, state, dofs)
    except KinematicsInvalid as exc:
        return SweepEntry(
            state=state,
            verdict=exc.verdict,
            area=None,
            attainable_min=None,
            attainable_max=None,
            collapsed=None,
        )
    lo, hi = generator_extremes(zonotope.generators)
    area = zonotope_area(zonotope) if zonotope.dim == 2 else None
    collapsed = bool(lo[fz_pos] >= -collapse_tol) if fz_pos is not None else None
    return SweepEntry(
        state=state,
        verdict="Valid",
        area=area,
        attainable_min=lo,
        attainable_max=hi,
        collapsed=collapsed,
    )


def workspace_sweep(
    assembly: Assembly,
    axes,
    dofs=None,
    collapse_tol: float = COLLAPSE_TOL,
    workers: int = 1,
) -> SweepReport:
    """Evaluate the zonotope over a grid of platform states.

    Invalid states are marked with their violation verdict rather than
    skipped. A state counts as collapsed when the attainable contraction
    force (the minimum of the Fz component over the zonotope) no longer
    reaches below -collapse_tol; the collapse loci are the collapsed states
    adjacent to a non-collapsed neighbor along each grid axis. Evaluation may
    run on ``workers`` threads; the report order is grid order regardless.
    """
    axes = tuple(axes)
    if not axes:
        raise ValidationError("grid: no axes given")
    names = [axis.name for axis in axes]
    if len(set(names)) != len(names):
        raise ValidationError("grid: duplicate axis")
    shape = tuple(axis.count for axis in axes)
    dofs = tuple(dofs) if dofs is not None else assembly.dofs
    dof_indices(dofs)
    fz_pos = dofs.index("Fz") if "Fz" in dofs else None

    axis_values = [axis.values() for axis in axes]
    grids = np.meshgrid(*axis_values, indexing="ij")
    states = [
        _sweep_state(axes, combo)
        for combo in zip(*(grid.ravel() for grid in grids))
    ]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(
                pool.map(
                    lambda s: _evaluate_state(assembly, s, dofs, fz_pos, collapse_tol), states
                )
            )
    else:
        entries = [_evaluate_state(assembly, s, dofs, fz_pos, collapse_tol) for s in states]

    loci = []
    if fz_pos is not None:
        grid_entries = np.empty(shape, dtype=object)
        for flat_index, entry in enumerate(entries):
            grid_entries[np.unravel_index(flat_index, shape)] = entry
        for dim, axis in enumerate(axes):
            for index in np.ndindex(shape):
                if index[dim] + 1 >= shape[dim]:
                    continue
                here = grid_entries[index]
                neighbor_index = list(index)
                neighbor_index[dim] += 1
                there = grid_entries[tuple(neighbor_index)]
                if here.collapsed is None or there.collapsed is None:
                    continue
                if here.collapsed != there.collapsed:
                    collapsed_entry = here if here.collapsed else there
                    locus = CollapseLocus(axis=axis.name, state=collapsed_entry.state)
                    if locus not in loci:  # isolated states border two transitions
                        loci.append(locus)

    return SweepReport(
        dofs=dofs, axes=axes, entries=tuple(entries), collapse_loci=tuple(loci)
    )
