"""Shared fixtures and independent oracles used across the suite.

The oracles here deliberately avoid the library's computation paths: volume
gradients come from central finite differences, hulls from scipy's qhull,
and distances from elementary segment geometry, so they can vouch for the
closed-form and monotone-chain implementations.
"""

import math
import threading
import time

import numpy as np
import pytest

from free_statics import (
    Assembly,
    Deformation,
    FreeDesign,
    Placement,
    PlatformState,
    builtin_config_text,
    derive_geometry,
    enclosed_volume,
    parse_config,
    to_assembly,
)

FD_STEP = 1e-7


def fd_volume_gradient(design, deformation, h=FD_STEP):
    """Central-difference gradient of the enclosed volume."""
    dl, dphi = deformation.dl, deformation.dphi
    d_dl = (
        enclosed_volume(design, Deformation(dl + h, dphi))
        - enclosed_volume(design, Deformation(dl - h, dphi))
    ) / (2.0 * h)
    d_dphi = (
        enclosed_volume(design, Deformation(dl, dphi + h))
        - enclosed_volume(design, Deformation(dl, dphi - h))
    ) / (2.0 * h)
    return np.array([d_dl, d_dphi])


def corner_points(generators):
    """All 2^n sums of generator subsets."""
    generators = np.atleast_2d(np.asarray(generators, float))
    n = len(generators)
    masks = (np.arange(2**n)[:, None] >> np.arange(n)) & 1
    return masks.astype(float) @ generators


def qhull_vertices(points):
    """Hull vertices via scipy (counterclockwise for 2-D), independent of the library."""
    from scipy.spatial import ConvexHull

    points = np.asarray(points, float)
    hull = ConvexHull(points)
    return points[hull.vertices]


def segment_distance(a, b, p):
    a, b, p = (np.asarray(v, float) for v in (a, b, p))
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(max(float((p - a) @ ab / denom), 0.0), 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def polygon_distance(vertices, point):
    """Distance from a point to a convex polygon given as an ordered vertex ring."""
    vertices = np.asarray(vertices, float)
    point = np.asarray(point, float)
    m = len(vertices)
    if m == 1:
        return float(np.linalg.norm(point - vertices[0]))
    if m == 2:
        return segment_distance(vertices[0], vertices[1], point)
    signs = []
    for i in range(m):
        a = vertices[i]
        b = vertices[(i + 1) % m]
        signs.append((b[0] - a[0]) * (point[1] - a[1]) - (b[1] - a[1]) * (point[0] - a[0]))
    if all(s >= 0.0 for s in signs) or all(s <= 0.0 for s in signs):
        return 0.0
    return min(
        segment_distance(vertices[i], vertices[(i + 1) % m], point) for i in range(m)
    )


def shoelace_area(vertices):
    vertices = np.asarray(vertices, float)
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def random_design(rng, name):
    sign = 1.0 if rng.random() < 0.5 else -1.0
    return FreeDesign(
        name=name,
        length=rng.uniform(0.05, 0.2),
        radius=rng.uniform(0.002, 0.012),
        fiber_angle=sign * math.radians(rng.uniform(8.0, 82.0)),
        p_max=rng.uniform(5e4, 2e5),
    )


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_assembly(rng, n=None, dofs=("Fz", "Mz")):
    if n is None:
        n = int(rng.integers(1, 7))
    frees = tuple(
        (
            random_design(rng, f"f{i}"),
            Placement(d=rng.uniform(-0.05, 0.05, 3), axis=random_unit(rng)),
        )
        for i in range(n)
    )
    return Assembly(frees=frees, dofs=dofs)


def random_deformation(rng, design):
    geo = derive_geometry(design)
    slack = geo.fiber_length - design.length
    dl = rng.uniform(-0.3 * design.length, 0.85 * slack)
    winding = 2.0 * math.pi * geo.turns
    dphi = -rng.uniform(-0.5, 0.85) * winding
    return Deformation(dl=dl, dphi=dphi)


def random_valid_state(rng, assembly):
    designs = assembly.designs
    geos = [derive_geometry(d) for d in designs]
    slack = min(g.fiber_length - d.length for g, d in zip(geos, designs))
    dl = rng.uniform(-0.25 * min(d.length for d in designs), 0.6 * slack)
    winding = min(abs(2.0 * math.pi * g.turns) for g in geos)
    dphi = rng.uniform(-0.4, 0.4) * winding
    return PlatformState(dl=dl, dphi=dphi)


@pytest.fixture(scope="session")
def paper_rig_text():
    return builtin_config_text("paper_rig")


@pytest.fixture(scope="session")
def paper_rig(paper_rig_text):
    return parse_config(paper_rig_text)


@pytest.fixture(scope="session")
def rig_assembly(paper_rig):
    return to_assembly(paper_rig)


@pytest.fixture(scope="session")
def live_server_url():
    """A real uvicorn instance of the service on an ephemeral port."""
    uvicorn = pytest.importorskip("uvicorn")
    from free_statics.service import app

    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15.0
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("service did not start")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5.0)
