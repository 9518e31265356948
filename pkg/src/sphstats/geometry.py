"""Points on spheres, axes, and rotations: charts, maps, and projections.

Conventions fixed here and relied on everywhere else:

* a point on S_p is a unit vector in R^q, q = p + 1, last coordinate is the
  polar ("north") axis for charts;
* polar angles are (colatitude theta in [0, pi], longitude phi in [0, 2*pi)),
  with phi reported as 0 at the chart-degenerate poles;
* axes are canonicalized to the closed upper hemisphere (last coordinate
  positive; lexicographic tie-break on the equator);
* quaternions are (w, x, y, z) with the canonical double-cover representative
  having w >= 0 (first nonzero component positive on the w = 0 slice).

Everything is a pure function of its arguments.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "PolarAngles",
    "RotationElement",
    "unit_vector",
    "angle_between",
    "to_polar",
    "from_polar",
    "lambert_project",
    "exp_map_sphere",
    "log_map_sphere",
    "axis_representative",
    "canonical_quat",
    "quat_to_rotation",
    "rotation_to_quat",
    "rotation_aligning",
]

_UNIT_TOL = 1e-12


class PolarAngles(NamedTuple):
    theta: float  # colatitude, [0, pi]
    phi: float  # longitude, [0, 2*pi)


def unit_vector(coords) -> np.ndarray:
    """Normalizing constructor for points on S_p; rejects near-zero input."""
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise ValueError("a direction needs at least two Cartesian components")
    norm = float(np.linalg.norm(v))
    if norm < 1e-12 or not math.isfinite(norm):
        raise ValueError("cannot normalize a (near-)zero or non-finite vector")
    return v / norm


def _check_unit(v: np.ndarray, name: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if abs(float(v @ v) - 1.0) > 64 * _UNIT_TOL:
        raise ValueError(f"{name} is not unit length; build it with unit_vector()")
    return v


def angle_between(a, b) -> float:
    """Angle in [0, pi] between two unit vectors of equal dimension."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return math.acos(min(1.0, max(-1.0, float(a @ b))))


def to_polar(v) -> PolarAngles:
    """Spherical polar coordinates of a unit vector on S_2.

    Inverse of ``from_polar`` away from the poles; at theta in {0, pi} the
    longitude is degenerate and reported as 0.
    """
    v = _check_unit(v)
    if v.shape != (3,):
        raise ValueError("polar coordinates are defined for S_2 (3 components)")
    theta = math.acos(min(1.0, max(-1.0, float(v[2]))))
    if theta == 0.0 or theta == math.pi:
        return PolarAngles(theta, 0.0)
    phi = math.atan2(float(v[1]), float(v[0])) % (2.0 * math.pi)
    return PolarAngles(theta, phi)


def from_polar(angles: PolarAngles) -> np.ndarray:
    theta, phi = angles
    s = math.sin(theta)
    return np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)])


def lambert_project(angles: PolarAngles):
    """Lambert equal-area projection (2 sin(theta/2) cos phi, 2 sin(theta/2) sin phi).

    Area elements are preserved exactly; the image of the sphere is the disc
    of radius 2, with the projection center (theta = 0) at the origin.
    """
    theta, phi = angles
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"colatitude must be in [0, pi], got {theta}")
    r = 2.0 * math.sin(0.5 * theta)
    return (r * math.cos(phi), r * math.sin(phi))


def exp_map_sphere(tangent) -> np.ndarray:
    """Exponential map at the north pole of S_p, in intrinsic chart coordinates.

    A tangent vector x in R^{q-1} maps to (sin(|x|) * x/|x|, cos(|x|)); the
    zero vector maps to the pole itself. Wrap-around is automatic through the
    periodicity of sin and cos.
    """
    x = np.asarray(tangent, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("tangent coordinates must be a 1-d vector")
    r = float(np.linalg.norm(x))
    out = np.zeros(x.size + 1)
    out[-1] = math.cos(r)
    if r > 0.0:
        out[:-1] = math.sin(r) / r * x
    else:
        out[-1] = 1.0
    return out


def log_map_sphere(point) -> np.ndarray:
    """Inverse of ``exp_map_sphere`` on the geodesic ball of radius pi."""
    y = _check_unit(np.asarray(point, dtype=float), "point")
    theta = math.acos(min(1.0, max(-1.0, float(y[-1]))))
    tang = y[:-1]
    s = float(np.linalg.norm(tang))
    if s < 1e-15:
        if theta > math.pi / 2:
            raise ValueError("log map undefined at the cut locus (south pole)")
        return np.zeros(y.size - 1)
    return theta / s * tang


def axis_representative(v) -> np.ndarray:
    """Canonical representative of the axis {v, -v}.

    Upper hemisphere by last coordinate; on the equator the lexicographically
    larger of the pair wins, so the choice is deterministic and idempotent.
    """
    v = _check_unit(np.asarray(v, dtype=float), "axis")
    if v[-1] < 0.0:
        return -v
    if v[-1] == 0.0:
        for c in v:
            if c > 0.0:
                return v.copy()
            if c < 0.0:
                return -v
    return v.copy()


@dataclass(frozen=True)
class RotationElement:
    """Element of SO(3), stored as a rotation matrix with its unit-quaternion
    companion (canonical double-cover representative)."""

    matrix: np.ndarray
    quat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        q = np.asarray(self.quat, dtype=float)
        if m.shape != (3, 3) or q.shape != (4,):
            raise ValueError("RotationElement needs a 3x3 matrix and a 4-vector")
        if np.max(np.abs(m.T @ m - np.eye(3))) > 1e-10:
            raise ValueError("matrix is not orthogonal within 1e-10")
        if abs(float(np.linalg.det(m)) - 1.0) > 1e-10:
            raise ValueError("matrix determinant is not +1 within 1e-10")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "quat", q)


def canonical_quat(quat) -> np.ndarray:
    """Sign-canonical unit quaternion: first nonzero component positive."""
    q = np.asarray(quat, dtype=float)
    if q.shape != (4,):
        raise ValueError("quaternion must have 4 components")
    norm = float(np.linalg.norm(q))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"quaternion is not unit length (|q| = {norm})")
    q = q / norm
    for c in q:
        if c > 0.0:
            return q
        if c < 0.0:
            return -q
    raise ValueError("zero quaternion")


def quat_to_rotation(quat) -> RotationElement:
    """Rotation for a unit quaternion (w, x, y, z); q and -q give the same one."""
    q = canonical_quat(quat)
    w, x, y, z = q
    m = np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )
    return RotationElement(matrix=m, quat=q)


def rotation_to_quat(rot: RotationElement) -> np.ndarray:
    """Canonical quaternion of a rotation matrix (Shepperd's method)."""
    m = np.asarray(rot.matrix if isinstance(rot, RotationElement) else rot, dtype=float)
    t = float(np.trace(m))
    if t > 0.0:
        s = math.sqrt(t + 1.0) * 2.0
        w = 0.25 * s
        x = (m[2, 1] - m[1, 2]) / s
        y = (m[0, 2] - m[2, 0]) / s
        z = (m[1, 0] - m[0, 1]) / s
    elif m[0, 0] >= m[1, 1] and m[0, 0] >= m[2, 2]:
        s = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        w = (m[2, 1] - m[1, 2]) / s
        x = 0.25 * s
        y = (m[0, 1] + m[1, 0]) / s
        z = (m[0, 2] + m[2, 0]) / s
    elif m[1, 1] >= m[2, 2]:
        s = math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        w = (m[0, 2] - m[2, 0]) / s
        x = (m[0, 1] + m[1, 0]) / s
        y = 0.25 * s
        z = (m[1, 2] + m[2, 1]) / s
    else:
        s = math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        w = (m[1, 0] - m[0, 1]) / s
        x = (m[0, 2] + m[2, 0]) / s
        y = (m[1, 2] + m[2, 1]) / s
        z = 0.25 * s
    q = np.array([w, x, y, z])
    return canonical_quat(q / np.linalg.norm(q))


def rotation_aligning(source, target) -> np.ndarray:
    """Orthogonal matrix (a reflection-free rotation where possible) taking
    the unit vector ``source`` to ``target``; works in any dimension.

    Uses the two-reflection (Householder) construction, which is exact and
    deterministic. For source = -target in dimension > 2 the rotation plane
    is chosen from the first usable coordinate axis.
    """
    a = _check_unit(np.asarray(source, dtype=float), "source")
    b = _check_unit(np.asarray(target, dtype=float), "target")
    if a.shape != b.shape:
        raise ValueError("source and target must share a dimension")
    q = a.size
    c = float(a @ b)
    if c < -1.0 + 1e-12:
        # rotate by pi in a plane containing a: pick a stable partner axis
        k = int(np.argmin(np.abs(a)))
        e = np.zeros(q)
        e[k] = 1.0
        u = e - (e @ a) * a
        u /= np.linalg.norm(u)
        return _pi_rotation(a, u)
    # Householder pair: reflect a -> b through their bisector, then the
    # composition with the reflection across b is a rotation
    w = a + b
    h1 = np.eye(q) - 2.0 * np.outer(w, w) / float(w @ w)
    h2 = np.eye(q) - 2.0 * np.outer(b, b)
    return h2 @ h1


def _pi_rotation(a: np.ndarray, u: np.ndarray) -> np.ndarray:
    # rotation by pi in span(a, u): identity off-plane, negation in-plane
    q = a.size
    return np.eye(q) - 2.0 * np.outer(a, a) - 2.0 * np.outer(u, u)
