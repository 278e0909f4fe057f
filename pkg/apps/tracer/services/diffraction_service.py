import logging
import math

import numpy as np
from scipy.optimize import brentq, minimize, root

from apps.tracer.constants import (
    EDGE_PARAM_MARGIN,
    InteractionKind,
    KELLER_TOLERANCE,
    MIN_SIN_BETA0,
)
from apps.tracer.entities import Interaction, InteractionBudget, RayPath
from apps.tracer.services.occlusion_service import occlusion_index, occlusion_service
from apps.tracer.services.scene_access import as_geometry
from apps.tracer.services.specular_service import (
    SIDE_TOL,
    cone_hits,
    face_spheres,
    filter_unoccluded,
    plane_crossing,
    point_on_face,
)
from apps.tracer.services.wedge_service import air_points, diffracting_frames, in_air

logger = logging.getLogger(__name__)


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def length_slope(start, vec, t, src, dst):
    """d/dt of |Q - src| + |Q - dst| with Q = start + t*vec (vectorized over rows)."""
    q = start + t[..., None] * vec
    a = q - src
    c = q - dst
    na = np.maximum(np.linalg.norm(a, axis=-1), 1e-300)
    nc = np.maximum(np.linalg.norm(c, axis=-1), 1e-300)
    return (vec * a).sum(axis=-1) / na + (vec * c).sum(axis=-1) / nc


def keller_candidates(start, vec, src, dst) -> np.ndarray:
    """Edges whose path-length slope changes sign inside (0, 1); the length is convex in t."""
    n = len(start)
    lo = length_slope(start, vec, np.full(n, EDGE_PARAM_MARGIN), src, dst)
    hi = length_slope(start, vec, np.full(n, 1.0 - EDGE_PARAM_MARGIN), src, dst)
    return (lo < 0.0) & (hi > 0.0)


def solve_keller(start, vec, src, dst) -> float:
    def slope(t):
        return float(length_slope(start, vec, np.array(t), src, dst))

    return brentq(slope, EDGE_PARAM_MARGIN, 1.0 - EDGE_PARAM_MARGIN, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def sin_beta(axis, incoming) -> float:
    cos_b = float(np.clip(axis @ _unit(incoming), -1.0, 1.0))
    return math.sqrt(max(0.0, 1.0 - cos_b * cos_b))


class DiffractionService:

    def enumerate_diffraction(
        self,
        scene,
        tx,
        rx,
        budget: InteractionBudget | None = None,
        radius: float = math.inf,
    ) -> list[RayPath]:
        budget = budget or InteractionBudget()
        geometry = as_geometry(scene)
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        frames = diffracting_frames(geometry)
        if frames.edge_index.size == 0:
            return []
        near = np.flatnonzero(np.linalg.norm(frames.midpoint - rx, axis=1) - frames.half_length <= radius)
        if near.size == 0:
            return []

        candidates = []
        if budget.diffractions >= 1:
            candidates.extend(self._single(frames, near, tx, rx))
        if budget.reflections_diffractions >= 2:
            candidates.extend(self._reflect_then_diffract(geometry, frames, near, tx, rx, radius))
            candidates.extend(self._diffract_then_reflect(geometry, frames, near, tx, rx, radius))
        paths = filter_unoccluded(geometry, candidates)
        if budget.diffractions >= 2:
            paths.extend(self._double(geometry, frames, near, tx, rx, radius))
        logger.debug("diffraction: %d candidates, %d paths", len(candidates), len(paths))
        return paths

    def _wedge_ok(self, frames, k, q, toward_src, toward_dst) -> bool:
        axis, t_o, n_o, alpha = frames.axis[k], frames.t_o[k], frames.n_o[k], frames.alpha[k]
        if sin_beta(axis, q - toward_src) <= MIN_SIN_BETA0:
            return False
        return bool(in_air(axis, t_o, n_o, alpha, _unit(toward_src - q))) and bool(
            in_air(axis, t_o, n_o, alpha, _unit(toward_dst - q))
        )

    def _diffraction_point(self, frames, k, src, dst):
        start = frames.start[k]
        vec = frames.end[k] - start
        t = solve_keller(start, vec, src, dst)
        return start + t * vec

    def _single(self, frames, near, tx, rx) -> list:
        start = frames.start[near]
        vec = frames.end[near] - start
        out = []
        for k in near[keller_candidates(start, vec, tx, rx)]:
            q = self._diffraction_point(frames, k, tx, rx)
            if not self._wedge_ok(frames, k, q, tx, rx):
                continue
            out.append(((Interaction(InteractionKind.DIFFRACTION, int(frames.edge_index[k])),), np.array([tx, q, rx])))
        return out

    def _reflect_then_diffract(self, geometry, frames, near, tx, rx, radius) -> list:
        faces = geometry.faces
        centers, radii = face_spheres(faces)
        out = []
        mids = frames.midpoint[near]
        halves = frames.half_length[near]
        wedge_faces = self._wedge_faces(geometry, frames, near)
        for face in faces:
            if np.linalg.norm(centers[face.index] - rx) - radii[face.index] > radius:
                continue
            if face.signed_distance(tx) <= SIDE_TOL:
                continue
            image = face.mirror(tx)
            mask = face.signed_distance(mids) > -halves
            mask &= cone_hits(image, *face.bounding_sphere, mids, halves)
            mask &= ~(wedge_faces == face.index).any(axis=1)
            ks = near[mask]
            if ks.size == 0:
                continue
            start = frames.start[ks]
            vec = frames.end[ks] - start
            for k in ks[keller_candidates(start, vec, image, rx)]:
                q = self._diffraction_point(frames, k, image, rx)
                p = plane_crossing(face, image, q)
                if p is None or not point_on_face(face, p):
                    continue
                if not self._wedge_ok(frames, k, q, p, rx):
                    continue
                out.append((
                    (Interaction(InteractionKind.REFLECTION, face.index),
                     Interaction(InteractionKind.DIFFRACTION, int(frames.edge_index[k]))),
                    np.array([tx, p, q, rx]),
                ))
        return out

    def _diffract_then_reflect(self, geometry, frames, near, tx, rx, radius) -> list:
        faces = geometry.faces
        centers, radii = face_spheres(faces)
        out = []
        mids = frames.midpoint[near]
        halves = frames.half_length[near]
        wedge_faces = self._wedge_faces(geometry, frames, near)
        for face in faces:
            if np.linalg.norm(centers[face.index] - rx) - radii[face.index] > radius:
                continue
            if face.signed_distance(rx) <= SIDE_TOL:
                continue
            image = face.mirror(rx)
            mask = face.signed_distance(mids) > -halves
            mask &= cone_hits(image, *face.bounding_sphere, mids, halves)
            mask &= ~(wedge_faces == face.index).any(axis=1)
            ks = near[mask]
            if ks.size == 0:
                continue
            start = frames.start[ks]
            vec = frames.end[ks] - start
            for k in ks[keller_candidates(start, vec, tx, image)]:
                q = self._diffraction_point(frames, k, tx, image)
                p = plane_crossing(face, image, q)
                if p is None or not point_on_face(face, p):
                    continue
                if not self._wedge_ok(frames, k, q, tx, p):
                    continue
                out.append((
                    (Interaction(InteractionKind.DIFFRACTION, int(frames.edge_index[k])),
                     Interaction(InteractionKind.REFLECTION, face.index)),
                    np.array([tx, q, p, rx]),
                ))
        return out

    def _wedge_faces(self, geometry, frames, near) -> np.ndarray:
        return np.array([geometry.edges[frames.edge_index[k]].faces for k in near], dtype=int).reshape(-1, 2)

    def _double(self, geometry, frames, near, tx, rx, radius) -> list[RayPath]:
        index = occlusion_index(geometry)
        nudged = air_points(frames)[near]
        wedge_faces = self._wedge_faces(geometry, frames, near)
        m = len(near)
        flat = nudged.reshape(-1, 3)
        ignore = np.repeat(wedge_faces, 3, axis=0)
        lit = occlusion_service.segments_clear(index, flat, np.repeat(tx[None, :], len(flat), axis=0), ignore)
        seen = occlusion_service.segments_clear(index, flat, np.repeat(rx[None, :], len(flat), axis=0), ignore)
        lit = lit.reshape(m, 3).any(axis=1)
        seen = seen.reshape(m, 3).any(axis=1)

        first, second = np.nonzero(lit[:, None] & seen[None, :])
        keep = first != second
        first, second = first[keep], second[keep]
        if first.size == 0:
            return []
        mids = frames.midpoint[near]
        k1, k2 = near[first], near[second]
        forward = _unit(mids[second] - mids[first])
        keep = in_air(frames.axis[k1], frames.t_o[k1], frames.n_o[k1], frames.alpha[k1], forward)
        keep &= in_air(frames.axis[k2], frames.t_o[k2], frames.n_o[k2], frames.alpha[k2], -forward)
        keep &= np.linalg.norm(mids[second] - mids[first], axis=1) <= 2.0 * radius
        first, second = first[keep], second[keep]
        if first.size == 0:
            return []

        pair_ignore = np.concatenate([wedge_faces[first], wedge_faces[second]], axis=1)
        mutual = np.zeros(first.size, dtype=bool)
        for j in range(3):
            mutual |= occlusion_service.segments_clear(index, nudged[first, j], nudged[second, j], pair_ignore)
        first, second = first[mutual], second[mutual]

        candidates = []
        for a, b in zip(near[first], near[second]):
            solved = self._double_points(frames, a, b, tx, rx)
            if solved is None:
                continue
            q1, q2 = solved
            if not (self._wedge_ok(frames, a, q1, tx, q2) and self._wedge_ok(frames, b, q2, q1, rx)):
                continue
            candidates.append((
                (Interaction(InteractionKind.DIFFRACTION, int(frames.edge_index[a])),
                 Interaction(InteractionKind.DIFFRACTION, int(frames.edge_index[b]))),
                np.array([tx, q1, q2, rx]),
            ))
        return filter_unoccluded(geometry, candidates)

    def _double_points(self, frames, a, b, tx, rx):
        s1, v1 = frames.start[a], frames.end[a] - frames.start[a]
        s2, v2 = frames.start[b], frames.end[b] - frames.start[b]

        def parts(x):
            q1 = s1 + x[0] * v1
            q2 = s2 + x[1] * v2
            u0 = q1 - tx
            u1 = q2 - q1
            u2 = rx - q2
            r0, r1, r2 = (max(float(np.linalg.norm(u)), 1e-300) for u in (u0, u1, u2))
            return q1, q2, u0 / r0, u1 / r1, u2 / r2, r0, r1, r2

        def fun(x):
            _, _, h0, h1, h2, r0, r1, r2 = parts(x)
            grad = np.array([v1 @ h0 - v1 @ h1, v2 @ h1 - v2 @ h2])
            return r0 + r1 + r2, grad

        def grad(x):
            return fun(x)[1]

        def hess(x):
            _, _, h0, h1, h2, r0, r1, r2 = parts(x)
            a11 = (v1 @ v1 - (v1 @ h0) ** 2) / r0 + (v1 @ v1 - (v1 @ h1) ** 2) / r1
            a22 = (v2 @ v2 - (v2 @ h1) ** 2) / r1 + (v2 @ v2 - (v2 @ h2) ** 2) / r2
            a12 = -(v1 @ v2 - (v1 @ h1) * (v2 @ h1)) / r1
            return np.array([[a11, a12], [a12, a22]])

        result = minimize(fun, np.array([0.5, 0.5]), jac=True, method="L-BFGS-B",
                          bounds=[(0.0, 1.0), (0.0, 1.0)], options={"ftol": 1e-15, "gtol": 1e-12})
        x = result.x
        if np.any(x <= EDGE_PARAM_MARGIN) or np.any(x >= 1.0 - EDGE_PARAM_MARGIN):
            return None
        polished = root(grad, x, jac=hess, method="hybr", options={"xtol": 1e-15})
        if polished.success and np.all((polished.x > 0.0) & (polished.x < 1.0)):
            x = polished.x
        scale = math.sqrt(float(v1 @ v1) + float(v2 @ v2))
        if np.max(np.abs(grad(x))) > KELLER_TOLERANCE * max(scale, 1.0):
            return None
        q1, q2 = parts(x)[:2]
        if np.linalg.norm(q2 - q1) <= 1e-6:
            return None
        return q1, q2


diffraction_service = DiffractionService()
