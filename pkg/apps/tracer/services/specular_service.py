import logging
import math

import numpy as np
import shapely

from apps.scene.entities import Face, SceneGeometry
from apps.tracer.constants import InteractionKind
from apps.tracer.entities import Interaction, RayPath
from apps.tracer.exceptions import TracerArgumentError
from apps.tracer.services.occlusion_service import occlusion_index, occlusion_service
from apps.tracer.services.scene_access import as_geometry

logger = logging.getLogger(__name__)

SIDE_TOL = 1e-9


def face_spheres(faces) -> tuple[np.ndarray, np.ndarray]:
    centers = np.array([f.bounding_sphere[0] for f in faces]).reshape(-1, 3)
    radii = np.array([f.bounding_sphere[1] for f in faces])
    return centers, radii


def cone_hits(apex, center, radius, cand_centers, cand_radii) -> np.ndarray:
    """Conservative test: can a ray from ``apex`` through sphere (center, radius) meet each candidate sphere."""
    axis = np.asarray(center, dtype=float) - apex
    dist = float(np.linalg.norm(axis))
    n = len(cand_centers)
    if dist <= radius:
        return np.ones(n, dtype=bool)
    half = math.asin(min(1.0, radius / dist))
    v = cand_centers - apex
    vd = np.linalg.norm(v, axis=1)
    inside = vd <= cand_radii
    cos_ang = np.clip((v @ axis) / (np.maximum(vd, 1e-300) * dist), -1.0, 1.0)
    ang = np.arccos(cos_ang)
    extra = np.arcsin(np.clip(cand_radii / np.maximum(vd, 1e-300), 0.0, 1.0))
    return inside | (ang <= half + extra + 1e-9)


def point_on_face(face: Face, point) -> bool:
    uv = face.to_plane(point)
    return bool(shapely.intersects_xy(face.polygon, uv[0], uv[1]))


def plane_crossing(face: Face, src, dst):
    """Point where segment src -> dst crosses the face plane from back (src) to front (dst)."""
    ds = float(face.signed_distance(src))
    dt = float(face.signed_distance(dst))
    if not (ds < -SIDE_TOL and dt > SIDE_TOL):
        return None
    return src + (dst - src) * (ds / (ds - dt))


def reflect(direction, normal) -> np.ndarray:
    return direction - 2.0 * (direction @ normal) * normal


def segment_ignores(interactions, geometry: SceneGeometry) -> list[tuple]:
    """Faces to skip in the occlusion test of each path segment."""
    own = [()]
    for interaction in interactions:
        if interaction.kind == InteractionKind.DIFFRACTION:
            own.append(tuple(geometry.edges[interaction.index].faces))
        elif interaction.kind == InteractionKind.SCATTERING:
            own.append((interaction.tile_id[0],))
        else:
            own.append((interaction.index,))
    own.append(())
    return [own[i] + own[i + 1] for i in range(len(own) - 1)]


def filter_unoccluded(geometry: SceneGeometry, candidates) -> list[RayPath]:
    """Keep candidate (interactions, vertices) pairs whose every segment is clear."""
    if not candidates:
        return []
    index = occlusion_index(geometry)
    starts, ends, ignores, owner = [], [], [], []
    for k, (interactions, vertices) in enumerate(candidates):
        for seg, ignore in enumerate(segment_ignores(interactions, geometry)):
            starts.append(vertices[seg])
            ends.append(vertices[seg + 1])
            ignores.append(ignore)
            owner.append(k)
    clear = occlusion_service.segments_clear(index, np.array(starts), np.array(ends), ignores)
    ok = np.ones(len(candidates), dtype=bool)
    np.logical_and.at(ok, np.array(owner), clear)
    return [
        RayPath(interactions=tuple(candidates[k][0]), vertices=np.asarray(candidates[k][1], dtype=float))
        for k in np.flatnonzero(ok)
    ]


def construct_reflection_path(faces, sequence, tx, rx):
    """Back-compute reflection points of a face sequence; None if any point misses its face."""
    images = [tx]
    for face_index in sequence:
        images.append(faces[face_index].mirror(images[-1]))
    points = [None] * len(sequence)
    target = rx
    for j in reversed(range(len(sequence))):
        face = faces[sequence[j]]
        point = plane_crossing(face, images[j + 1], target)
        if point is None or not point_on_face(face, point):
            return None
        points[j] = point
        target = point
    return np.array([tx, *points, rx])


class SpecularService:

    def enumerate_specular(self, scene, tx, rx, max_refl: int = 3, radius: float = math.inf) -> list[RayPath]:
        if not 0 <= max_refl <= 3:
            raise TracerArgumentError(f"max_refl must be in [0, 3], got {max_refl}")
        geometry = as_geometry(scene)
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        if max_refl == 0 or not geometry.faces:
            return []
        faces = geometry.faces
        centers, radii = face_spheres(faces)
        near = np.linalg.norm(centers - rx, axis=1) - radii <= radius
        normals = np.array([f.normal for f in faces])
        origins = np.array([f.origin for f in faces])
        context = (faces, centers, radii, normals, origins, near)
        candidates = []
        self._descend(context, (), [tx], rx, max_refl, candidates)
        paths = filter_unoccluded(geometry, candidates)
        logger.debug("specular: %d candidate sequences, %d paths", len(candidates), len(paths))
        return paths

    def _descend(self, context, sequence, images, rx, max_refl, out) -> None:
        faces, centers, radii, normals, origins, near = context
        if sequence:
            last = faces[sequence[-1]]
            apex = images[-1]
            if last.signed_distance(rx) > SIDE_TOL and cone_hits(
                apex, *last.bounding_sphere, rx[None, :], np.zeros(1)
            )[0]:
                vertices = construct_reflection_path(faces, sequence, images[0], rx)
                if vertices is not None:
                    out.append((
                        tuple(Interaction(InteractionKind.REFLECTION, i) for i in sequence),
                        vertices,
                    ))
        if len(sequence) == max_refl:
            return

        source = images[-1]
        mask = near.copy()
        mask &= ((source - origins) * normals).sum(axis=1) > SIDE_TOL
        if sequence:
            last = faces[sequence[-1]]
            mask[last.index] = False
            mask &= last.signed_distance(centers) > -radii
            mask &= cone_hits(images[-1], *last.bounding_sphere, centers, radii)
        for face_index in np.flatnonzero(mask):
            face = faces[face_index]
            self._descend(
                context,
                sequence + (int(face_index),),
                images + [face.mirror(source)],
                rx, max_refl, out,
            )

    def enumerate_exhaustive(self, scene, tx, rx, max_refl: int = 3) -> list[RayPath]:
        """Unpruned image tree over every face sequence; reference for small scenes."""
        geometry = as_geometry(scene)
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        faces = geometry.faces
        candidates = []
        frontier = [()]
        for _ in range(max_refl):
            grown = []
            for sequence in frontier:
                for face in faces:
                    if sequence and sequence[-1] == face.index:
                        continue
                    grown.append(sequence + (face.index,))
            for sequence in grown:
                vertices = construct_reflection_path(faces, sequence, tx, rx)
                if vertices is not None:
                    candidates.append((tuple(Interaction(InteractionKind.REFLECTION, i) for i in sequence), vertices))
            frontier = grown
        return filter_unoccluded(geometry, candidates)


specular_service = SpecularService()