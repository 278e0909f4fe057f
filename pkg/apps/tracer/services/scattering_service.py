import logging
import math

import numpy as np
import shapely

from apps.tracer.constants import InteractionKind
from apps.tracer.entities import Interaction, InteractionBudget, RayPath
from apps.tracer.services.scene_access import as_geometry
from apps.tracer.services.specular_service import SIDE_TOL, cone_hits, face_spheres, filter_unoccluded

logger = logging.getLogger(__name__)


class ScatteringService:

    def enumerate_scattering(
        self,
        scene,
        tx,
        rx,
        budget: InteractionBudget | None = None,
        radius: float = math.inf,
        tiles=None,
    ) -> list[RayPath]:
        budget = budget or InteractionBudget()
        geometry = as_geometry(scene)
        tiles = geometry.tiles if tiles is None else tuple(tiles)
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        if not tiles or (budget.scatterings < 1 and budget.reflections_scatterings < 2):
            return []

        centers = np.array([t.center for t in tiles])
        normals = np.array([t.normal for t in tiles])
        tile_face = np.array([t.face_index for t in tiles], dtype=int)
        near = np.linalg.norm(centers - rx, axis=1) <= radius
        faces_tx = ((tx - centers) * normals).sum(axis=1) > SIDE_TOL
        faces_rx = ((rx - centers) * normals).sum(axis=1) > SIDE_TOL

        candidates = []
        if budget.scatterings >= 1:
            for i in np.flatnonzero(near & faces_tx & faces_rx):
                candidates.append(((self._interaction(tiles, i),), np.array([tx, centers[i], rx])))

        if budget.reflections_scatterings >= 2:
            face_centers, face_radii = face_spheres(geometry.faces)
            for face in geometry.faces:
                if np.linalg.norm(face_centers[face.index] - rx) - face_radii[face.index] > radius:
                    continue
                if face.signed_distance(tx) > SIDE_TOL:
                    candidates.extend(self._reflect_then_scatter(
                        face, tiles, centers, normals, tile_face, near & faces_rx, tx, rx))
                if face.signed_distance(rx) > SIDE_TOL:
                    candidates.extend(self._scatter_then_reflect(
                        face, tiles, centers, normals, tile_face, near & faces_tx, tx, rx))

        paths = filter_unoccluded(geometry, candidates)
        logger.debug("scattering: %d candidates, %d paths", len(candidates), len(paths))
        return paths

    def _interaction(self, tiles, i) -> Interaction:
        return Interaction(InteractionKind.SCATTERING, int(i), tile_id=tiles[i].tile_id)

    def _crossings(self, face, image, centers, normals, eligible):
        """Reflection points on ``face`` of rays between ``image`` and each eligible tile center."""
        mask = eligible & (face.signed_distance(centers) > SIDE_TOL)
        mask &= cone_hits(image, *face.bounding_sphere, centers, np.zeros(len(centers)))
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            return idx, np.zeros((0, 3))
        ds = float(face.signed_distance(image))
        dt = face.signed_distance(centers[idx])
        points = image + (centers[idx] - image) * (ds / (ds - dt))[:, None]
        uv = face.to_plane(points)
        on_face = shapely.intersects_xy(face.polygon, uv[:, 0], uv[:, 1])
        facing = ((points - centers[idx]) * normals[idx]).sum(axis=1) > SIDE_TOL
        keep = on_face & facing
        return idx[keep], points[keep]

    def _reflect_then_scatter(self, face, tiles, centers, normals, tile_face, eligible, tx, rx) -> list:
        image = face.mirror(tx)
        idx, points = self._crossings(face, image, centers, normals, eligible & (tile_face != face.index))
        return [
            ((Interaction(InteractionKind.REFLECTION, face.index), self._interaction(tiles, i)),
             np.array([tx, p, centers[i], rx]))
            for i, p in zip(idx, points)
        ]

    def _scatter_then_reflect(self, face, tiles, centers, normals, tile_face, eligible, tx, rx) -> list:
        image = face.mirror(rx)
        idx, points = self._crossings(face, image, centers, normals, eligible & (tile_face != face.index))
        return [
            ((self._interaction(tiles, i), Interaction(InteractionKind.REFLECTION, face.index)),
             np.array([tx, centers[i], p, rx]))
            for i, p in zip(idx, points)
        ]


scattering_service = ScatteringService()
