import csv
import logging
import math

import numpy as np
from scipy import constants as sc

from apps.antennas.constants import BAND_GROUP, BAND_RANGE_HZ, Band
from apps.antennas.entities import AntennaConfig, TxFieldSpec
from apps.antennas.services.pattern_service import rx_weight
from apps.antennas.services.polarization_service import transverse_basis
from apps.field.constants import CONTRIBUTION_CSV_FIELDS, MAX_INCIDENCE_ANGLE, SCATTERING_ALPHA_R
from apps.field.entities import ChannelRealization, PathContribution, ScatterPhaseSource
from apps.field.exceptions import (
    BandConfigurationError,
    FieldArgumentError,
    FieldGeometryError,
    ScatteringContractError,
)
from apps.field.services.fresnel_service import fresnel_coefficients, fresnel_dyadic
from apps.field.services.lobe_service import lobe, lobe_normalization
from apps.field.services.utd_service import diffraction_dyadic
from apps.scene.entities import Scene, SceneGeometry
from apps.scene.services.material_service import material_service
from apps.tracer.constants import InteractionKind
from apps.tracer.entities import RayPath, RxGridSpec, SatellitePose
from apps.tracer.services.scene_access import as_geometry
from apps.tracer.services.specular_service import reflect
from apps.tracer.services.wedge_service import edge_frame

logger = logging.getLogger(__name__)


def band_for_frequency(frequency_hz: float) -> str:
    for band, (low, high) in BAND_RANGE_HZ.items():
        if low <= frequency_hz <= high:
            return band
    raise BandConfigurationError(f"{frequency_hz / 1e9:.3f} GHz lies in no supported band")


def materials_for_band(scene: Scene, band: str, overrides: dict | None = None) -> dict:
    try:
        group = BAND_GROUP[Band(band)]
    except ValueError as exc:
        raise BandConfigurationError(f"unknown band '{band}'") from exc
    return material_service.resolve(scene, group, overrides)


def _unit(v):
    return v / np.linalg.norm(v)


def reflect_field(field, incoming, outgoing, normal, soft: complex, hard: complex) -> np.ndarray:
    """Apply (soft, hard) coefficients in the plane-of-incidence bases of one bounce."""
    cross = np.cross(incoming, normal)
    norm = float(np.linalg.norm(cross))
    # normal incidence: any transverse direction serves as e_perp
    e_perp = transverse_basis(incoming)[0] if norm < 1e-12 else cross / norm
    e_par_in = np.cross(e_perp, incoming)
    e_par_out = np.cross(e_perp, outgoing)
    return soft * (field @ e_perp) * e_perp + hard * (field @ e_par_in) * e_par_out


def incidence_angle(incoming, normal) -> float:
    cos_t = float(-(incoming @ normal))
    if cos_t <= 0.0:
        raise FieldGeometryError("ray reaches the back side of a reflecting face")
    return min(math.acos(min(1.0, cos_t)), MAX_INCIDENCE_ANGLE)


class FieldService:

    def _material(self, materials: dict, owner: str):
        try:
            return materials[owner]
        except KeyError as exc:
            raise BandConfigurationError(f"no material for surface owner '{owner}'") from exc

    def _propagate(self, geometry, vertices, interactions, field, frequency_hz, materials, with_phase=True):
        """Carry ``field`` (referred to 1 m from ``vertices[0]``) through reflections and diffractions."""
        lengths = np.linalg.norm(np.diff(vertices, axis=0), axis=1)
        if np.any(lengths <= 0.0):
            raise FieldGeometryError("zero-length path segment")
        cuts = [0] + [i + 1 for i, it in enumerate(interactions) if it.kind == InteractionKind.DIFFRACTION]
        cuts.append(len(lengths))
        legs = [float(lengths[a:b].sum()) for a, b in zip(cuts, cuts[1:])]
        field = np.asarray(field, dtype=complex) / legs[0]
        leg = 0

        for i, interaction in enumerate(interactions, start=1):
            incoming = _unit(vertices[i] - vertices[i - 1])
            outgoing = _unit(vertices[i + 1] - vertices[i])
            if interaction.kind == InteractionKind.REFLECTION:
                face = geometry.faces[interaction.index]
                angle = incidence_angle(incoming, face.normal)
                soft, hard = np.diag(fresnel_dyadic(self._material(materials, face.owner), angle, frequency_hz))
                field = reflect_field(field, incoming, outgoing, face.normal, soft, hard)
            elif interaction.kind == InteractionKind.DIFFRACTION:
                edge = geometry.edges[interaction.index]
                axis, t_o, n_o = edge_frame(edge)
                wedge = tuple(self._material(materials, geometry.faces[f].owner) for f in edge.faces)
                dyadic = diffraction_dyadic(
                    (axis, t_o, n_o, edge.interior_angle),
                    incoming, outgoing, legs[leg], legs[leg + 1], wedge, frequency_hz,
                )
                field = dyadic.apply(field) * dyadic.spreading
                leg += 1
            else:
                raise FieldGeometryError("scattering inside a specular chain")

        if with_phase:
            wavenumber = 2.0 * math.pi * frequency_hz / sc.c
            field = field * np.exp(-1j * wavenumber * float(lengths.sum()))
        return field

    def coherent_field(
        self,
        geometry,
        path: RayPath,
        frequency_hz: float,
        tx_spec: TxFieldSpec,
        materials: dict,
    ) -> PathContribution:
        if path.count(InteractionKind.SCATTERING):
            raise FieldArgumentError(f"path {path.path_id} carries diffuse scattering")
        geometry = as_geometry(geometry)
        e_tx0 = tx_spec.field_at_1m(path.departure_direction)
        field = self._propagate(geometry, path.vertices, path.interactions, e_tx0, frequency_hz, materials)
        return PathContribution(path=path, e_field=field, frequency_hz=frequency_hz)

    def scattered_field(
        self,
        geometry,
        path: RayPath,
        frequency_hz: float,
        tx_spec: TxFieldSpec,
        materials: dict,
        phases: ScatterPhaseSource,
        alpha_r: float = SCATTERING_ALPHA_R,
    ) -> PathContribution:
        """Effective-roughness field of a path with exactly one scattering tile.

        Specular legs before and after the tile are cascaded through the same
        chain as coherent paths; the tile re-radiates the incident ellipse
        projected onto the plane transverse to the scattered direction.
        """
        geometry = as_geometry(geometry)
        kinds = [i.kind for i in path.interactions]
        if kinds.count(InteractionKind.SCATTERING) != 1:
            raise FieldArgumentError(f"path {path.path_id} must scatter exactly once")
        j = kinds.index(InteractionKind.SCATTERING) + 1
        interaction = path.interactions[j - 1]
        tile = self._tile(geometry, interaction.tile_id)
        face = geometry.faces[tile.face_index]
        material = self._material(materials, face.owner)
        v = path.vertices
        normal = np.asarray(tile.normal, dtype=float)

        k_i = _unit(v[j] - v[j - 1])
        k_s = _unit(v[j + 1] - v[j])
        cos_i = float(-(k_i @ normal))
        if cos_i <= 0.0 or float(k_s @ normal) <= 0.0:
            raise ScatteringContractError(f"tile {tile.key} is not lit on the side it scatters toward")

        e_tx0 = tx_spec.field_at_1m(path.departure_direction)
        e_inc = self._propagate(
            geometry, v[: j + 1], path.interactions[: j - 1], e_tx0, frequency_hz, materials, with_phase=False,
        )
        magnitude = float(np.linalg.norm(e_inc))
        if magnitude == 0.0 or material.scattering_s == 0.0:
            return PathContribution(path=path, e_field=np.zeros(3, dtype=complex), frequency_hz=frequency_hz)
        p_inc = e_inc / magnitude

        k_r = reflect(k_i, normal)
        theta_i = min(math.acos(min(1.0, cos_i)), MAX_INCIDENCE_ANGLE)
        soft, hard = fresnel_coefficients(material, theta_i, frequency_hz)
        gamma = float(np.linalg.norm(reflect_field(p_inc, k_i, k_r, normal, soft, hard)))
        pattern = float(lobe(k_r @ k_s, alpha_r)) / lobe_normalization(theta_i, alpha_r)
        amplitude = magnitude * material.scattering_s * gamma * math.sqrt(pattern * tile.area * cos_i)

        p_s = p_inc - (p_inc @ k_s) * k_s
        norm = float(np.linalg.norm(p_s))
        p_s = transverse_basis(k_s)[0].astype(complex) if norm < 1e-12 else p_s / norm
        chi = phases.phase(tile.tile_id, path.path_id, frequency_hz)
        e_s0 = amplitude * p_s * complex(math.cos(chi), math.sin(chi))

        field = self._propagate(
            geometry, v[j:], path.interactions[j:], e_s0, frequency_hz, materials, with_phase=False,
        )
        return PathContribution(path=path, e_field=field, frequency_hz=frequency_hz)

    def _tile(self, geometry: SceneGeometry, tile_id):
        for i in geometry.tiles_by_face.get(tile_id[0], ()):
            if geometry.tiles[i].tile_id == tuple(tile_id):
                return geometry.tiles[i]
        raise FieldGeometryError(f"unknown scattering tile {tile_id}")

    def contribution(self, geometry, path, frequency_hz, tx_spec, materials, phases) -> PathContribution:
        if path.count(InteractionKind.SCATTERING):
            return self.scattered_field(geometry, path, frequency_hz, tx_spec, materials, phases)
        return self.coherent_field(geometry, path, frequency_hz, tx_spec, materials)

    def contributions(self, geometry, paths, frequency_hz, tx_spec, materials, phases) -> list[PathContribution]:
        geometry = as_geometry(geometry)
        out = [self.contribution(geometry, p, frequency_hz, tx_spec, materials, phases) for p in paths]
        logger.debug("computed %d contributions at %.3f GHz", len(out), frequency_hz / 1e9)
        return out

    def retarget_frequency(
        self,
        geometry,
        contributions,
        new_frequency_hz: float,
        materials: dict,
        tx_spec: TxFieldSpec,
        phases: ScatterPhaseSource,
    ) -> list[PathContribution]:
        """Same path set re-evaluated at another frequency and band materials."""
        if not new_frequency_hz > 0:
            raise FieldArgumentError(f"frequency must be > 0, got {new_frequency_hz}")
        paths = [c.path for c in contributions]
        return self.contributions(geometry, paths, new_frequency_hz, tx_spec, materials, phases)

    def extend_to_grid(
        self,
        contributions,
        grid: RxGridSpec,
        antenna: AntennaConfig,
        frequency_hz: float | None = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Per-point received amplitudes under the plane-wave approximation.

        Returns (amplitudes over the grid, receiver-weighted amplitude of
        each contribution at the center).
        """
        n_points = grid.points_per_side ** 2
        if not contributions:
            return np.zeros(n_points, dtype=complex), np.zeros(0, dtype=complex)
        frequency_hz = frequency_hz or contributions[0].frequency_hz
        weights = np.array([rx_weight(antenna, c.path.look_direction, c.e_field) for c in contributions])
        directions = np.array([c.arrival_direction for c in contributions])
        wavenumber = 2.0 * math.pi * frequency_hz / sc.c
        shifts = np.exp(-1j * wavenumber * (grid.offsets() @ directions.T))
        return shifts @ weights, weights

    def realize(
        self,
        geometry,
        paths,
        pose: SatellitePose,
        grid: RxGridSpec,
        antenna: AntennaConfig,
        frequency_hz: float,
        tx_spec: TxFieldSpec,
        materials: dict,
        seed: int,
    ) -> ChannelRealization:
        phases = ScatterPhaseSource(seed)
        contributions = self.contributions(geometry, paths, frequency_hz, tx_spec, materials, phases)
        return self.realization_from(contributions, pose, grid, antenna, frequency_hz, seed)

    def realization_from(self, contributions, pose, grid, antenna, frequency_hz, seed) -> ChannelRealization:
        amplitudes, weights = self.extend_to_grid(contributions, grid, antenna, frequency_hz)
        return ChannelRealization(
            contributions=tuple(contributions),
            frequency_hz=frequency_hz,
            pose=pose,
            grid=grid,
            antenna=antenna,
            rx_amplitudes=amplitudes,
            center_weights=weights,
            seed=seed,
        )

    def dump_contributions(self, contributions, stream) -> int:
        writer = csv.DictWriter(stream, fieldnames=CONTRIBUTION_CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for c in contributions:
            azimuth, elevation = c.arrival_angles_deg()
            ex, ey, ez = c.e_field
            writer.writerow({
                "path_id": c.path_id,
                "label": c.mechanism_label,
                "delay_s": repr(float(c.delay_s)),
                "ex_re": repr(float(ex.real)), "ex_im": repr(float(ex.imag)),
                "ey_re": repr(float(ey.real)), "ey_im": repr(float(ey.imag)),
                "ez_re": repr(float(ez.real)), "ez_im": repr(float(ez.imag)),
                "arrival_azimuth_deg": f"{azimuth:.6f}",
                "arrival_elevation_deg": f"{elevation:.6f}",
            })
        return len(contributions)


field_service = FieldService()
