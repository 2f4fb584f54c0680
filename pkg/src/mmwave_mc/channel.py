"""Per-link propagation sampling: LOS/NLOS/outage state, pathloss, clusters.

The statistical shape follows 28 GHz urban measurement modeling: a three-state
link classifier with exponential distance laws, per-state log-distance
pathloss with lognormal shadowing, and clustered small-scale structure where
each cluster is synthesized from many subpaths spread around central angles.
All numeric defaults are configuration, not hard-coded truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .beamforming import Codebook, response_matrix

SPEED_OF_LIGHT_M_S = 299792458.0


class LinkState(Enum):
    LOS = "los"
    NLOS = "nlos"
    OUTAGE = "outage"


@dataclass(frozen=True)
class StatePathloss:
    """Log-distance pathloss for one state: PL = alpha + 10*beta*log10(d) + X."""

    alpha_db: float
    beta: float
    sigma_db: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("pathloss exponent beta must be > 0")
        if self.sigma_db < 0:
            raise ValueError("shadowing sigma must be >= 0")


@dataclass(frozen=True)
class PathlossParams:
    """Pathloss curves plus the distance laws of the three-state classifier.

    p_out(d) = max(0, 1 - exp(-a_out*d + b_out))
    p_los(d) = (1 - p_out(d)) * exp(-a_los*d)
    p_nlos(d) = remainder.

    f_c_hz sets the free-space floor applied to NLOS draws.
    """

    los: StatePathloss = StatePathloss(alpha_db=61.4, beta=2.0, sigma_db=5.8)
    nlos: StatePathloss = StatePathloss(alpha_db=72.0, beta=2.92, sigma_db=8.7)
    a_los_per_m: float = 1.0 / 67.1
    a_out_per_m: float = 1.0 / 30.0
    b_out: float = 5.2
    f_c_hz: float = 28e9

    def for_state(self, state: LinkState) -> StatePathloss:
        if state == LinkState.LOS:
            return self.los
        if state == LinkState.NLOS:
            return self.nlos
        raise ValueError("outage links have no pathloss curve")


@dataclass(frozen=True)
class ClusterParams:
    """Knobs of the clustered small-scale model."""

    mean_clusters: float = 1.9          # Poisson mean, clamped to >= 1 cluster
    subpaths_per_cluster: int = 20
    angular_spread_rad: float = math.radians(10.0)
    elevation_std_rad: float = math.radians(5.0)


@dataclass
class Cluster:
    """One spatial cluster with subpaths spread around its central angles.

    Subpaths are stored as parallel arrays (offsets relative to the central
    angles at each end, and complex gains).  Squared gains within a cluster
    sum to its power fraction.
    """

    azimuth_ue_rad: float
    elevation_ue_rad: float
    azimuth_bs_rad: float
    elevation_bs_rad: float
    power_fraction: float
    angular_spread_rad: float
    ue_az_offsets: np.ndarray = field(repr=False, default=None)
    ue_el_offsets: np.ndarray = field(repr=False, default=None)
    bs_az_offsets: np.ndarray = field(repr=False, default=None)
    bs_el_offsets: np.ndarray = field(repr=False, default=None)
    gains: np.ndarray = field(repr=False, default=None)

    @property
    def n_subpaths(self) -> int:
        return len(self.gains)


@dataclass
class DirectionalLink:
    """Sampled channel between the UE and one SCell for a trial."""

    scell_id: int
    distance_m: float
    state: LinkState
    pathloss_db: float              # +inf for OUTAGE
    clusters: list[Cluster] = field(default_factory=list)


def state_probabilities(d: float, params: PathlossParams) -> tuple[float, float, float]:
    """(p_los, p_nlos, p_out) at distance d; they sum to 1 exactly."""
    if d <= 0:
        raise ValueError("distance must be > 0")
    p_out = max(0.0, 1.0 - math.exp(-params.a_out_per_m * d + params.b_out))
    p_los = (1.0 - p_out) * math.exp(-params.a_los_per_m * d)
    p_nlos = 1.0 - p_out - p_los
    return p_los, p_nlos, p_out


def sample_link_state(d: float, params: PathlossParams, rng: np.random.Generator) -> LinkState:
    """Draw LOS/NLOS/OUTAGE from the distance-dependent state probabilities."""
    p_los, p_nlos, _ = state_probabilities(d, params)
    u = rng.uniform()
    if u < p_los:
        return LinkState.LOS
    if u < p_los + p_nlos:
        return LinkState.NLOS
    return LinkState.OUTAGE


def free_space_pathloss_db(d: float, f_c_hz: float) -> float:
    """Friis free-space loss: 20log10(d) + 20log10(f) + 20log10(4*pi/c)."""
    return (20.0 * math.log10(d) + 20.0 * math.log10(f_c_hz)
            + 20.0 * math.log10(4.0 * math.pi / SPEED_OF_LIGHT_M_S))


def pathloss_db(d: float, state: LinkState, params: PathlossParams,
                rng: np.random.Generator) -> float:
    """Log-distance pathloss with one lognormal shadowing draw.

    NLOS draws are floored at the free-space value for the same distance;
    outage links have no finite pathloss and are rejected here.
    """
    if d <= 0:
        raise ValueError("distance must be > 0")
    if state == LinkState.OUTAGE:
        raise ValueError("outage links have no finite pathloss")
    curve = params.for_state(state)
    shadow = rng.normal(0.0, curve.sigma_db) if curve.sigma_db > 0 else 0.0
    pl = curve.alpha_db + 10.0 * curve.beta * math.log10(d) + shadow
    if state == LinkState.NLOS:
        pl = max(pl, free_space_pathloss_db(d, params.f_c_hz))
    return pl


def sample_clusters(state: LinkState, params: ClusterParams,
                    rng: np.random.Generator) -> list[Cluster]:
    """Draw the cluster set of a non-outage link.

    Cluster count is Poisson(mean_clusters) clamped to >= 1; power fractions
    are normalized exponential draws; central angles are uniform in azimuth
    and near-broadside in elevation; subpath offsets are normal with the
    configured angular spread.  Subpath gains have equal magnitude within a
    cluster and i.i.d. uniform phases.
    """
    if state == LinkState.OUTAGE:
        raise ValueError("outage links carry no clusters")
    n_clusters = max(1, int(rng.poisson(params.mean_clusters)))
    fractions = rng.exponential(1.0, n_clusters)
    fractions /= fractions.sum()
    n_sub = params.subpaths_per_cluster
    clusters = []
    for c in range(n_clusters):
        az_ue, az_bs = rng.uniform(0.0, 2.0 * np.pi, 2)
        el_ue, el_bs = rng.normal(0.0, params.elevation_std_rad, 2)
        offsets = rng.normal(0.0, params.angular_spread_rad, (4, n_sub))
        phases = rng.uniform(0.0, 2.0 * np.pi, n_sub)
        amp = math.sqrt(fractions[c] / n_sub)
        clusters.append(Cluster(
            azimuth_ue_rad=az_ue, elevation_ue_rad=el_ue,
            azimuth_bs_rad=az_bs, elevation_bs_rad=el_bs,
            power_fraction=float(fractions[c]),
            angular_spread_rad=params.angular_spread_rad,
            ue_az_offsets=offsets[0], ue_el_offsets=offsets[1],
            bs_az_offsets=offsets[2], bs_el_offsets=offsets[3],
            gains=amp * np.exp(1j * phases),
        ))
    return clusters


def sample_link(scell_id: int, d: float, pathloss: PathlossParams,
                clusters: ClusterParams, rng: np.random.Generator) -> DirectionalLink:
    """Sample the full link: state, pathloss and (unless outage) clusters."""
    state = sample_link_state(d, pathloss, rng)
    if state == LinkState.OUTAGE:
        return DirectionalLink(scell_id=scell_id, distance_m=d, state=state,
                               pathloss_db=math.inf, clusters=[])
    pl = pathloss_db(d, state, pathloss, rng)
    return DirectionalLink(scell_id=scell_id, distance_m=d, state=state,
                           pathloss_db=pl,
                           clusters=sample_clusters(state, clusters, rng))


def refresh_fading(link: DirectionalLink, params: ClusterParams,
                   rng: np.random.Generator) -> DirectionalLink:
    """Re-draw the small-scale structure in place; state and shadowing stay fixed."""
    if link.state != LinkState.OUTAGE:
        link.clusters = sample_clusters(link.state, params, rng)
    return link


def _flat_subpaths(link: DirectionalLink):
    """Concatenate subpath angles/gains over all clusters of a link."""
    ue_az = np.concatenate([c.azimuth_ue_rad + c.ue_az_offsets for c in link.clusters])
    ue_el = np.concatenate([c.elevation_ue_rad + c.ue_el_offsets for c in link.clusters])
    bs_az = np.concatenate([c.azimuth_bs_rad + c.bs_az_offsets for c in link.clusters])
    bs_el = np.concatenate([c.elevation_bs_rad + c.bs_el_offsets for c in link.clusters])
    gains = np.concatenate([c.gains for c in link.clusters])
    return ue_az, ue_el, bs_az, bs_el, gains


def link_gain_matrix(link: DirectionalLink, ue_cb: Codebook, bs_cb: Codebook) -> np.ndarray:
    """Linear power gain for every (UE direction, BS direction) pair.

    Shape (n_ue_dirs, n_bs_dirs).  Each entry is the pathloss-scaled coherent
    subpath sum |sum_s g_s * A_ue(s) * A_bs(s)|^2 for that steering pair.
    Outage links yield the all-zero matrix.
    """
    if link.state == LinkState.OUTAGE:
        return np.zeros((ue_cb.n_directions, bs_cb.n_directions))
    ue_az, ue_el, bs_az, bs_el, gains = _flat_subpaths(link)
    resp_ue = response_matrix(ue_cb, ue_az, ue_el)           # (S, n_ue)
    resp_bs = response_matrix(bs_cb, bs_az, bs_el)           # (S, n_bs)
    amp = np.einsum("s,si,sk->ik", gains, resp_ue, resp_bs, optimize=False)
    return 10.0 ** (-link.pathloss_db / 10.0) * np.abs(amp) ** 2


def link_gain_linear(link: DirectionalLink, ue_dir: int, bs_dir: int,
                     ue_cb: Codebook, bs_cb: Codebook) -> float:
    """Linear power gain for one steering pair; 0 for outage links."""
    if link.state == LinkState.OUTAGE:
        return 0.0
    return float(link_gain_matrix(link, ue_cb, bs_cb)[ue_dir, bs_dir])
