"""Uplink sounding sweep: per-SCell report tables with running variance.

The UE sounds one direction at a time; each SCell scans its receive
directions, keeps the per-row maximum SINR and the direction that achieved
it, and tracks the variance of that maximum over past scans.  Entries whose
best SINR falls below the detection threshold collect nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .channel import DirectionalLink, LinkState, link_gain_matrix, refresh_fading

if TYPE_CHECKING:
    from .config import SimConfig

# Reference sounding duration: the energy-accumulation bonus is
# 10*log10(t_sig / T_REF_S), i.e. 0 dB at the 10 us default.
T_REF_S = 10e-6

THERMAL_NOISE_DBM_HZ = -174.0


@dataclass(frozen=True)
class SinrSample:
    """One measured SINR value; detected iff it reaches the threshold."""

    value_db: float
    detected: bool


@dataclass
class RtEntry:
    """Report-table cell for one (UE direction, SCell) pair.

    sinr_db/best_bs_dir reflect the latest scan and are None when that scan
    fell below threshold.  history holds the detected max-SINR values of past
    scans (bounded by the memory cap at update time); variance is always the
    population variance of history.
    """

    sinr_db: float | None = None
    best_bs_dir: int | None = None
    history: list[float] = field(default_factory=list)

    @property
    def detected(self) -> bool:
        return self.sinr_db is not None

    @property
    def variance(self) -> float | None:
        """Population variance of the stored history; None if empty."""
        if not self.history:
            return None
        return population_variance(self.history)

    def to_dict(self) -> dict:
        return {"sinr_db": self.sinr_db, "best_bs_dir": self.best_bs_dir,
                "variance": self.variance, "history": list(self.history)}

    @classmethod
    def from_dict(cls, d: dict) -> "RtEntry":
        return cls(sinr_db=d["sinr_db"], best_bs_dir=d["best_bs_dir"],
                   history=list(d["history"]))


@dataclass
class ReportTable:
    """Per-SCell table: one RtEntry per UE sounding direction."""

    scell_id: int
    rows: list[RtEntry]
    pairs_scanned: int = 0   # direction pairs examined so far (slots, per BF mode)

    def to_dict(self) -> dict:
        return {"scell_id": self.scell_id, "pairs_scanned": self.pairs_scanned,
                "rows": [r.to_dict() for r in self.rows]}


def population_variance(values) -> float:
    """Mean squared deviation (divide-by-count), computed in centered form."""
    arr = np.asarray(values, dtype=float)
    return float(np.mean((arr - arr.mean()) ** 2))


def noise_floor_dbm(w_tot_hz: float, nf_db: float) -> float:
    """Thermal noise power over the full band plus the receiver noise figure."""
    return THERMAL_NOISE_DBM_HZ + 10.0 * np.log10(w_tot_hz) + nf_db


def sinr_matrix(link: DirectionalLink, cfg: "SimConfig") -> np.ndarray:
    """SINR in dB for every (UE direction, BS direction) pair of one link.

    value = P_TX + 10*log10(gain) - N0 + 10*log10(t_sig / T_ref); the
    interference term is zero (single UE per trial), so this is an SNR.
    Outage pairs are -inf.
    """
    gains = link_gain_matrix(link, cfg.ue_codebook(), cfg.bs_codebook())
    with np.errstate(divide="ignore"):
        gain_db = 10.0 * np.log10(gains)
    bonus = 10.0 * np.log10(cfg.t_sig_s / T_REF_S)
    return cfg.p_tx_dbm + gain_db - cfg.noise_floor_dbm + bonus


def measure_sinr(link: DirectionalLink, ue_dir: int, bs_dir: int,
                 cfg: "SimConfig") -> SinrSample:
    """Measure one direction pair; outage links never detect."""
    if not 0 <= ue_dir < cfg.n_ue_dirs or not 0 <= bs_dir < cfg.n_bs_dirs:
        raise ValueError("direction index out of range")
    value = float(sinr_matrix(link, cfg)[ue_dir, bs_dir])
    return SinrSample(value_db=value, detected=value >= cfg.tau_db)


def scan_row(link: DirectionalLink, ue_dir: int, cfg: "SimConfig") -> RtEntry:
    """Scan all BS directions for one UE direction; no history update.

    Returns a fresh entry holding the max SINR and its argmax direction, or
    an undetected entry when the max stays below the threshold.
    """
    if not 0 <= ue_dir < cfg.n_ue_dirs:
        raise ValueError("ue_dir out of range")
    row = sinr_matrix(link, cfg)[ue_dir]
    best = int(np.argmax(row))
    value = float(row[best])
    if value < cfg.tau_db:
        return RtEntry()
    return RtEntry(sinr_db=value, best_bs_dir=best)


def update_variance(entry: RtEntry, new_sinr: float, memory_cap: int | None) -> RtEntry:
    """Append a detected max-SINR to the entry history, evicting beyond the cap.

    memory_cap None means unbounded memory.  Mutates and returns the entry;
    its variance property then covers exactly the stored window.
    """
    if memory_cap is not None and memory_cap < 1:
        raise ValueError("memory_cap must be >= 1 or None")
    h = entry.history
    h.append(new_sinr)
    if memory_cap is not None and len(h) > memory_cap:
        del h[: len(h) - memory_cap]
    return entry


def new_tables(scell_ids, n_ue_dirs: int) -> list[ReportTable]:
    """Empty report tables, one per SCell, each with n_ue_dirs rows."""
    return [ReportTable(scell_id=sid, rows=[RtEntry() for _ in range(n_ue_dirs)])
            for sid in scell_ids]


def full_sweep(links: list[DirectionalLink], cfg: "SimConfig",
               rng: np.random.Generator,
               tables: list[ReportTable] | None = None) -> list[ReportTable]:
    """Run one complete sounding sweep over every SCell and UE direction.

    On sweeps after the first (tables given), the small-scale fading of each
    link is refreshed first when cfg.refresh_fading is set.  Detected rows
    update their entry history; undetected rows keep history but lose their
    current SINR/direction.  pairs_scanned grows by n_ue*n_bs per sweep for an
    analog BS, or n_ue for a digital one (all directions in one slot).
    """
    first = tables is None
    if first:
        tables = new_tables([lk.scell_id for lk in links], cfg.n_ue_dirs)
    elif cfg.refresh_fading:
        for link in links:
            refresh_fading(link, cfg.clusters, rng)
    cap = cfg.memory_cap if cfg.memory_cap else None
    slots = cfg.n_ue_dirs * (1 if cfg.bs_architecture == "digital" else cfg.n_bs_dirs)
    for link, table in zip(links, tables):
        table.pairs_scanned += slots
        if link.state == LinkState.OUTAGE:
            for entry in table.rows:
                entry.sinr_db = None
                entry.best_bs_dir = None
            continue
        values = sinr_matrix(link, cfg)
        bests = np.argmax(values, axis=1)
        for i, entry in enumerate(table.rows):
            value = float(values[i, bests[i]])
            if value >= cfg.tau_db:
                entry.sinr_db = value
                entry.best_bs_dir = int(bests[i])
                update_variance(entry, value, cap)
            else:
                entry.sinr_db = None
                entry.best_bs_dir = None
    return tables
