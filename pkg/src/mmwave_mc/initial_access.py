"""Analytical delay model for uplink- vs. downlink-based directional initial access.

Synchronization/random-access signals occur once per period; covering all
n_bs * n_ue direction pairs takes n_bs * n_ue / L scan opportunities, where L
is how many directions the receiving side can observe at once (1 for analog
beamforming, its full codebook if fully digital).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class BfArchitecture(Enum):
    ANALOG = "analog"
    DIGITAL = "digital"


class IaDesign(Enum):
    UPLINK_BASED = "ul"        # UE transmits preambles, cells receive
    DOWNLINK_BASED = "dl"      # cells transmit sync signals, UE receives


def simultaneous_directions(design: IaDesign, bs: BfArchitecture, ue: BfArchitecture,
                            n_bs: int, n_ue: int) -> int:
    """Directions the receiver observes per slot; the transmitter never matters."""
    if n_bs < 1 or n_ue < 1:
        raise ValueError("direction counts must be >= 1")
    if design == IaDesign.UPLINK_BASED:
        return n_bs if bs == BfArchitecture.DIGITAL else 1
    return n_ue if ue == BfArchitecture.DIGITAL else 1


def scan_count(design: IaDesign, bs: BfArchitecture, ue: BfArchitecture,
               n_bs: int, n_ue: int, l_override: int | None = None) -> int:
    """Scan opportunities needed to cover all direction pairs.

    l_override substitutes an explicit L (hybrid beamforming); counts round up
    when L does not divide the pair total.
    """
    l = l_override if l_override is not None else simultaneous_directions(
        design, bs, ue, n_bs, n_ue)
    if l < 1:
        raise ValueError("L must be >= 1")
    total = n_bs * n_ue
    return (total + l - 1) // l


def access_delay(scans: int, t_per: float) -> float:
    """Total delay in seconds: one scan opportunity per period."""
    if t_per <= 0:
        raise ValueError("t_per must be > 0")
    return scans * t_per


def overhead(t_sig: float, t_per: float) -> float:
    """Fraction of airtime spent sounding, t_sig / t_per."""
    if t_sig <= 0 or t_per <= 0:
        raise ValueError("durations must be > 0")
    if t_sig > t_per:
        raise ValueError("t_sig must not exceed t_per")
    return t_sig / t_per


@dataclass(frozen=True)
class DelayTableRow:
    """One architecture pairing with its DL- and UL-based scan counts and delays."""

    bs: BfArchitecture
    ue: BfArchitecture
    dl_scans: int
    dl_delay_s: float
    ul_scans: int
    ul_delay_s: float


ARCHITECTURE_ROWS = (
    (BfArchitecture.ANALOG, BfArchitecture.ANALOG),
    (BfArchitecture.ANALOG, BfArchitecture.DIGITAL),
    (BfArchitecture.DIGITAL, BfArchitecture.ANALOG),
    (BfArchitecture.DIGITAL, BfArchitecture.DIGITAL),
)


def delay_table(n_bs: int = 16, n_ue: int = 8, t_per: float = 200e-6) -> list[DelayTableRow]:
    """The 4-architecture x 2-design comparison matrix."""
    rows = []
    for bs, ue in ARCHITECTURE_ROWS:
        dl = scan_count(IaDesign.DOWNLINK_BASED, bs, ue, n_bs, n_ue)
        ul = scan_count(IaDesign.UPLINK_BASED, bs, ue, n_bs, n_ue)
        rows.append(DelayTableRow(bs=bs, ue=ue,
                                  dl_scans=dl, dl_delay_s=access_delay(dl, t_per),
                                  ul_scans=ul, ul_delay_s=access_delay(ul, t_per)))
    return rows
