"""Centralized cell selection: CRT assembly, attachment choice, handover, commands.

The master cell collects every SCell's report table over the backhaul,
scores the complete table under a selection policy, and pushes the outcome
out as a path-switch command to the target SCell (backhaul) plus a steering
command to the UE (legacy omnidirectional link).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .measurement import ReportTable, RtEntry

X2 = "x2"
LEGACY = "legacy"


class NoCellAvailable(Exception):
    """Raised when no CRT entry is detected, i.e. no mmWave cell can serve."""


@dataclass(frozen=True)
class MaxSinr:
    """Pick the entry with the highest SINR."""


@dataclass(frozen=True)
class MaxSinrHysteresis:
    """Max SINR selection; handovers need an improvement of delta_db."""

    delta_db: float = 0.0

    def __post_init__(self):
        if self.delta_db < 0:
            raise ValueError("delta_db must be >= 0")


@dataclass(frozen=True)
class VariancePenalized:
    """Score entries as sinr - weight * variance to favor stable cells."""

    weight: float = 0.1

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("weight must be >= 0")


SelectionPolicy = MaxSinr | MaxSinrHysteresis | VariancePenalized


@dataclass
class CompleteReportTable:
    """N_UE x M matrix of report entries, columns ordered by ascending SCell id."""

    scell_ids: list[int]
    entries: list[list[RtEntry]]    # entries[ue_dir][col]

    @property
    def n_ue_dirs(self) -> int:
        return len(self.entries)

    @property
    def n_scells(self) -> int:
        return len(self.scell_ids)

    def column(self, scell_id: int) -> list[RtEntry]:
        j = self.scell_ids.index(scell_id)
        return [row[j] for row in self.entries]

    def n_available(self) -> int:
        """SCells with at least one detected entry."""
        if not self.entries:
            return 0
        return sum(
            1 for j in range(self.n_scells)
            if any(row[j].detected for row in self.entries)
        )

    def to_dict(self) -> dict:
        return {"scell_ids": list(self.scell_ids),
                "entries": [[e.to_dict() for e in row] for row in self.entries]}

    @classmethod
    def from_dict(cls, d: dict) -> "CompleteReportTable":
        return cls(scell_ids=list(d["scell_ids"]),
                   entries=[[RtEntry.from_dict(e) for e in row] for row in d["entries"]])


@dataclass(frozen=True)
class AttachmentDecision:
    """Winning (UE direction, SCell, SCell direction) triple and its scores."""

    scell_id: int        # n_ID
    ue_dir: int          # d_UE
    bs_dir: int          # d_SCell
    sinr_db: float
    variance: float | None

    def to_dict(self) -> dict:
        return {"scell_id": self.scell_id, "ue_dir": self.ue_dir,
                "bs_dir": self.bs_dir, "sinr_db": self.sinr_db,
                "variance": self.variance}

    @classmethod
    def from_dict(cls, d: dict) -> "AttachmentDecision":
        return cls(scell_id=d["scell_id"], ue_dir=d["ue_dir"], bs_dir=d["bs_dir"],
                   sinr_db=d["sinr_db"], variance=d["variance"])


# --- control messages -------------------------------------------------------

@dataclass(frozen=True)
class RtReport:
    """A report table forwarded from an SCell to the MCell over X2."""

    scell_id: int
    table: dict
    channel: str = X2


@dataclass(frozen=True)
class PathSwitchCommand:
    """MCell -> target SCell over X2: serve this UE through bs_dir."""

    scell_id: int
    bs_dir: int
    channel: str = X2


@dataclass(frozen=True)
class UeSteerCommand:
    """MCell -> UE over the legacy microwave link: steer ue_dir toward scell_id."""

    ue_dir: int
    scell_id: int
    channel: str = LEGACY


ControlMessage = RtReport | PathSwitchCommand | UeSteerCommand

_MESSAGE_TYPES = {"rt_report": RtReport, "path_switch": PathSwitchCommand,
                  "ue_steer": UeSteerCommand}


def message_to_dict(msg: ControlMessage) -> dict:
    for name, cls in _MESSAGE_TYPES.items():
        if isinstance(msg, cls):
            d = {"type": name, "channel": msg.channel}
            d.update({k: v for k, v in msg.__dict__.items() if k != "channel"})
            return d
    raise TypeError(f"unknown message {msg!r}")


def message_from_dict(d: dict) -> ControlMessage:
    cls = _MESSAGE_TYPES[d["type"]]
    kwargs = {k: v for k, v in d.items() if k != "type"}
    return cls(**kwargs)


# --- handover outcomes -------------------------------------------------------

@dataclass(frozen=True)
class Stay:
    """Keep the current attachment."""


@dataclass(frozen=True)
class Handover:
    decision: AttachmentDecision


@dataclass(frozen=True)
class Detach:
    """No mmWave cell is usable; the UE falls back to the legacy cell only."""


HandoverOutcome = Stay | Handover | Detach


# --- operations --------------------------------------------------------------

def wrap_reports(tables: list[ReportTable]) -> list[RtReport]:
    """X2 report messages carrying each SCell's table."""
    return [RtReport(scell_id=t.scell_id, table=t.to_dict()) for t in tables]


def assemble_crt(reports: list[ReportTable]) -> CompleteReportTable:
    """Join per-SCell tables into the complete report table.

    Columns are ordered by ascending SCell id; entries are copies so later
    sweeps cannot mutate the assembled snapshot.
    """
    ids = [r.scell_id for r in reports]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate scell ids in reports")
    ordered = sorted(reports, key=lambda r: r.scell_id)
    if not ordered:
        return CompleteReportTable(scell_ids=[], entries=[])
    n_rows = len(ordered[0].rows)
    if any(len(r.rows) != n_rows for r in ordered):
        raise ValueError("reports disagree on the number of UE directions")
    entries = [
        [replace(r.rows[i], history=list(r.rows[i].history)) for r in ordered]
        for i in range(n_rows)
    ]
    return CompleteReportTable(scell_ids=[r.scell_id for r in ordered], entries=entries)


def entry_score(entry: RtEntry, policy: SelectionPolicy) -> float:
    """Policy score of a detected entry (higher wins)."""
    if isinstance(policy, VariancePenalized):
        var = entry.variance
        return entry.sinr_db - policy.weight * var if var is not None else entry.sinr_db
    return entry.sinr_db


def select_best(crt: CompleteReportTable, policy: SelectionPolicy) -> AttachmentDecision:
    """Highest-scoring detected entry; ties go to lower SCell id, then lower UE dir.

    Raises NoCellAvailable when every entry is undetected.
    """
    best = None
    best_key = None
    for i, row in enumerate(crt.entries):
        for j, entry in enumerate(row):
            if not entry.detected:
                continue
            # Lexicographic: score desc, scell id asc, ue_dir asc.
            key = (-entry_score(entry, policy), crt.scell_ids[j], i)
            if best_key is None or key < best_key:
                best_key = key
                best = AttachmentDecision(scell_id=crt.scell_ids[j], ue_dir=i,
                                          bs_dir=entry.best_bs_dir,
                                          sinr_db=entry.sinr_db,
                                          variance=entry.variance)
    if best is None:
        raise NoCellAvailable("no detected entry in the complete report table")
    return best


def _cell_score(crt: CompleteReportTable, scell_id: int, policy: SelectionPolicy) -> float:
    """Best current score of one cell's column; -inf if nothing detected."""
    if scell_id not in crt.scell_ids:
        return -math.inf
    scores = [entry_score(e, policy) for e in crt.column(scell_id) if e.detected]
    return max(scores) if scores else -math.inf


def handover_decision(crt: CompleteReportTable,
                      current: AttachmentDecision | None,
                      policy: SelectionPolicy) -> HandoverOutcome:
    """Stay / Handover / Detach given the latest CRT and the current attachment.

    With no detected entries the UE detaches from mmWave.  Without a current
    attachment any usable cell triggers the initial attach.  A different best
    cell triggers a handover, gated by delta_db under MaxSinrHysteresis: the
    candidate's score must exceed the current cell's score in this CRT by at
    least the hysteresis margin.
    """
    try:
        best = select_best(crt, policy)
    except NoCellAvailable:
        return Detach()
    if current is None:
        return Handover(best)
    if best.scell_id == current.scell_id:
        return Stay()
    if isinstance(policy, MaxSinrHysteresis):
        current_score = _cell_score(crt, current.scell_id, policy)
        candidate = entry_score(crt.entries[best.ue_dir][crt.scell_ids.index(best.scell_id)],
                                policy)
        if candidate - current_score < policy.delta_db:
            return Stay()
    return Handover(best)


def emit_commands(outcome: HandoverOutcome) -> list[ControlMessage]:
    """Phase-3 messages: one X2 path switch plus one legacy UE steer per handover."""
    if isinstance(outcome, Handover):
        d = outcome.decision
        return [PathSwitchCommand(scell_id=d.scell_id, bs_dir=d.bs_dir),
                UeSteerCommand(ue_dir=d.ue_dir, scell_id=d.scell_id)]
    return []
