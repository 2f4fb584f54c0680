"""Simulation configuration: defaults, validation, and the key=value file format.

Config files are flat `key = value` lines (# comments allowed) whose keys
mirror SimConfig field names; channel parameters use prefixed keys such as
los_alpha_db or mean_clusters.  The packaged default.config carries the full
default parameter set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources

from .beamforming import Codebook, make_codebook
from .channel import ClusterParams, PathlossParams, StatePathloss
from .controller import MaxSinr, MaxSinrHysteresis, SelectionPolicy, VariancePenalized
from .deployment import SimArea
from .measurement import noise_floor_dbm

POLICY_NAMES = ("max_sinr", "max_sinr_hysteresis", "variance_penalized")


class ConfigError(ValueError):
    """Invalid configuration; carries the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


@dataclass(frozen=True)
class SimConfig:
    """Full parameter set for one simulation campaign."""

    # Radio / link budget
    w_tot_hz: float = 1e9
    p_tx_dbm: float = 30.0
    nf_db: float = 5.0
    f_c_hz: float = 28e9
    tau_db: float = -5.0

    # Arrays and codebooks
    bs_rows: int = 8
    bs_cols: int = 8
    ue_rows: int = 4
    ue_cols: int = 4
    n_bs_dirs: int = 16
    n_ue_dirs: int = 8
    element_spacing_wl: float = 0.5
    bs_architecture: str = "analog"     # "analog" or "digital" receive BF

    # Topology
    lambda_bs: float = 30.0             # density used by single trials
    lambda_bs_grid: tuple[float, ...] = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0)
    area_width_km: float = 0.5 ** 0.5   # square of area 0.5 km^2
    area_height_km: float = 0.5 ** 0.5

    # Sounding timing
    t_sig_s: float = 10e-6
    t_per_s: float = 200e-6
    phi_ov: float = 0.05
    t_sig_grid_s: tuple[float, ...] = (10e-6, 100e-6)

    # Campaign shape
    n_trials: int = 500
    base_seed: int = 1
    sweeps_per_trial: int = 10
    memory_cap: int = 10                # 0 = unbounded history
    refresh_fading: bool = True

    # Selection policy
    policy: str = "max_sinr"
    hysteresis_db: float = 0.0
    variance_weight: float = 0.1

    # Channel model
    pathloss: PathlossParams = field(default_factory=PathlossParams)
    clusters: ClusterParams = field(default_factory=ClusterParams)

    @property
    def noise_floor_dbm(self) -> float:
        return noise_floor_dbm(self.w_tot_hz, self.nf_db)

    @property
    def area(self) -> SimArea:
        return SimArea(width_km=self.area_width_km, height_km=self.area_height_km)

    def ue_codebook(self) -> Codebook:
        return make_codebook(self.ue_rows, self.ue_cols, self.n_ue_dirs,
                             self.element_spacing_wl)

    def bs_codebook(self) -> Codebook:
        return make_codebook(self.bs_rows, self.bs_cols, self.n_bs_dirs,
                             self.element_spacing_wl)

    def selection_policy(self) -> SelectionPolicy:
        if self.policy == "max_sinr":
            return MaxSinr()
        if self.policy == "max_sinr_hysteresis":
            return MaxSinrHysteresis(delta_db=self.hysteresis_db)
        if self.policy == "variance_penalized":
            return VariancePenalized(weight=self.variance_weight)
        raise ConfigError("policy", f"unknown policy '{self.policy}'")

    def with_t_sig(self, t_sig_s: float) -> "SimConfig":
        """Copy with a new sounding duration and consistently derived overhead."""
        return replace(self, t_sig_s=t_sig_s, phi_ov=t_sig_s / self.t_per_s)

    def validate(self) -> "SimConfig":
        """Raise ConfigError on any inconsistent or out-of-range field."""
        positives = ["w_tot_hz", "f_c_hz", "t_sig_s", "t_per_s",
                     "area_width_km", "area_height_km", "element_spacing_wl"]
        for key in positives:
            if getattr(self, key) <= 0:
                raise ConfigError(key, "must be > 0")
        at_least_one = ["bs_rows", "bs_cols", "ue_rows", "ue_cols",
                        "n_bs_dirs", "n_ue_dirs", "n_trials", "sweeps_per_trial"]
        for key in at_least_one:
            if getattr(self, key) < 1:
                raise ConfigError(key, "must be >= 1")
        if self.lambda_bs < 0:
            raise ConfigError("lambda_bs", "must be >= 0")
        if any(lam < 0 for lam in self.lambda_bs_grid):
            raise ConfigError("lambda_bs_grid", "densities must be >= 0")
        if not self.lambda_bs_grid:
            raise ConfigError("lambda_bs_grid", "must contain at least one density")
        if not self.t_sig_grid_s or any(t <= 0 for t in self.t_sig_grid_s):
            raise ConfigError("t_sig_grid_s", "durations must be > 0")
        if self.memory_cap < 0:
            raise ConfigError("memory_cap", "must be >= 1, or 0 for unbounded")
        if self.t_sig_s > self.t_per_s:
            raise ConfigError("t_sig_s", "must not exceed t_per_s")
        if self.f_c_hz != self.pathloss.f_c_hz:
            raise ConfigError("f_c_hz", "must match the channel pathloss carrier frequency")
        if not math.isclose(self.phi_ov, self.t_sig_s / self.t_per_s,
                            rel_tol=1e-9, abs_tol=1e-12):
            raise ConfigError("phi_ov", "inconsistent with t_sig_s / t_per_s")
        if self.bs_architecture not in ("analog", "digital"):
            raise ConfigError("bs_architecture", "must be 'analog' or 'digital'")
        if self.policy not in POLICY_NAMES:
            raise ConfigError("policy", f"must be one of {POLICY_NAMES}")
        if self.hysteresis_db < 0:
            raise ConfigError("hysteresis_db", "must be >= 0")
        if self.variance_weight < 0:
            raise ConfigError("variance_weight", "must be >= 0")
        return self


# Keys stored inside the nested channel parameter dataclasses.
_PATHLOSS_KEYS = {
    "los_alpha_db": ("los", "alpha_db"),
    "los_beta": ("los", "beta"),
    "los_sigma_db": ("los", "sigma_db"),
    "nlos_alpha_db": ("nlos", "alpha_db"),
    "nlos_beta": ("nlos", "beta"),
    "nlos_sigma_db": ("nlos", "sigma_db"),
    "a_los_per_m": (None, "a_los_per_m"),
    "a_out_per_m": (None, "a_out_per_m"),
    "b_out": (None, "b_out"),
}
_CLUSTER_KEYS = ("mean_clusters", "subpaths_per_cluster",
                 "angular_spread_rad", "elevation_std_rad")

_TUPLE_FIELDS = ("lambda_bs_grid", "t_sig_grid_s")
_INT_FIELDS = ("bs_rows", "bs_cols", "ue_rows", "ue_cols", "n_bs_dirs", "n_ue_dirs",
               "n_trials", "base_seed", "sweeps_per_trial", "memory_cap",
               "subpaths_per_cluster")
_BOOL_FIELDS = ("refresh_fading",)
_STR_FIELDS = ("policy", "bs_architecture")


def _parse_scalar(key: str, raw: str):
    if key in _STR_FIELDS:
        return raw
    if key in _BOOL_FIELDS:
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ConfigError(key, f"expected a boolean, got '{raw}'")
    try:
        if key in _INT_FIELDS:
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(key, f"expected a number, got '{raw}'") from None


def parse_config_text(text: str, source: str = "<config>") -> SimConfig:
    """Parse key=value config text into a validated SimConfig."""
    cfg_kwargs: dict = {}
    pl_kwargs: dict = {}
    cl_kwargs: dict = {}
    sim_fields = set(SimConfig.__dataclass_fields__) - {"pathloss", "clusters"}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}", f"expected 'key = value', got '{stripped}'")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key in _TUPLE_FIELDS:
            try:
                cfg_kwargs[key] = tuple(float(v) for v in raw.split(",") if v.strip())
            except ValueError:
                raise ConfigError(key, f"expected comma-separated numbers, got '{raw}'") from None
        elif key in _PATHLOSS_KEYS:
            pl_kwargs[key] = _parse_scalar(key, raw)
        elif key in _CLUSTER_KEYS:
            cl_kwargs[key] = _parse_scalar(key, raw)
        elif key in sim_fields:
            cfg_kwargs[key] = _parse_scalar(key, raw)
        else:
            raise ConfigError(key, "unknown configuration key")
    if pl_kwargs:
        cfg_kwargs["pathloss"] = _build_pathloss(pl_kwargs, cfg_kwargs.get("f_c_hz"))
    elif "f_c_hz" in cfg_kwargs:
        cfg_kwargs["pathloss"] = replace(PathlossParams(), f_c_hz=cfg_kwargs["f_c_hz"])
    if cl_kwargs:
        int_sub = {k: int(v) if k == "subpaths_per_cluster" else v
                   for k, v in cl_kwargs.items()}
        cfg_kwargs["clusters"] = ClusterParams(**int_sub)
    return SimConfig(**cfg_kwargs).validate()


def _build_pathloss(pl_kwargs: dict, f_c_hz: float | None) -> PathlossParams:
    base = PathlossParams()
    los = {"alpha_db": base.los.alpha_db, "beta": base.los.beta, "sigma_db": base.los.sigma_db}
    nlos = {"alpha_db": base.nlos.alpha_db, "beta": base.nlos.beta, "sigma_db": base.nlos.sigma_db}
    scalars = {"a_los_per_m": base.a_los_per_m, "a_out_per_m": base.a_out_per_m,
               "b_out": base.b_out}
    for key, value in pl_kwargs.items():
        group, name = _PATHLOSS_KEYS[key]
        if group == "los":
            los[name] = value
        elif group == "nlos":
            nlos[name] = value
        else:
            scalars[name] = value
    return PathlossParams(los=StatePathloss(**los), nlos=StatePathloss(**nlos),
                          f_c_hz=f_c_hz if f_c_hz is not None else base.f_c_hz,
                          **scalars)


def load_config(path: str | None = None) -> SimConfig:
    """Load a config file; with no path, the packaged defaults."""
    if path is None:
        text = resources.files("mmwave_mc").joinpath("default.config").read_text()
        return parse_config_text(text, source="default.config")
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), source=path)
