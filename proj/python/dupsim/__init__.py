"""System level simulator of PDCP packet duplication in 5G DC and CA."""

from dupsim._core import (
    ChannelRealization,
    __version__,
    ConfigError,
    LinkModelConfig,
    ReceiverWindow,
    RunConfig,
    TriggerConfig,
    attempt_outcome,
    compute_cdf,
    evaluate_trigger,
    handover_trace,
    noise_power_dbm,
    pathloss_db,
    quantile,
    run_campaign,
    run_iteration,
    sinr_db,
)

__all__ = [
    "ChannelRealization",
    "ConfigError",
    "LinkModelConfig",
    "ReceiverWindow",
    "RunConfig",
    "TriggerConfig",
    "attempt_outcome",
    "compute_cdf",
    "evaluate_trigger",
    "handover_trace",
    "noise_power_dbm",
    "pathloss_db",
    "quantile",
    "run_campaign",
    "run_iteration",
    "sinr_db",
]
