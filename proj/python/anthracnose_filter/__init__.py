from ._core import (
    ConfigError,
    FilterCollapse,
    FilterConfig,
    GridSettings,
    ModelParams,
    ScenarioConfig,
    ScenarioMatrix,
    SimConfig,
    ValidationError,
    compare,
    config_keys,
    load_config,
    parse_config,
    predict,
    run_filter,
    simulate,
)

__all__ = [
    "ConfigError",
    "FilterCollapse",
    "FilterConfig",
    "GridSettings",
    "ModelParams",
    "ScenarioConfig",
    "ScenarioMatrix",
    "SimConfig",
    "ValidationError",
    "compare",
    "config_keys",
    "load_config",
    "parse_config",
    "predict",
    "run_filter",
    "simulate",
]
