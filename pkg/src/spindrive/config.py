"""Run configuration: flat key = value text with one section per scenario.

Example::

    [run]
    output_dir = out
    workers = 2
    oracle = off

    [scenario:fig5c]
    intensity_w_cm2 = 1e8
    t_end_ps = 1.0

    [scenario:sudden]

Keys in a scenario section override the scenario defaults; laboratory units
only (Tesla, meV, eV, fs, mJ/cm^2 or W/cm^2).  Exactly one of
fluence_mj_cm2 / intensity_w_cm2 may appear.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

_FLOAT_KEYS = {
    "soc_mev", "gap_ev", "fluence_mj_cm2", "intensity_w_cm2", "width_fs",
    "dt", "dt_coarse", "t_end_ps", "jex_mev", "delta_mev", "delta_e_mev",
    "eps_ex_ev", "d0", "b_tesla",
}


@dataclass
class ScenarioConfig:
    scenario: str
    overrides: dict = field(default_factory=dict)
    oracle: bool = False


@dataclass
class RunConfig:
    output_dir: Path
    workers: int
    scenarios: list


class ConfigError(ValueError):
    pass


def parse_config(path: str | Path) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    text = Path(path).read_text()
    parser.read_string(text, source=str(path))

    output_dir = Path("out")
    workers = 1
    oracle_default = False
    if parser.has_section("run"):
        run = parser["run"]
        output_dir = Path(run.get("output_dir", "out"))
        workers = run.getint("workers", 1)
        oracle_default = run.get("oracle", "off").lower() in ("on", "true", "1")
        known = {"output_dir", "workers", "oracle"}
        for key in run:
            if key not in known:
                raise ConfigError(f"[run] has unknown key {key!r}")

    from .scenarios import REGISTRY

    scenarios = []
    for section in parser.sections():
        if section == "run":
            continue
        if not section.startswith("scenario:"):
            raise ConfigError(f"unknown section [{section}]; "
                              "use [run] or [scenario:<name>]")
        name = section.split(":", 1)[1]
        if name not in REGISTRY:
            raise ConfigError(f"[{section}]: unknown scenario {name!r}")
        overrides = {}
        oracle = oracle_default
        for key, raw in parser[section].items():
            if key == "oracle":
                oracle = raw.lower() in ("on", "true", "1")
                continue
            if key not in _FLOAT_KEYS:
                raise ConfigError(f"[{section}]: unknown key {key!r}")
            try:
                overrides[key] = float(raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}]: {key} = {raw!r} "
                                  "is not a number") from exc
        if "fluence_mj_cm2" in overrides and "intensity_w_cm2" in overrides:
            raise ConfigError(f"[{section}]: specify exactly one of "
                              "fluence_mj_cm2 / intensity_w_cm2")
        scenarios.append(ScenarioConfig(name, overrides, oracle))
    if not scenarios:
        raise ConfigError("no [scenario:...] sections found")
    return RunConfig(output_dir, workers, scenarios)
