"""Behavioral parameters of the theory-of-mind agent, plus named presets.

Presets live as flat key/value text files under data/presets: one
`max_capability`, one `mle_like_<layout>` reconstruction per bundled
layout, and the hand-diversified validation set v01..v10.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path


@dataclass(frozen=True)
class ToMParams:
    prob_greedy: float = 0.5
    lookahead_horizon: int = 2
    prob_obs: float = 0.5
    retain_goals: float = 0.9
    prob_pausing: float = 0.6
    thinking_prob: float = 0.2
    compliance: float = 0.8
    path_teamwork: float = 0.8
    rationality_coefficient: float = 10.0
    prob_random_action: float = 0.0

    def __post_init__(self):
        for name in (
            "prob_greedy",
            "prob_obs",
            "retain_goals",
            "prob_pausing",
            "compliance",
            "path_teamwork",
            "prob_random_action",
        ):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.lookahead_horizon not in (1, 2, 3, 4):
            raise ValueError(f"lookahead_horizon must be in 1..4, got {self.lookahead_horizon}")
        if not 0.0 <= self.thinking_prob <= 0.4:
            raise ValueError(f"thinking_prob must be in [0, 0.4], got {self.thinking_prob}")
        if not 0.0 <= self.rationality_coefficient <= 20.0:
            raise ValueError(
                f"rationality_coefficient must be in [0, 20], got {self.rationality_coefficient}"
            )


PARAM_FIELDS = tuple(f.name for f in fields(ToMParams))

_INT_FIELDS = {"lookahead_horizon"}


def parse_params_text(text: str) -> ToMParams:
    """Parse flat `key = value` lines; '#' starts a comment."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in PARAM_FIELDS:
            raise ValueError(f"line {lineno}: unknown parameter {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate parameter {key!r}")
        values[key] = int(val.strip()) if key in _INT_FIELDS else float(val.strip())
    missing = [k for k in PARAM_FIELDS if k not in values]
    if missing:
        raise ValueError(f"missing parameters: {missing}")
    return ToMParams(**values)


def params_to_text(params: ToMParams) -> str:
    lines = [f"{name} = {getattr(params, name)}" for name in PARAM_FIELDS]
    return "\n".join(lines) + "\n"


def load_params_file(path: str | Path) -> ToMParams:
    return parse_params_text(Path(path).read_text())


def _preset_dir():
    return resources.files("coopkitchen") / "data" / "presets"


def preset_names() -> list[str]:
    return sorted(
        p.name.removesuffix(".params") for p in _preset_dir().iterdir() if p.name.endswith(".params")
    )


def preset_params(name: str) -> ToMParams:
    res = _preset_dir() / f"{name}.params"
    try:
        text = res.read_text()
    except FileNotFoundError:
        raise KeyError(f"unknown preset {name!r}; available: {preset_names()}") from None
    return parse_params_text(text)


def max_capability_params() -> ToMParams:
    return preset_params("max_capability")


def mle_like_params(layout_name: str) -> ToMParams:
    try:
        return preset_params(f"mle_like_{layout_name}")
    except KeyError:
        raise KeyError(f"no mle_like preset for layout {layout_name!r}") from None


def validation_preset_names() -> list[str]:
    return [n for n in preset_names() if n.startswith("v") and n[1:].isdigit()]
