# -*- coding: utf-8 -*-
"""Built-in simulation scenarios and the declarative config file format."""

from __future__ import annotations

import json
import os
from typing import Any, Dict, List, Tuple

import yaml
from pydantic import ValidationError

from mcar_system.errors import InvalidInputError
from mcar_system.simgen import (
    DistributionKind,
    DistributionSpec,
    MechanismKind,
    MechanismSpec,
    ScenarioSpec,
)

DEFAULT_N = 200
DEFAULT_RATE = 0.1

# name fragment -> (distribution kind, t2 off-diagonal scale)
_DISTRIBUTIONS: Dict[str, Tuple[DistributionKind, float]] = {
    "normal": (DistributionKind.STD_NORMAL, 0.0),
    "clayton-exp1": (DistributionKind.CLAYTON_EXP1, 0.0),
    "clayton-chisq4": (DistributionKind.CLAYTON_CHISQ4, 0.0),
    "t2": (DistributionKind.STUDENT_T2, 0.0),
    "t2s01": (DistributionKind.STUDENT_T2, 0.1),
    "t2s05": (DistributionKind.STUDENT_T2, 0.5),
}

_LABELS = {
    "normal": "standard normal",
    "clayton-exp1": "Clayton(1) copula, Exp(1) margins",
    "clayton-chisq4": "Clayton(1) copula, chi2_4 margins",
    "t2": "standard Student t2",
    "t2s01": "Student t2, scale off-diagonal 0.1",
    "t2s05": "Student t2, scale off-diagonal 0.5",
}


def _mech(kind: MechanismKind, targets, controls=()) -> MechanismSpec:
    return MechanismSpec(
        kind=kind, targets=tuple(targets), controls=tuple(controls), rate=DEFAULT_RATE
    )


def _scenario(name: str, dist: str, dim: int, mechs, description: str) -> ScenarioSpec:
    kind, offdiag = _DISTRIBUTIONS[dist]
    return ScenarioSpec(
        name=name,
        description=f"{_LABELS[dist]}; {description}",
        distribution=DistributionSpec(kind=kind, dim=dim, scale_offdiag=offdiag),
        n=DEFAULT_N,
        mechanisms=tuple(mechs),
    )


def _build_catalog() -> Dict[str, ScenarioSpec]:
    catalog: Dict[str, ScenarioSpec] = {}

    def add(spec: ScenarioSpec) -> None:
        catalog[spec.name] = spec

    y_cols = (2, 3, 4)
    for dist in ("normal", "clayton-exp1", "clayton-chisq4", "t2"):
        add(_scenario(
            f"2x3y-{dist}-mcar", dist, 5,
            [_mech(MechanismKind.MCAR, y_cols)],
            "MCAR in vars 3-5",
        ))
        add(_scenario(
            f"2x3y-{dist}-mar1to9", dist, 5,
            [_mech(MechanismKind.MAR_1_TO_X, (2, 4, 3), (0, 0, 1))],
            "MAR 1 to 9, var 1 controls vars 3 and 5, var 2 controls var 4",
        ))
        add(_scenario(
            f"2x3y-{dist}-marrank", dist, 5,
            [_mech(MechanismKind.MAR_RANK, (2, 4, 3), (0, 0, 1))],
            "MAR rank, var 1 controls vars 3 and 5, var 2 controls var 4",
        ))
    for dist in ("normal", "clayton-exp1", "clayton-chisq4"):
        add(_scenario(
            f"2x3y-{dist}-marrank-mcar3", dist, 5,
            [
                _mech(MechanismKind.MAR_RANK, (3, 4), (2, 2)),
                _mech(MechanismKind.MCAR, (2,)),
            ],
            "MAR rank, var 3 controls vars 4 and 5, then MCAR in var 3",
        ))
    for dist in ("normal", "clayton-exp1", "t2", "t2s01", "t2s05"):
        add(_scenario(
            f"2x3y-{dist}-censor", dist, 5,
            [_mech(MechanismKind.MNAR_UPPER_CENSOR, y_cols)],
            "MNAR upper censoring of vars 3-5",
        ))
    add(_scenario(
        "1x2y-normal-marrank", "normal", 3,
        [_mech(MechanismKind.MAR_RANK, (1, 2), (0, 0))],
        "MAR rank, var 1 controls vars 2 and 3",
    ))
    add(_scenario(
        "5x5y-normal-marrank", "normal", 10,
        [_mech(MechanismKind.MAR_RANK, range(5, 10), range(5))],
        "MAR rank, vars 1-5 control vars 6-10",
    ))
    return catalog


BUILTIN_SCENARIOS: Dict[str, ScenarioSpec] = _build_catalog()


def list_scenarios() -> List[ScenarioSpec]:
    return [BUILTIN_SCENARIOS[name] for name in sorted(BUILTIN_SCENARIOS)]


def get_scenario(name: str) -> ScenarioSpec:
    try:
        return BUILTIN_SCENARIOS[name]
    except KeyError:
        raise InvalidInputError(
            f"Unknown scenario '{name}'. Run 'scenario-list' to see the built-in names."
        )


def load_config_file(path: str) -> Dict[str, Any]:
    """Reads a JSON (default) or YAML (.yaml/.yml) mapping."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            if path.endswith((".yaml", ".yml")):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise InvalidInputError(f"Config file '{path}' could not be parsed: {e}")
    if not isinstance(data, dict):
        raise InvalidInputError(f"Config file '{path}' must hold a mapping at top level.")
    return data


def load_scenario(path: str) -> ScenarioSpec:
    """Loads a ScenarioSpec; a bare {"builtin": name, ...} mapping extends a catalog entry."""
    data = load_config_file(path)
    return scenario_from_dict(data)


def scenario_from_dict(data: Dict[str, Any]) -> ScenarioSpec:
    if "builtin" in data:
        base = get_scenario(data["builtin"]).model_dump(mode="json")
        overrides = {k: v for k, v in data.items() if k != "builtin"}
        rate = overrides.pop("rate", None)
        spec_data = {**base, **overrides}
    else:
        rate = None
        spec_data = data
    try:
        spec = ScenarioSpec.model_validate(spec_data)
    except ValidationError as e:
        raise InvalidInputError(f"Invalid scenario: {e}")
    return spec.with_rate(rate) if rate is not None else spec


def dump_scenario(spec: ScenarioSpec, path: str) -> str:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    payload = spec.model_dump(mode="json")
    with open(path, "w", encoding="utf-8") as f:
        if path.endswith((".yaml", ".yml")):
            yaml.safe_dump(payload, f, sort_keys=False)
        else:
            json.dump(payload, f, ensure_ascii=False, indent=2)
    return path
