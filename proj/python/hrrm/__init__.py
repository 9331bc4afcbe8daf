"""Hierarchical radio resource management simulator."""

import json

from ._hrrm import (
    DegenerateInputError,
    Error,
    InsufficientResourcesError,
    ParseError,
    Receiver,
    UnknownKindError,
    ValidationError,
    compute_fairness,
    describe_cell,
    link_rate,
    normalize_scenario,
    one_shot_trial,
    partition_resources,
    run_command,
    schedule_dynamic,
    simulate,
    split_portions,
    to_common_unit,
)


def run_scenario(path, seed=None):
    """Runs a scenario file and returns the parsed summary."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return json.loads(simulate(text, seed)["summary_json"])


__all__ = [
    "DegenerateInputError",
    "Error",
    "InsufficientResourcesError",
    "ParseError",
    "Receiver",
    "UnknownKindError",
    "ValidationError",
    "compute_fairness",
    "describe_cell",
    "link_rate",
    "normalize_scenario",
    "one_shot_trial",
    "partition_resources",
    "run_command",
    "run_scenario",
    "schedule_dynamic",
    "simulate",
    "split_portions",
    "to_common_unit",
]
