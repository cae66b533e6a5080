"""Shared builders for test configs and worlds."""

from __future__ import annotations

import json

import pytest

from kmcsim.config import SimulationConfig, parse_config_text, validate_config


def normal(mean: float, std: float = 0.0) -> dict:
    return {"mean": mean, "std": std}


def archetype_doc(
    name: str = "tester",
    kind: str = "individual",
    rates: dict | None = None,
    amounts: dict | None = None,
    threshold: dict | None = None,
    id_success_prob: float = 1.0,
    **flags,
) -> dict:
    """An archetype JSON object with benign defaults."""
    doc = {
        "name": name,
        "kind": kind,
        "id_success_prob": id_success_prob,
        "rates": rates if rates is not None else {"cash_in": normal(2.0)},
        "amounts": amounts if amounts is not None else {"cash_in": normal(20.0)},
        "p2p_min_balance_threshold": threshold if threshold is not None else normal(0.0),
    }
    doc.update(flags)
    return doc


def config_doc(
    archetypes: list[dict],
    population: list[dict],
    *,
    seed: int = 7,
    max_time_days: float = 1.0,
    **top,
) -> dict:
    doc = {
        "schema_version": 1,
        "seed": seed,
        "epoch": "2022-09-01 00:00:00",
        "max_time_days": max_time_days,
        "archetypes": archetypes,
        "population": population,
    }
    doc.update(top)
    return doc


def group(archetype: str = "tester", count: int = 1,
          bad_actor_fraction: float = 0.0) -> dict:
    return {"archetype": archetype, "count": count,
            "bad_actor_fraction": bad_actor_fraction}


def load(doc: dict) -> SimulationConfig:
    """Parse and fully validate a config dict."""
    config = parse_config_text(json.dumps(doc), source="<test>")
    violations = validate_config(config)
    assert not violations, violations
    return config


@pytest.fixture
def simple_config() -> SimulationConfig:
    """One forever-verifiable agent doing cash_in at 2/day."""
    return load(config_doc([archetype_doc()], [group()]))
