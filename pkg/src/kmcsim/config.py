"""Run configuration: a single strict JSON document.

Unknown keys are rejected so typos fail loudly instead of silently
running a different scenario.  ``parse_config`` raises on any problem;
``validate_config`` returns the full violation list so a validate
command can report everything at once.  ``serialize_config`` inverts
parsing, and the canonical serialization feeds the config hash recorded
in run metadata.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime
from importlib import resources

from . import actions as act
from .agents import AGENT_KINDS, BUSINESS, ArchetypeSpec, BadActorOverrides, NormalSpec

SCHEMA_VERSION = 1
EPOCH_FORMAT = "%Y-%m-%d %H:%M:%S"

REQUIRED_TOP_KEYS = (
    "schema_version",
    "seed",
    "epoch",
    "max_time_days",
    "population",
    "archetypes",
)
OPTIONAL_TOP_KEYS = {
    "unverified_cap": 10.0,
    "btc_price": 1.0,
    "boost_multiplier": 1.0e6,
    "new_customer_rate": 0.0,
    "initial_cash_balance": 0.0,
}
# Substitutions applied to flagged bad actors when the file omits them.
DEFAULT_BAD_ACTOR_OVERRIDES = {
    "id_success_prob": 0.5,
    "p2p_amount": {"mean": 5.0, "std": 3.0},
    "p2p_min_balance_threshold": {"mean": 15.0, "std": 3.0},
}


class ConfigError(ValueError):
    """Raised for unreadable, malformed or invalid configuration."""


@dataclass(frozen=True)
class Violation:
    """One semantic problem found by validation."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class PopulationGroup:
    archetype: str
    count: int
    bad_actor_fraction: float


@dataclass(frozen=True)
class SimulationConfig:
    schema_version: int
    seed: int
    epoch: datetime
    max_time_days: float
    unverified_cap: float
    btc_price: float
    boost_multiplier: float
    new_customer_rate: float
    initial_cash_balance: float
    bad_actor_overrides: BadActorOverrides
    archetype_specs: dict[str, ArchetypeSpec]
    population: list[PopulationGroup]


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"{where}: missing required key(s) {sorted(missing)}")


def _number(obj: dict, key: str, where: str) -> float:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


def _integer(obj: dict, key: str, where: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _boolean(obj: dict, key: str, where: str, default: bool = False) -> bool:
    v = obj.get(key, default)
    if not isinstance(v, bool):
        raise ConfigError(f"{where}.{key}: expected true/false, got {v!r}")
    return v


def _normal(obj: dict, key: str, where: str) -> NormalSpec:
    v = obj[key]
    here = f"{where}.{key}"
    _require_keys(v, {"mean", "std"}, {"mean", "std"}, here)
    return NormalSpec(mean=_number(v, "mean", here), std=_number(v, "std", here))


def _parse_archetype(obj: dict, where: str) -> ArchetypeSpec:
    allowed = {
        "name", "kind", "id_success_prob", "rates", "amounts",
        "p2p_min_balance_threshold", "receives_paycheque", "pays_rent",
        "has_loan", "loan",
    }
    required = {"name", "kind", "id_success_prob", "rates", "amounts",
                "p2p_min_balance_threshold"}
    _require_keys(obj, allowed, required, where)
    name = obj["name"]
    if not isinstance(name, str) or not name:
        raise ConfigError(f"{where}.name: expected a non-empty string")

    rates_obj = obj["rates"]
    _require_keys(rates_obj, set(act.FREE_ACTIONS), set(), f"{where}.rates")
    rates = {a: _normal(rates_obj, a, f"{where}.rates") for a in rates_obj}

    amounts_obj = obj["amounts"]
    money_actions = set(act.ALL_ACTIONS) - {act.ID_VERIFICATION, act.REPAY_LOAN}
    _require_keys(amounts_obj, money_actions, set(), f"{where}.amounts")
    amounts = {a: _normal(amounts_obj, a, f"{where}.amounts") for a in amounts_obj}

    has_loan = _boolean(obj, "has_loan", where)
    loan_original = None
    loan_fraction = None
    if "loan" in obj:
        loan_obj = obj["loan"]
        here = f"{where}.loan"
        _require_keys(loan_obj, {"original", "repayment_fraction"},
                      {"original", "repayment_fraction"}, here)
        loan_original = _normal(loan_obj, "original", here)
        loan_fraction = _number(loan_obj, "repayment_fraction", here)

    return ArchetypeSpec(
        name=name,
        kind=obj["kind"] if isinstance(obj["kind"], str) else str(obj["kind"]),
        rates=rates,
        amounts=amounts,
        p2p_threshold=_normal(obj, "p2p_min_balance_threshold", where),
        id_success_prob=_number(obj, "id_success_prob", where),
        receives_paycheque=_boolean(obj, "receives_paycheque", where),
        pays_rent=_boolean(obj, "pays_rent", where),
        has_loan=has_loan,
        loan_original=loan_original,
        loan_repayment_fraction=loan_fraction,
    )


def parse_config_text(text: str, source: str = "<config>") -> SimulationConfig:
    """Parse a config document; raises ConfigError on structural problems."""
    if not text.strip():
        raise ConfigError(
            f"{source}: empty document; required keys {list(REQUIRED_TOP_KEYS)}"
        )
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"{source}: JSON parse error at line {e.lineno} column {e.colno}: {e.msg}"
        ) from e

    allowed = set(REQUIRED_TOP_KEYS) | set(OPTIONAL_TOP_KEYS) | {"bad_actor_overrides"}
    _require_keys(doc, allowed, set(REQUIRED_TOP_KEYS), source)

    version = _integer(doc, "schema_version", source)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"{source}.schema_version: expected {SCHEMA_VERSION}, got {version}"
        )

    epoch_text = doc["epoch"]
    if not isinstance(epoch_text, str):
        raise ConfigError(f"{source}.epoch: expected a string timestamp")
    try:
        epoch = datetime.strptime(epoch_text, EPOCH_FORMAT)
    except ValueError as e:
        raise ConfigError(
            f"{source}.epoch: expected '{EPOCH_FORMAT}' format: {e}"
        ) from e

    overrides_obj = dict(DEFAULT_BAD_ACTOR_OVERRIDES)
    if "bad_actor_overrides" in doc:
        here = f"{source}.bad_actor_overrides"
        keys = set(DEFAULT_BAD_ACTOR_OVERRIDES)
        _require_keys(doc["bad_actor_overrides"], keys, keys, here)
        overrides_obj = doc["bad_actor_overrides"]
    overrides = BadActorOverrides(
        id_success_prob=_number(overrides_obj, "id_success_prob",
                                f"{source}.bad_actor_overrides"),
        p2p_amount=_normal(overrides_obj, "p2p_amount",
                           f"{source}.bad_actor_overrides"),
        p2p_threshold=_normal(overrides_obj, "p2p_min_balance_threshold",
                              f"{source}.bad_actor_overrides"),
    )

    archetypes_obj = doc["archetypes"]
    if not isinstance(archetypes_obj, list):
        raise ConfigError(f"{source}.archetypes: expected a list")
    specs: dict[str, ArchetypeSpec] = {}
    for idx, a in enumerate(archetypes_obj):
        spec = _parse_archetype(a, f"{source}.archetypes[{idx}]")
        if spec.name in specs:
            raise ConfigError(f"{source}.archetypes: duplicate name '{spec.name}'")
        specs[spec.name] = spec

    population_obj = doc["population"]
    if not isinstance(population_obj, list):
        raise ConfigError(f"{source}.population: expected a list")
    population = []
    for idx, g in enumerate(population_obj):
        here = f"{source}.population[{idx}]"
        keys = {"archetype", "count", "bad_actor_fraction"}
        _require_keys(g, keys, keys, here)
        if not isinstance(g["archetype"], str):
            raise ConfigError(f"{here}.archetype: expected a string")
        population.append(PopulationGroup(
            archetype=g["archetype"],
            count=_integer(g, "count", here),
            bad_actor_fraction=_number(g, "bad_actor_fraction", here),
        ))

    values = {k: _number(doc, k, source) if k in doc else default
              for k, default in OPTIONAL_TOP_KEYS.items()}

    return SimulationConfig(
        schema_version=version,
        seed=_integer(doc, "seed", source),
        epoch=epoch,
        max_time_days=_number(doc, "max_time_days", source),
        unverified_cap=values["unverified_cap"],
        btc_price=values["btc_price"],
        boost_multiplier=values["boost_multiplier"],
        new_customer_rate=values["new_customer_rate"],
        initial_cash_balance=values["initial_cash_balance"],
        bad_actor_overrides=overrides,
        archetype_specs=specs,
        population=population,
    )


def validate_config(config: SimulationConfig) -> list[Violation]:
    """Semantic checks; returns every violation found (empty = valid)."""
    out: list[Violation] = []

    def bad(code: str, message: str) -> None:
        out.append(Violation(code, message))

    if config.seed < 0:
        bad("seed_range", f"seed must be >= 0, got {config.seed}")
    if not config.max_time_days > 0:
        bad("max_time_range", f"max_time_days must be > 0, got {config.max_time_days}")
    if config.unverified_cap < 0:
        bad("cap_range", f"unverified_cap must be >= 0, got {config.unverified_cap}")
    if not config.btc_price > 0:
        bad("btc_price_range", f"btc_price must be > 0, got {config.btc_price}")
    if not config.boost_multiplier > 0:
        bad("boost_range",
            f"boost_multiplier must be > 0, got {config.boost_multiplier}")
    if config.new_customer_rate < 0:
        bad("arrival_rate_range",
            f"new_customer_rate must be >= 0, got {config.new_customer_rate}")
    if config.initial_cash_balance < 0:
        bad("initial_balance_range",
            f"initial_cash_balance must be >= 0, got {config.initial_cash_balance}")

    ov = config.bad_actor_overrides
    if not 0.0 <= ov.id_success_prob <= 1.0:
        bad("probability_range",
            f"bad_actor_overrides.id_success_prob must be in [0,1], "
            f"got {ov.id_success_prob}")
    for label, dist in (("p2p_amount", ov.p2p_amount),
                        ("p2p_min_balance_threshold", ov.p2p_threshold)):
        if dist.std < 0:
            bad("negative_std",
                f"bad_actor_overrides.{label}: negative standard deviation "
                f"{dist.std}")

    for name, spec in config.archetype_specs.items():
        where = f"archetype '{name}'"
        if spec.kind not in AGENT_KINDS:
            bad("unknown_kind", f"{where}: kind must be one of {AGENT_KINDS}, "
                f"got '{spec.kind}'")
        if not 0.0 <= spec.id_success_prob <= 1.0:
            bad("probability_range",
                f"{where}: id_success_prob must be in [0,1], "
                f"got {spec.id_success_prob}")
        for action, dist in spec.rates.items():
            if dist.std < 0:
                bad("negative_std",
                    f"{where}: rates.{action} has negative standard deviation "
                    f"{dist.std}")
        for action, dist in spec.amounts.items():
            if dist.std < 0:
                bad("negative_std",
                    f"{where}: amounts.{action} has negative standard deviation "
                    f"{dist.std}")
        if spec.p2p_threshold.std < 0:
            bad("negative_std",
                f"{where}: p2p_min_balance_threshold has negative standard "
                f"deviation {spec.p2p_threshold.std}")

        if spec.kind == BUSINESS:
            granted = ({a for a, d in spec.rates.items() if d.mean != 0 or d.std != 0}
                       | ({act.PAY_RENT} if spec.pays_rent else set())
                       | ({act.REPAY_LOAN} if spec.has_loan else set()))
            for action in sorted(granted & act.BUSINESS_EXCLUDED):
                bad("business_excluded_action",
                    f"{where}: business accounts cannot perform {action}")

        for action in (act.CASH_IN, act.CASH_OUT, act.P2P_SEND, act.BTC_BUY):
            dist = spec.rates.get(action)
            if dist is not None and (dist.mean > 0 or dist.std > 0):
                if action not in spec.amounts:
                    bad("missing_amounts",
                        f"{where}: rates.{action} set but amounts.{action} missing")
        if spec.pays_rent and act.PAY_RENT not in spec.amounts:
            bad("missing_amounts", f"{where}: pays_rent set but amounts.pay_rent "
                "missing")
        if spec.receives_paycheque and act.DEPOSIT_PAYCHEQUE not in spec.amounts:
            bad("missing_amounts",
                f"{where}: receives_paycheque set but amounts.deposit_paycheque "
                "missing")
        if spec.has_loan:
            if spec.loan_original is None or spec.loan_repayment_fraction is None:
                bad("missing_loan",
                    f"{where}: has_loan set but loan block missing")
            else:
                if spec.loan_original.std < 0:
                    bad("negative_std",
                        f"{where}: loan.original has negative standard deviation "
                        f"{spec.loan_original.std}")
                if not 0.0 < spec.loan_repayment_fraction <= 1.0:
                    bad("fraction_range",
                        f"{where}: loan.repayment_fraction must be in (0,1], "
                        f"got {spec.loan_repayment_fraction}")

    if not config.population:
        bad("empty_population", "population must list at least one group")
    for idx, group in enumerate(config.population):
        where = f"population[{idx}]"
        if group.archetype not in config.archetype_specs:
            bad("missing_archetype",
                f"{where}: archetype '{group.archetype}' is not defined")
        if group.count <= 0:
            bad("count_range", f"{where}: count must be > 0, got {group.count}")
        if not 0.0 <= group.bad_actor_fraction <= 1.0:
            bad("fraction_range",
                f"{where}: bad_actor_fraction must be in [0,1], "
                f"got {group.bad_actor_fraction}")
    return out


def parse_config(path: str) -> SimulationConfig:
    """Load, parse and fully validate a config file; raises ConfigError."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    config = parse_config_text(text, source=str(path))
    violations = validate_config(config)
    if violations:
        raise ConfigError("\n".join(str(v) for v in violations))
    return config


def _normal_dict(dist: NormalSpec) -> dict:
    return {"mean": dist.mean, "std": dist.std}


def serialize_config(config: SimulationConfig) -> dict:
    """Inverse of parsing: a JSON-ready dict that parses back equal."""
    archetypes = []
    for spec in config.archetype_specs.values():
        obj: dict = {
            "name": spec.name,
            "kind": spec.kind,
            "id_success_prob": spec.id_success_prob,
            "rates": {a: _normal_dict(d) for a, d in spec.rates.items()},
            "amounts": {a: _normal_dict(d) for a, d in spec.amounts.items()},
            "p2p_min_balance_threshold": _normal_dict(spec.p2p_threshold),
            "receives_paycheque": spec.receives_paycheque,
            "pays_rent": spec.pays_rent,
            "has_loan": spec.has_loan,
        }
        if spec.loan_original is not None:
            obj["loan"] = {
                "original": _normal_dict(spec.loan_original),
                "repayment_fraction": spec.loan_repayment_fraction,
            }
        archetypes.append(obj)
    return {
        "schema_version": config.schema_version,
        "seed": config.seed,
        "epoch": config.epoch.strftime(EPOCH_FORMAT),
        "max_time_days": config.max_time_days,
        "unverified_cap": config.unverified_cap,
        "btc_price": config.btc_price,
        "boost_multiplier": config.boost_multiplier,
        "new_customer_rate": config.new_customer_rate,
        "initial_cash_balance": config.initial_cash_balance,
        "bad_actor_overrides": {
            "id_success_prob": config.bad_actor_overrides.id_success_prob,
            "p2p_amount": _normal_dict(config.bad_actor_overrides.p2p_amount),
            "p2p_min_balance_threshold":
                _normal_dict(config.bad_actor_overrides.p2p_threshold),
        },
        "archetypes": archetypes,
        "population": [
            {"archetype": g.archetype, "count": g.count,
             "bad_actor_fraction": g.bad_actor_fraction}
            for g in config.population
        ],
    }


def config_sha256(config: SimulationConfig) -> str:
    """Hash of the canonical serialized form, recorded in run metadata."""
    canonical = json.dumps(serialize_config(config), sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def baseline_path():
    """Path to the packaged baseline scenario file."""
    return resources.files("kmcsim").joinpath("data/baseline.json")


def baseline_scenario() -> SimulationConfig:
    """The shipped default scenario: 1000 agents, half flagged bad."""
    text = baseline_path().read_text(encoding="utf-8")
    config = parse_config_text(text, source="baseline.json")
    violations = validate_config(config)
    if violations:
        raise ConfigError("baseline.json: " + "; ".join(str(v) for v in violations))
    return config
