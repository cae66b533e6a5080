"""Per-agent feature extraction from an activity log.

One row per distinct initiating token, 39 features plus a ground-truth
label.  Five actions get dedicated columns: cash_in,
customer_verification (the log's ``id_verification``; the feature
prefix follows the established report vocabulary), cash_out, p2p_sent
and btc_buy.  Scheduled payments and join events still count toward
``total_events`` and the overall time-diff statistics, but have no
columns of their own.

Conventions, fixed here and relied on by tests:

* ``a_ratio``     = a_count / total_events.
* ``a_value``     = sum of the action's logged values; identity checks
  have a boolean value, so their "value" is the count of successes.
* ``a_value_ratio`` = a_value / (sum of value over *all* the agent's
  events, join events contributing 0); empty when that sum is zero.
* time diffs are gaps between successive events in seconds; mean and
  median need at least two events, and the standard deviation (sample,
  n-1 denominator) needs at least three.  Undefined statistics are
  emitted as empty fields.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from . import actions as act
from .config import SimulationConfig
from .logio import LogRecord, format_money, token_for

# Feature-column prefix per log action, in fixed column order.
PREFIX_FOR_ACTION = {
    act.CASH_IN: "cash_in",
    act.ID_VERIFICATION: "customer_verification",
    act.CASH_OUT: "cash_out",
    act.log_name(act.P2P_SEND): "p2p_sent",
    act.BTC_BUY: "btc_buy",
}
PREFIXES = tuple(PREFIX_FOR_ACTION.values())

FEATURE_COLUMNS: tuple[str, ...] = (
    ("total_events",)
    + tuple(f"{p}_count" for p in PREFIXES)
    + tuple(f"{p}_ratio" for p in PREFIXES)
    + tuple(f"{p}_value" for p in PREFIXES)
    + tuple(f"{p}_value_ratio" for p in PREFIXES)
    + ("time_diff_mean_all", "time_diff_median_all", "time_diff_std_all")
    + tuple(
        f"time_diff_{stat}_{p}"
        for p in PREFIXES
        for stat in ("mean", "median", "std")
    )
)

HEADER = "token," + ",".join(FEATURE_COLUMNS) + ",label"

# Verification successes enter value sums at par with one currency
# unit; money is tracked in cents, so one success is 100 centi-units.
_SUCCESS_CENTI = 100


class FeatureError(ValueError):
    """Raised when a log cannot be turned into a labelled table."""


def time_diff_stats(timestamps_s: list[float]
                    ) -> tuple[float | None, float | None, float | None]:
    """(mean, median, std) of successive gaps, in seconds.

    Fewer than two timestamps leave every statistic undefined; the
    sample standard deviation additionally needs at least two gaps.
    """
    if len(timestamps_s) < 2:
        return None, None, None
    gaps = [b - a for a, b in zip(timestamps_s, timestamps_s[1:])]
    mean = statistics.fmean(gaps)
    median = float(statistics.median(gaps))
    std = statistics.stdev(gaps) if len(gaps) >= 2 else None
    return mean, median, std


@dataclass
class _Accumulator:
    total_events: int = 0
    total_value_centi: int = 0
    all_times_cs: list[int] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    values_centi: dict[str, int] = field(default_factory=dict)
    times_cs: dict[str, list[int]] = field(default_factory=dict)


@dataclass(frozen=True)
class FeatureRow:
    """One agent's features, keyed by FEATURE_COLUMNS, plus the label."""

    token: str
    values: dict[str, int | float | None]
    label: int | None = None


def extract_features(records: list[LogRecord]) -> list[FeatureRow]:
    """Aggregate parsed log records into unlabelled feature rows.

    Rows come back sorted by token so output ordering is deterministic
    regardless of activity order.
    """
    accs: dict[str, _Accumulator] = {}
    for rec in records:
        acc = accs.get(rec.token)
        if acc is None:
            acc = accs[rec.token] = _Accumulator()
        acc.total_events += 1
        acc.all_times_cs.append(rec.time_cs)

        if rec.action == act.ID_VERIFICATION:
            value_centi = _SUCCESS_CENTI if rec.id_check_passed else 0
        elif rec.action == act.CUSTOMER_JOIN:
            value_centi = 0
        else:
            value_centi = rec.value_cents
        acc.total_value_centi += value_centi

        prefix = PREFIX_FOR_ACTION.get(rec.action)
        if prefix is not None:
            acc.counts[prefix] = acc.counts.get(prefix, 0) + 1
            acc.values_centi[prefix] = (
                acc.values_centi.get(prefix, 0) + value_centi
            )
            acc.times_cs.setdefault(prefix, []).append(rec.time_cs)

    rows: list[FeatureRow] = []
    for token in sorted(accs):
        acc = accs[token]
        out: dict[str, int | float | None] = {"total_events": acc.total_events}
        for p in PREFIXES:
            out[f"{p}_count"] = acc.counts.get(p, 0)
            out[f"{p}_ratio"] = acc.counts.get(p, 0) / acc.total_events
            out[f"{p}_value"] = acc.values_centi.get(p, 0)
            if acc.total_value_centi > 0:
                out[f"{p}_value_ratio"] = (
                    acc.values_centi.get(p, 0) / acc.total_value_centi
                )
            else:
                out[f"{p}_value_ratio"] = None

        seconds_all = [cs / 100.0 for cs in acc.all_times_cs]
        mean, median, std = time_diff_stats(seconds_all)
        out["time_diff_mean_all"] = mean
        out["time_diff_median_all"] = median
        out["time_diff_std_all"] = std
        for p in PREFIXES:
            seconds_p = [cs / 100.0 for cs in acc.times_cs.get(p, [])]
            mean, median, std = time_diff_stats(seconds_p)
            out[f"time_diff_mean_{p}"] = mean
            out[f"time_diff_median_{p}"] = median
            out[f"time_diff_std_{p}"] = std
        rows.append(FeatureRow(token=token, values=out))
    return rows


def label_table(config: SimulationConfig) -> dict[str, int]:
    """Ground-truth label per population token.

    Bad-actor flags are positional (first round(count * fraction) of
    each group), so labels depend only on the config, not the seed.
    Runs with new-customer arrivals enabled add accounts whose labels
    are not reconstructable here; labelling such logs is unsupported.
    """
    labels: dict[str, int] = {}
    numeric_id = 0
    for group in config.population:
        n_bad = int(round(group.count * group.bad_actor_fraction))
        for j in range(group.count):
            labels[token_for(numeric_id)] = 1 if j < n_bad else 0
            numeric_id += 1
    return labels


def attach_labels(rows: list[FeatureRow],
                  labels: dict[str, int]) -> list[FeatureRow]:
    """Join labels onto rows; unknown tokens are a hard error."""
    out = []
    for row in rows:
        label = labels.get(row.token)
        if label is None:
            raise FeatureError(
                f"token {row.token} does not appear in the configured "
                "population"
            )
        out.append(FeatureRow(token=row.token, values=row.values, label=label))
    return out


def _format_value(column: str, value: int | float | None) -> str:
    if value is None:
        return ""
    if column == "total_events" or column.endswith("_count"):
        return str(int(value))
    if column == "customer_verification_value":
        # A count of successes, not money.
        return str(int(value) // _SUCCESS_CENTI)
    if column.endswith("_value"):
        return format_money(int(value))
    return str(float(value))


def write_features(rows: list[FeatureRow], path: str) -> int:
    """Write the labelled feature table; returns the row count."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(HEADER + "\n")
        n = 0
        for row in rows:
            if row.label is None:
                raise FeatureError(f"row for {row.token} has no label")
            fields = [row.token]
            fields += [_format_value(c, row.values[c]) for c in FEATURE_COLUMNS]
            fields.append(str(row.label))
            fh.write(",".join(fields) + "\n")
            n += 1
    return n
