"""Feature extraction: fixture oracles, edge cases, output format."""

from __future__ import annotations

import numpy as np
import pytest

from kmcsim.features import (
    FEATURE_COLUMNS,
    HEADER,
    FeatureError,
    attach_labels,
    extract_features,
    label_table,
    time_diff_stats,
    write_features,
)
from kmcsim.logio import parse_row

from conftest import archetype_doc, config_doc, group, load

EXPECTED_HEADER = (
    "token,total_events,"
    "cash_in_count,customer_verification_count,cash_out_count,"
    "p2p_sent_count,btc_buy_count,"
    "cash_in_ratio,customer_verification_ratio,cash_out_ratio,"
    "p2p_sent_ratio,btc_buy_ratio,"
    "cash_in_value,customer_verification_value,cash_out_value,"
    "p2p_sent_value,btc_buy_value,"
    "cash_in_value_ratio,customer_verification_value_ratio,"
    "cash_out_value_ratio,p2p_sent_value_ratio,btc_buy_value_ratio,"
    "time_diff_mean_all,time_diff_median_all,time_diff_std_all,"
    "time_diff_mean_cash_in,time_diff_median_cash_in,time_diff_std_cash_in,"
    "time_diff_mean_customer_verification,"
    "time_diff_median_customer_verification,"
    "time_diff_std_customer_verification,"
    "time_diff_mean_cash_out,time_diff_median_cash_out,time_diff_std_cash_out,"
    "time_diff_mean_p2p_sent,time_diff_median_p2p_sent,time_diff_std_p2p_sent,"
    "time_diff_mean_btc_buy,time_diff_median_btc_buy,time_diff_std_btc_buy,"
    "label"
)


def records(rows):
    return [parse_row(r, i + 1) for i, r in enumerate(rows)]


FIXTURE = records([
    "2022-09-01 00:00:00.00,C_b6589fc6,cash_in,10.00,",
    "2022-09-01 00:01:00.00,C_b6589fc6,cash_in,20.00,",
    "2022-09-01 00:03:00.00,C_b6589fc6,cash_out,5.00,",
])


class TestSchema:
    def test_column_order(self):
        assert HEADER == EXPECTED_HEADER
        assert len(FEATURE_COLUMNS) == 39


class TestTimeDiffStats:
    def test_too_few_events(self):
        assert time_diff_stats([]) == (None, None, None)
        assert time_diff_stats([5.0]) == (None, None, None)

    def test_single_gap_has_no_std(self):
        assert time_diff_stats([0.0, 60.0]) == (60.0, 60.0, None)

    def test_known_values(self):
        # Gaps 60 s and 120 s: mean 90, median 90, sample std
        # sqrt(((60-90)^2 + (120-90)^2) / 1) = sqrt(1800).
        mean, median, std = time_diff_stats([0.0, 60.0, 180.0])
        assert (mean, median) == (90.0, 90.0)
        assert std == 42.42640687119285
        assert std == np.std([60.0, 120.0], ddof=1)

    def test_median_of_even_gap_count(self):
        mean, median, _ = time_diff_stats([0.0, 10.0, 30.0, 90.0])
        assert median == 20.0
        assert mean == 30.0


class TestFixtureOracle:
    def row(self):
        rows = extract_features(FIXTURE)
        assert len(rows) == 1
        return rows[0]

    def test_counts_and_ratios(self):
        v = self.row().values
        assert v["total_events"] == 3
        assert v["cash_in_count"] == 2
        assert v["cash_out_count"] == 1
        assert v["customer_verification_count"] == 0
        assert v["cash_in_ratio"] == 2 / 3
        assert v["cash_out_ratio"] == 1 / 3
        assert v["p2p_sent_ratio"] == 0.0

    def test_values_and_value_ratios(self):
        v = self.row().values
        assert v["cash_in_value"] == 3000       # centi-units
        assert v["cash_out_value"] == 500
        assert v["cash_in_value_ratio"] == 3000 / 3500
        assert v["cash_out_value_ratio"] == 500 / 3500
        assert v["btc_buy_value_ratio"] == 0.0

    def test_time_diffs(self):
        v = self.row().values
        assert v["time_diff_mean_all"] == 90.0
        assert v["time_diff_median_all"] == 90.0
        assert v["time_diff_std_all"] == 42.42640687119285
        assert v["time_diff_mean_cash_in"] == 60.0
        assert v["time_diff_std_cash_in"] is None
        assert v["time_diff_mean_cash_out"] is None

    def test_formatted_row_is_exact(self, tmp_path):
        config = load(config_doc([archetype_doc()],
                                 [group(bad_actor_fraction=1.0)]))
        labelled = attach_labels([self.row()], label_table(config))
        path = tmp_path / "features.csv"
        assert write_features(labelled, path) == 1
        header, line = path.read_text(encoding="utf-8").splitlines()
        assert header == EXPECTED_HEADER
        expected = ",".join([
            "C_b6589fc6", "3",
            "2", "0", "1", "0", "0",
            "0.6666666666666666", "0.0", "0.3333333333333333", "0.0", "0.0",
            "30.00", "0", "5.00", "0.00", "0.00",
            "0.8571428571428571", "0.0", "0.14285714285714285", "0.0", "0.0",
            "90.0", "90.0", "42.42640687119285",
            "60.0", "60.0", "",
            "", "", "",
            "", "", "",
            "", "", "",
            "", "", "",
            "1",
        ])
        assert line == expected


class TestAggregation:
    def test_verification_successes_count_as_value(self):
        rows = extract_features(records([
            "2022-09-01 00:00:00.00,C_b6589fc6,id_verification,False,",
            "2022-09-01 00:01:00.00,C_b6589fc6,id_verification,True,",
            "2022-09-01 00:02:00.00,C_b6589fc6,cash_in,10.00,",
        ]))
        v = rows[0].values
        assert v["customer_verification_count"] == 2
        assert v["customer_verification_value"] == 100  # one success
        # One success enters the denominator at par with 1.00 currency.
        assert v["customer_verification_value_ratio"] == 100 / 1100
        assert v["cash_in_value_ratio"] == 1000 / 1100

    def test_scheduled_actions_only_count_globally(self):
        rows = extract_features(records([
            "2022-09-01 00:00:00.00,C_b6589fc6,cash_in,10.00,",
            "2022-09-01 00:01:00.00,C_b6589fc6,pay_rent,20.00,",
            "2022-09-01 00:02:00.00,C_b6589fc6,deposit_paycheque,30.00,",
        ]))
        v = rows[0].values
        assert v["total_events"] == 3
        assert sum(v[f"{p}_count"] for p in
                   ("cash_in", "customer_verification", "cash_out",
                    "p2p_sent", "btc_buy")) == 1
        # Rent and paycheque values still swell the denominator.
        assert v["cash_in_value_ratio"] == 1000 / 6000
        assert v["time_diff_mean_all"] == 60.0

    def test_zero_value_sum_leaves_ratios_empty(self):
        rows = extract_features(records([
            "2022-09-01 00:00:00.00,C_b6589fc6,id_verification,False,",
            "2022-09-01 00:01:00.00,C_b6589fc6,id_verification,False,",
        ]))
        v = rows[0].values
        assert v["customer_verification_ratio"] == 1.0
        assert v["customer_verification_value_ratio"] is None

    def test_join_only_token_gets_a_row(self):
        rows = extract_features(records([
            "2022-09-01 00:00:00.00,C_b6589fc6,customer_join,,",
        ]))
        v = rows[0].values
        assert v["total_events"] == 1
        assert v["cash_in_count"] == 0
        assert v["time_diff_mean_all"] is None

    def test_p2p_receivers_get_no_row(self):
        # Features describe initiating tokens only.
        rows = extract_features(records([
            "2022-09-01 00:00:00.00,C_b6589fc6,p2p_sent,5.00,C_356a192b",
        ]))
        assert [r.token for r in rows] == ["C_b6589fc6"]

    def test_rows_sorted_by_token(self):
        rows = extract_features(records([
            "2022-09-01 00:00:00.00,C_da4b9237,cash_in,1.00,",
            "2022-09-01 00:01:00.00,C_b6589fc6,cash_in,1.00,",
            "2022-09-01 00:02:00.00,C_356a192b,cash_in,1.00,",
        ]))
        tokens = [r.token for r in rows]
        assert tokens == sorted(tokens)


class TestLabels:
    def test_positional_assignment(self):
        config = load(config_doc([archetype_doc()],
                                 [group(count=4, bad_actor_fraction=0.5)]))
        labels = label_table(config)
        from kmcsim.logio import token_for
        assert [labels[token_for(i)] for i in range(4)] == [1, 1, 0, 0]

    def test_unknown_token_is_an_error(self):
        config = load(config_doc([archetype_doc()], [group(count=1)]))
        with pytest.raises(FeatureError, match="does not appear"):
            attach_labels(extract_features(records([
                "2022-09-01 00:00:00.00,C_356a192b,cash_in,1.00,",
            ])), label_table(config))

    def test_write_requires_labels(self, tmp_path):
        with pytest.raises(FeatureError, match="no label"):
            write_features(extract_features(FIXTURE), tmp_path / "f.csv")

    def test_extraction_is_deterministic(self, tmp_path):
        config = load(config_doc([archetype_doc()],
                                 [group(bad_actor_fraction=1.0)]))
        out = []
        for name in ("a.csv", "b.csv"):
            rows = attach_labels(extract_features(FIXTURE),
                                 label_table(config))
            path = tmp_path / name
            write_features(rows, path)
            out.append(path.read_bytes())
        assert out[0] == out[1]
