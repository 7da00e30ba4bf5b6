import json
import math

import pytest

from rfe_lab import config
from rfe_lab.config import ConfigError, parse_config, canonical_text


def make_doc(**overrides):
    doc = {"schema": "rfe-lab/1", "campaign": {"kind": "fig2"}}
    doc.update(overrides)
    return doc


def test_minimal_fig2_round_trips_to_identical_text():
    first = parse_config(json.dumps(make_doc()))
    text = canonical_text(first)
    second = parse_config(text)
    assert canonical_text(second) == text
    assert second == first
    # Defaults are applied at parse time, so they appear in the text.
    assert first.algorithm is not None
    assert first.algorithm.J == 50 and first.algorithm.K == 50
    assert first.algorithm.lam == 0.0


@pytest.mark.parametrize("kind", config.CAMPAIGN_KINDS)
def test_every_kind_round_trips(kind):
    doc = make_doc(campaign={"kind": kind, "seed": 7, "trials": 3})
    if kind == "fig5":
        doc["instance"] = {"N": 100, "D": 1000, "epsilon": 1e-3, "delta": 1e-2}
        doc["model"] = {"A": 0.5, "B": 1.6}
    parsed = parse_config(json.dumps(doc))
    text = canonical_text(parsed)
    assert parse_config(text) == parsed
    assert text.endswith("\n")


def test_syntax_error_is_reported_as_config_error():
    with pytest.raises(ConfigError) as err:
        parse_config("{not json")
    assert "not valid JSON" in str(err.value)


def test_schema_version_mismatch():
    doc = make_doc(schema="rfe-lab/2")
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "schema"


def test_missing_schema_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps({"campaign": {"kind": "fig2"}}))
    assert err.value.path == "schema"


def test_delta_out_of_range_names_field_path():
    doc = make_doc(campaign={"kind": "validate", "delta": 1.5})
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "campaign.delta"
    assert "< 1" in err.value.message


def test_instance_delta_out_of_range_names_field_path():
    doc = make_doc(
        campaign={"kind": "fig5"},
        instance={"N": 10, "D": 10, "epsilon": 0.1, "delta": 1.5},
        model={"A": 0.5, "B": 1.6},
    )
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "instance.delta"


def test_depth_cap_above_grid_rejected():
    doc = make_doc(algorithm={"J": 8, "K": 9})
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "algorithm.K"
    assert "K <= J" in err.value.message


def test_unknown_fields_rejected_at_every_level():
    for doc, path in [
        (make_doc(extra=1), "extra"),
        (make_doc(campaign={"kind": "fig2", "bogus": 1}), "campaign.bogus"),
        (make_doc(algorithm={"J": 8, "K": 4, "typo": 1}), "algorithm.typo"),
    ]:
        with pytest.raises(ConfigError) as err:
            parse_config(json.dumps(doc))
        assert err.value.path == path
        assert "unknown field" in err.value.message


def test_noiseless_figure_rejects_positive_decay():
    doc = make_doc(algorithm={"J": 16, "K": 8, "lambda": 0.1})
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "algorithm.lambda"


def test_block_usage_is_kind_dependent():
    doc = make_doc(campaign={"kind": "fig4"}, algorithm={"J": 8, "K": 4})
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "algorithm"
    doc = make_doc(campaign={"kind": "fig5"})
    with pytest.raises(ConfigError):
        parse_config(json.dumps(doc))  # instance/model missing


def test_boolean_is_not_a_number():
    doc = make_doc(campaign={"kind": "validate", "epsilon": True})
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "campaign.epsilon"


def test_validate_kind_defaults():
    parsed = parse_config(json.dumps(make_doc(campaign={"kind": "validate"})))
    assert parsed.options["epsilon"] == 0.1
    assert parsed.options["delta"] == 0.1
    assert parsed.options["lambda"] == 0.01
    assert parsed.options["theta"] is None
    assert parsed.options["method"] == "auto"
    assert parsed.options["max_exact_shots"] == 20_000_000


def test_fig4_grid_ordering_enforced():
    doc = make_doc(campaign={"kind": "fig4", "epsilon_min": 0.1, "epsilon_max": 0.01})
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert err.value.path == "campaign.epsilon_min"


def test_write_csv_formatting(tmp_path):
    path = tmp_path / "table.csv"
    config.write_csv(
        path,
        ["name", "value", "flag", "missing"],
        [
            ["a", 1.0 / 3.0, True, None],
            ["b", float("nan"), False, 7],
        ],
    )
    content = path.read_text()
    lines = content.splitlines()
    assert lines[0] == "name,value,flag,missing"
    assert lines[1] == f"a,{1.0 / 3.0:.17g},true,"
    assert lines[2] == "b,nan,false,7"
    assert content.endswith("\n")
    # 17 significant digits are enough to reconstruct the double exactly.
    assert float(lines[1].split(",")[1]) == 1.0 / 3.0


def test_write_csv_rejects_ragged_rows(tmp_path):
    with pytest.raises(ValueError):
        config.write_csv(tmp_path / "bad.csv", ["a", "b"], [[1]])


def test_file_sha256_known_digest(tmp_path):
    path = tmp_path / "blob.bin"
    path.write_bytes(b"abc")
    assert (
        config.file_sha256(path)
        == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    )


def test_canonical_text_is_sorted_and_explicit():
    parsed = parse_config(json.dumps(make_doc(campaign={"kind": "fig4"})))
    payload = json.loads(canonical_text(parsed))
    campaign = payload["campaign"]
    assert list(payload) == sorted(payload)
    assert list(campaign) == sorted(campaign)
    assert campaign["lambdas"] == [0.1, 0.01, 0.001, 0.0001, 0.00001]
    assert campaign["points_per_decade"] == 5
    assert not math.isnan(campaign["delta"])
