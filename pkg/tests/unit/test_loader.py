"""
Unit tests for config ingestion.

Tests parsing, referential integrity and strict routing validation.
"""

import json

import pytest

from app.core.errors import ConfigError
from app.services.loader import load_mcn, load_mcn_file
from tests.conftest import EXAMPLES_DIR


def _dump(doc) -> str:
    return json.dumps(doc)


class TestLoadMcn:
    """Test load_mcn."""

    def test_example1_loads(self, example1_doc):
        """Test the Example-1 document becomes a two-by-two network."""
        mcn = load_mcn(_dump(example1_doc))
        assert (mcn.m, mcn.ell) == (2, 2)
        assert mcn.g_r.controller == "v_uc"
        assert mcn.g_o.terminals == ("v_y1", "v_y2")

    def test_unit_weights_when_omitted(self, example1_doc):
        """Test omitted weights mean unit weights on every scheduled edge."""
        mcn = load_mcn(_dump(example1_doc))
        assert mcn.weights_r[1].weights == {
            ("v_uc", "v1"): 1.0,
            ("v_uc", "v2"): 1.0,
            ("v1", "v_u2"): 1.0,
            ("v2", "v_u2"): 1.0,
        }

    def test_explicit_weights(self, example1_doc):
        """Test weight keys of the form a->b."""
        example1_doc["weights_r"] = [
            {"v_uc->v1": 2.0, "v1->v_u1": -0.5},
            {"v_uc->v1": 1.0, "v_uc->v2": 1.0, "v1->v_u2": 1.0, "v2->v_u2": 3.0},
        ]
        mcn = load_mcn(_dump(example1_doc))
        assert mcn.weights_r[0].weight(("v1", "v_u1")) == -0.5

    def test_missing_weight(self, example1_doc):
        """Test given weights must cover every scheduled edge."""
        example1_doc["weights_r"] = [{"v_uc->v1": 2.0}, {}]
        with pytest.raises(ConfigError, match="missing weights"):
            load_mcn(_dump(example1_doc))

    def test_unknown_node_in_edge(self, example1_doc):
        """Test edges must reference declared nodes."""
        example1_doc["controllability"]["edges"].append(["v9", "v1"])
        with pytest.raises(ConfigError, match="unknown node 'v9'") as exc_info:
            load_mcn(_dump(example1_doc))
        assert exc_info.value.code == "UNKNOWN_NODE"

    def test_link_scheduled_twice(self, example1_doc):
        """Test a link may be scheduled once per frame."""
        example1_doc["schedules_r"][0]["2"].append(["v_uc", "v1"])
        with pytest.raises(ConfigError, match="link scheduled twice") as exc_info:
            load_mcn(_dump(example1_doc))
        assert exc_info.value.code == "LINK_SCHEDULED_TWICE"

    def test_dimension_mismatch(self, example1_doc):
        """Test one schedule per plant input."""
        example1_doc["schedules_r"].pop()
        with pytest.raises(ConfigError, match="dimension mismatch"):
            load_mcn(_dump(example1_doc))

    def test_syntax_error_has_locus(self):
        """Test malformed JSON reports a parse error with its position."""
        with pytest.raises(ConfigError) as exc_info:
            load_mcn('{"plant": ')
        assert exc_info.value.code == "PARSE_ERROR"
        assert "line" in exc_info.value.message or "column" in exc_info.value.message

    def test_schema_error_has_field_path(self, example1_doc):
        """Test schema errors name the failing field."""
        example1_doc["delta"] = -1
        with pytest.raises(ConfigError) as exc_info:
            load_mcn(_dump(example1_doc))
        assert exc_info.value.code == "CONFIG_ERROR"
        assert "delta" in exc_info.value.message

    def test_unknown_key_rejected(self, example1_doc):
        """Test unknown top-level keys are rejected."""
        example1_doc["colour"] = "blue"
        with pytest.raises(ConfigError, match="colour"):
            load_mcn(_dump(example1_doc))

    def test_shared_node_ids_rejected(self, example1_doc):
        """Test node ids are unique across both networks."""
        example1_doc["observability"]["nodes"].append("v1")
        with pytest.raises(ConfigError, match="unique across both networks"):
            load_mcn(_dump(example1_doc))

    def test_fault_candidate_needs_routing(self, example1_doc):
        """Test listed fault candidates must route some component."""
        example1_doc["fault_candidates"] = ["v1", "v_u1"]
        with pytest.raises(ConfigError, match="no outgoing scheduled link"):
            load_mcn(_dump(example1_doc))


class TestStrictValidation:
    """Test routing-shape validation at load time."""

    def test_cyclic_config_rejected(self):
        """Test strict loading refuses a cyclic routing subgraph."""
        with pytest.raises(ConfigError, match="cyclic") as exc_info:
            load_mcn_file(EXAMPLES_DIR / "broken-cyclic.json")
        assert exc_info.value.code == "ROUTING_SHAPE"
        assert any(d["kind"] == "cyclic" for d in exc_info.value.details)

    def test_cyclic_config_loads_when_lenient(self):
        """Test lenient loading leaves the report to the caller."""
        mcn = load_mcn_file(EXAMPLES_DIR / "broken-cyclic.json", strict=False)
        assert mcn.m == 2

    def test_node_off_routing_path(self, example1_doc):
        """Test a scheduled dead end is reported."""
        example1_doc["controllability"]["nodes"].append("v5")
        example1_doc["controllability"]["edges"].append(["v1", "v5"])
        example1_doc["schedules_r"][0]["2"].append(["v1", "v5"])
        with pytest.raises(ConfigError, match="node not on routing path"):
            load_mcn(_dump(example1_doc))
