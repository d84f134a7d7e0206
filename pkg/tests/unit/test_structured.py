"""
Unit tests for structured-graph construction and export.
"""

import pytest

from app.core.errors import AnalysisError
from app.models.graphs import VertexKind
from app.models.network import Side
from app.models.transfer import StateSpace
from app.services.dynamics import BlockCache
from app.services.structured import (
    build_analysis_graph,
    build_block_structured,
    build_mcn_structured,
    build_plant_structured,
    export_graph,
)


class TestBlockStructured:
    """Test build_block_structured."""

    def test_example1_controllability_block(self, example1_mcn):
        """Test one shift chain per component wired u -> x -> u~."""
        sg = build_block_structured(example1_mcn, Side.CONTROLLABILITY)
        assert set(sg.vertices) == {"u1", "u2", "u~1", "u~2", "xr1.1", "xr2.1"}
        assert sg.edges == {
            ("u1", "xr1.1"),
            ("xr1.1", "u~1"),
            ("u2", "xr2.1"),
            ("xr2.1", "u~2"),
        }

    def test_merged_fault_feeds_every_routed_component(self, example1_mcn):
        """Test v1 routes both inputs and drives both chains."""
        sg = build_block_structured(example1_mcn, Side.CONTROLLABILITY, ["v1"])
        assert ("f[v1]", "xr1.1") in sg.edges
        assert ("f[v1]", "xr2.1") in sg.edges
        assert sg.fault_vertices == ["f[v1]"]

    def test_split_fault_per_component(self, example1_mcn):
        """Test one fault vertex per component without merging."""
        sg = build_block_structured(
            example1_mcn, Side.CONTROLLABILITY, ["v1"], merge_fault_components=False
        )
        assert sg.fault_vertices == ["f[v1].1", "f[v1].2"]
        assert ("f[v1].2", "xr2.1") in sg.edges

    def test_fault_on_other_side_rejected(self, example1_mcn):
        """Test faults must be candidates of the block's side."""
        with pytest.raises(AnalysisError, match="not a valid candidate"):
            build_block_structured(example1_mcn, Side.OBSERVABILITY, ["v1"])

    def test_chain_length_follows_max_delay(self, random_mcn_factory):
        """Test each component gets one state per delay."""
        mcn = random_mcn_factory(4)
        cache = BlockCache(mcn)
        sg = build_block_structured(mcn, Side.OBSERVABILITY, cache=cache)
        for i in mcn.components(Side.OBSERVABILITY):
            chain = [
                v
                for v in sg.vertices.values()
                if v.kind is VertexKind.NETWORK_STATE and v.component == i
            ]
            assert len(chain) == cache.block(Side.OBSERVABILITY, i).max_delay

    def test_chain_covers_longer_fault_transfer(self, cancelling_block_mcn):
        """Test a fault tap past the trimmed block delay gets its own state."""
        plain = build_block_structured(cancelling_block_mcn, Side.CONTROLLABILITY)
        assert "xr1.2" not in plain.vertices
        sg = build_block_structured(cancelling_block_mcn, Side.CONTROLLABILITY, ["v"])
        assert sg.vertices["xr1.2"].kind is VertexKind.NETWORK_STATE
        assert ("f[v]", "xr1.2") in sg.edges
        assert ("xr1.2", "xr1.1") in sg.edges
        assert ("u1", "xr1.2") not in sg.edges
        assert all(a in sg.vertices and b in sg.vertices for a, b in sg.edges)


class TestPlantStructured:
    """Test build_plant_structured."""

    def test_pattern_edges(self):
        """Test A, B and C nonzeros become edges."""
        plant = StateSpace(A=[[1, 0], [2, 3]], B=[[1, 0], [0, 1]], C=[[1, 0], [0, 1]])
        sg = build_plant_structured(plant)
        assert ("x1", "x2") in sg.edges
        assert ("x2", "x1") not in sg.edges
        assert ("x1", "x1") in sg.edges
        assert ("u~2", "x2") in sg.edges
        assert ("x2", "y~2") in sg.edges

    def test_tiny_entries_are_structural_zeros(self):
        """Test entries below the relative tolerance vanish."""
        plant = StateSpace(A=[[1.0, 1e-15], [0.0, 1.0]], B=[[1.0], [1.0]], C=[[1.0, 1.0]])
        sg = build_plant_structured(plant)
        assert ("x2", "x1") not in sg.edges


class TestMcnStructured:
    """Test build_mcn_structured."""

    def test_interconnects_glue_the_cascade(self, example1_mcn):
        """Test the three graphs share u~ and y~ vertices."""
        sg = build_mcn_structured(example1_mcn)
        assert ("xr1.1", "u~1") in sg.edges
        assert ("u~1", "x1") in sg.edges
        assert ("x2", "y~2") in sg.edges
        assert ("y~2", "xo2.1") in sg.edges
        assert sg.output_vertices == ["y1", "y2"]
        assert sg.state_vertices == ["x1", "x2", "xo1.1", "xo2.1", "xr1.1", "xr2.1"]

    def test_both_sides_of_faults(self, example1_mcn):
        """Test fault vertices land in their own network."""
        sg = build_mcn_structured(example1_mcn, ["v2", "v4"])
        assert ("f[v2]", "xr2.1") in sg.edges
        assert ("f[v4]", "xo2.1") in sg.edges

    def test_bridge_assertion_holds_on_random_networks(self, random_mcn_factory):
        """Test builds never trip the interconnect bridge check."""
        for seed in range(30):
            build_mcn_structured(random_mcn_factory(seed))

    def test_plant_edges_follow_sampled_pattern(self, chain_plant_mcn):
        """Test couplings that only appear after sampling become edges."""
        sg = build_mcn_structured(chain_plant_mcn)
        assert ("x1", "x3") in sg.edges
        assert ("u~1", "x3") in sg.edges
        assert ("x3", "x1") not in sg.edges
        assert ("u~2", "x1") not in sg.edges


class TestAnalysisGraph:
    """Test build_analysis_graph."""

    def test_example1_copies(self, example1_mcn):
        """Test Gamma maps each relay to its per-component copies."""
        ag = build_analysis_graph(example1_mcn)
        assert ag.copies("v1") == ("v1#R1", "v1#R2")
        assert ag.copies("v2") == ("v2#R2",)
        assert ag.copies("v4") == ("v4#O2",)
        assert ag.sink_set == ("v_yc#O1", "v_yc#O2")

    def test_terminals_glue_to_plant(self, example1_mcn):
        """Test actuator copies feed u~ and y~ feeds sensor copies."""
        ag = build_analysis_graph(example1_mcn)
        assert ("v_u1#R1", "u~1") in ag.graph.edges
        assert ("y~2", "v_y2#O2") in ag.graph.edges
        assert ("v1#R2", "v_u2#R2") in ag.graph.edges

    @pytest.mark.parametrize("seed", [None, *range(10)])
    def test_copy_count_matches_component_sizes(self, seed, example1_mcn, random_mcn_factory):
        """Test sum_v |Gamma(v)| equals the total size of the routing subgraphs."""
        mcn = example1_mcn if seed is None else random_mcn_factory(seed)
        cache = BlockCache(mcn)
        ag = build_analysis_graph(mcn, cache)
        for side in Side:
            copies = sum(len(c) for c in ag.gamma(side).values())
            sizes = sum(len(cache.subgraph(side, i).nodes) for i in mcn.components(side))
            assert copies == sizes


class TestExportGraph:
    """Test export_graph."""

    def test_sections_and_order(self, example1_mcn):
        """Test vertices then edges, both sorted."""
        text = export_graph(build_mcn_structured(example1_mcn, ["v1"]))
        lines = text.splitlines()
        assert lines[:2] == ["# mcn-fdi graph v1", "# vertices"]
        split = lines.index("# edges")
        vertices = [line.split("\t")[0] for line in lines[2:split]]
        assert vertices == sorted(vertices)
        assert "f[v1]\tfault\tside=R,node=v1" in lines
        assert "f[v1]\txr1.1" in lines

    def test_analysis_export_lists_gamma(self, example1_mcn):
        """Test the analysis export appends copies and sinks."""
        text = export_graph(build_analysis_graph(example1_mcn))
        assert "# gamma" in text
        assert "v1\tR\tv1#R1,v1#R2" in text
        assert text.endswith("v_yc#O1\nv_yc#O2\n")

    def test_export_is_deterministic(self, example1_mcn):
        """Test two builds export identically."""
        assert export_graph(build_analysis_graph(example1_mcn)) == export_graph(
            build_analysis_graph(example1_mcn)
        )
