"""Rewriter phases against the worked streaming-platform outputs, plus
randomized equivalence with a brute-force oracle."""

import random

import pytest

from ontomed.errors import NoJoinPath, NoWrapperForConcept, OntomedError
from ontomed.queries import parse_omq, well_formed_rewrite
from ontomed.releases import Release, apply_release
from ontomed.rewriter import (
    RewriteTrace,
    inter_concept_generation,
    intra_concept_generation,
    query_expansion,
    rewrite,
)
from ontomed.sources import SourceId, Walk, WrapperSchema, coverage, minimality

from conftest import MONITOR_QUERY, MONITOR_SUBGRAPH, iri
from generators import make_instance
from oracles import brute_force_walk_keys


@pytest.fixture
def wf_query(pre_evolution_ds):
    return well_formed_rewrite(pre_evolution_ds, parse_omq(MONITOR_QUERY, pre_evolution_ds))


class TestQueryExpansion:
    def test_concept_order(self, pre_evolution_ds, wf_query):
        x = query_expansion(wf_query, pre_evolution_ds)
        assert x.concepts == (
            iri("sc:SoftwareApplication"), iri("sup:Monitor"), iri("sup:InfoMonitor"))

    def test_monitor_identifier_added(self, pre_evolution_ds, wf_query):
        x = query_expansion(wf_query, pre_evolution_ds)
        from ontomed.terms import G_HAS_FEATURE

        assert (iri("sup:Monitor"), G_HAS_FEATURE, iri("sup:monitorId")) in x.query.phi
        assert iri("sup:monitorId") not in wf_query.pi

    def test_fixpoint_when_ids_already_present(self, pre_evolution_ds):
        text = """
        SELECT ?x FROM G: WHERE {
          VALUES (?x) { (sup:monitorId) }
          sup:Monitor G:hasFeature sup:monitorId
        }
        """
        q = parse_omq(text, pre_evolution_ds)
        x = query_expansion(q, pre_evolution_ds)
        assert x.query.phi == q.phi


class TestIntraConcept:
    def test_worked_partial_walks(self, pre_evolution_ds, wf_query):
        x = query_expansion(wf_query, pre_evolution_ds)
        p = intra_concept_generation(x, pre_evolution_ds)
        assert p.per_concept[iri("sc:SoftwareApplication")] == [
            Walk.single("W3", ["TargetApp"])]
        assert p.per_concept[iri("sup:Monitor")] == [
            Walk.single("W1", ["VoDmonitorId"]), Walk.single("W3", ["MonitorId"])]
        assert p.per_concept[iri("sup:InfoMonitor")] == [
            Walk.single("W1", ["lagRatio"])]

    def test_wrapper_missing_a_feature_is_pruned(self, pre_evolution_ds, wf_query, releases):
        # A fifth wrapper maps the Monitor subgraph but drops the metric from
        # its correspondence, so it cannot stand in for the metric's concept.
        w5 = Release(
            WrapperSchema("W5", SourceId("D5"), ("monId",), ("noise",)),
            MONITOR_SUBGRAPH,
            {"monId": iri("sup:monitorId")},
        )
        ds, _ = apply_release(pre_evolution_ds, w5)
        x = query_expansion(wf_query, ds)
        p = intra_concept_generation(x, ds)
        info_walks = p.per_concept[iri("sup:InfoMonitor")]
        assert all("W5" not in w.wrapper_names() for w in info_walks)
        monitor_walks = p.per_concept[iri("sup:Monitor")]
        assert any("W5" in w.wrapper_names() for w in monitor_walks)

    def test_unanswerable_concept(self, global_ds, releases):
        ds, _ = apply_release(global_ds, releases["W3"])
        q = well_formed_rewrite(ds, parse_omq(MONITOR_QUERY, ds))
        x = query_expansion(q, ds)
        with pytest.raises(NoWrapperForConcept):
            intra_concept_generation(x, ds)


class TestInterConcept:
    def test_worked_walks(self, pre_evolution_ds, wf_query):
        x = query_expansion(wf_query, pre_evolution_ds)
        p = intra_concept_generation(x, pre_evolution_ds)
        walks = inter_concept_generation(p, x, pre_evolution_ds)
        join = frozenset({((("W1", "VoDmonitorId"), ("W3", "MonitorId")))})
        assert sorted(w.signature() for w in walks) == sorted([
            (((("W1", ("VoDmonitorId", "lagRatio")), ("W3", ("TargetApp",)))), join),
            (((("W1", ("lagRatio",)), ("W3", ("MonitorId", "TargetApp")))), join),
        ])

    def test_same_source_pair_discarded(self, post_evolution_ds, wf_query):
        x = query_expansion(wf_query, post_evolution_ds)
        p = intra_concept_generation(x, post_evolution_ds)
        walks = inter_concept_generation(p, x, post_evolution_ds)
        for w in walks:
            names = set(w.wrapper_names())
            assert not {"W1", "W4"} <= names

    def test_no_join_path(self, global_ds):
        # Wrappers cover both concepts but none materializes the edge
        # between them, so the join cannot be discovered.
        from ontomed.terms import G_HAS_FEATURE

        ds = global_ds
        ds, _ = apply_release(ds, Release(
            WrapperSchema("WA", SourceId("DA"), ("monId",), ()),
            frozenset({(iri("sup:Monitor"), G_HAS_FEATURE, iri("sup:monitorId"))}),
            {"monId": iri("sup:monitorId")},
        ))
        ds, _ = apply_release(ds, Release(
            WrapperSchema("WB", SourceId("DB"), (), ("lag",)),
            frozenset({(iri("sup:InfoMonitor"), G_HAS_FEATURE, iri("sup:lagRatio"))}),
            {"lag": iri("sup:lagRatio")},
        ))
        text = """
        SELECT ?x FROM G: WHERE {
          VALUES (?x) { (sup:lagRatio) }
          sup:Monitor sup:generatesQoS sup:InfoMonitor .
          sup:InfoMonitor G:hasFeature sup:lagRatio
        }
        """
        with pytest.raises(NoJoinPath):
            rewrite(text, ds)


class TestRewrite:
    def test_single_union_before_evolution(self, pre_evolution_ds):
        ucq = rewrite(MONITOR_QUERY, pre_evolution_ds)
        assert len(ucq.walks) == 1
        assert ucq.walks[0].key() == (
            frozenset({"W1", "W3"}),
            frozenset({(("W1", "VoDmonitorId"), ("W3", "MonitorId"))}),
        )
        assert ucq.bindings[0] == {
            iri("sup:applicationId"): ("W3", "TargetApp"),
            iri("sup:lagRatio"): ("W1", "lagRatio"),
        }

    def test_two_unions_after_evolution(self, post_evolution_ds):
        ucq = rewrite(MONITOR_QUERY, post_evolution_ds)
        assert len(ucq.walks) == 2
        keys = {w.key() for w in ucq.walks}
        assert keys == {
            (frozenset({"W1", "W3"}), frozenset({(("W1", "VoDmonitorId"), ("W3", "MonitorId"))})),
            (frozenset({"W3", "W4"}), frozenset({(("W3", "MonitorId"), ("W4", "VoDmonitorId"))})),
        }
        by_key = {w.key(): b for w, b in zip(ucq.walks, ucq.bindings)}
        second = by_key[(frozenset({"W3", "W4"}),
                         frozenset({(("W3", "MonitorId"), ("W4", "VoDmonitorId"))}))]
        assert second[iri("sup:lagRatio")] == ("W4", "bufferingRatio")

    def test_single_concept_single_wrapper(self, pre_evolution_ds):
        text = """
        SELECT ?x FROM G: WHERE {
          VALUES (?x) { (sup:description) }
          sup:UserFeedback G:hasFeature sup:description
        }
        """
        ucq = rewrite(text, pre_evolution_ds)
        assert len(ucq.walks) == 1
        assert ucq.walks[0].key() == (frozenset({"W2"}), frozenset())

    def test_all_emitted_walks_cover_minimally(self, post_evolution_ds, wf_query):
        ucq = rewrite(MONITOR_QUERY, post_evolution_ds)
        wf = well_formed_rewrite(post_evolution_ds, parse_omq(MONITOR_QUERY, post_evolution_ds))
        for w in ucq.walks:
            assert coverage(w, wf, post_evolution_ds)
            assert minimality(w, wf, post_evolution_ds)

    def test_deterministic(self, post_evolution_ds):
        first = rewrite(MONITOR_QUERY, post_evolution_ds)
        second = rewrite(MONITOR_QUERY, post_evolution_ds)
        assert [w.signature() for w in first.walks] == [w.signature() for w in second.walks]
        assert first.bindings == second.bindings

    def test_output_order_follows_select(self, pre_evolution_ds):
        ucq = rewrite(MONITOR_QUERY, pre_evolution_ds)
        assert ucq.output_features == (iri("sup:applicationId"), iri("sup:lagRatio"))

    def test_trace_phases_recorded(self, pre_evolution_ds):
        trace = RewriteTrace()
        rewrite(MONITOR_QUERY, pre_evolution_ds, trace)
        assert len(trace.concepts) == 3
        assert len(trace.phase3_walks) == 2
        text = trace.render(pre_evolution_ds)
        assert "phase 1" in text and "phase 3" in text


class TestOracleEquivalence:
    def test_random_instances_match_brute_force(self):
        rng = random.Random(20240817)
        agreements = 0
        for _ in range(60):
            ds, query = make_instance(rng)
            wf = well_formed_rewrite(ds, parse_omq(query, ds))
            expected = brute_force_walk_keys(ds, wf.phi)
            try:
                got = {w.key() for w in rewrite(query, ds).walks}
            except OntomedError:
                got = set()
            assert got == expected
            agreements += 1
        assert agreements == 60
