"""Vocabulary validation: each rule fires on its own violation generator."""

from ontomed.quadstore import Quad
from ontomed.releases import apply_release
from ontomed.terms import (
    G_HAS_FEATURE,
    GLOBAL_GRAPH,
    M_MAPPING,
    MAPPINGS_GRAPH,
    OWL_SAME_AS,
    S_HAS_ATTRIBUTE,
    S_HAS_WRAPPER,
    SOURCE_GRAPH,
    Iri,
    mapping_graph_iri,
)
from ontomed.vocab import validate_ontology

from conftest import iri

EX = "http://example.org/"


def test_clean_demo_dataset_validates(post_evolution_ds):
    assert validate_ontology(post_evolution_ds).ok


def test_v1_has_feature_endpoints(global_ds):
    ds = global_ds.copy()
    ds._add(Quad(GLOBAL_GRAPH, Iri(EX + "notAConcept"), G_HAS_FEATURE, iri("sup:lagRatio")))
    assert "V1" in validate_ontology(ds).rules()


def test_v2_feature_owned_twice(global_ds):
    ds = global_ds.copy()
    ds._add(Quad(GLOBAL_GRAPH, iri("sup:Monitor"), G_HAS_FEATURE, iri("sup:lagRatio")))
    assert "V2" in validate_ontology(ds).rules()


def test_v3_dangling_source_links(pre_evolution_ds):
    ds = pre_evolution_ds.copy()
    ds._add(Quad(SOURCE_GRAPH, Iri(EX + "ghost"), S_HAS_WRAPPER, Iri(EX + "alsoGhost")))
    assert "V3" in validate_ontology(ds).rules()


def test_v3_attribute_link_to_untyped_node(pre_evolution_ds, releases):
    ds = pre_evolution_ds.copy()
    w1 = releases["W1"].wrapper
    ds._add(Quad(SOURCE_GRAPH, w1.iri, S_HAS_ATTRIBUTE, Iri(EX + "untyped")))
    assert "V3" in validate_ontology(ds).rules()


def test_v4_attribute_mapped_to_two_features(pre_evolution_ds, releases):
    ds = pre_evolution_ds.copy()
    attr = releases["W1"].wrapper.attr_iri("lagRatio")
    ds._add(Quad(MAPPINGS_GRAPH, attr, OWL_SAME_AS, iri("sup:description")))
    assert "V4" in validate_ontology(ds).rules()


def test_v4_same_as_target_not_a_feature(pre_evolution_ds, releases):
    ds = pre_evolution_ds.copy()
    attr = releases["W1"].wrapper.attr_iri("VoDmonitorId")
    ds._add(Quad(MAPPINGS_GRAPH, attr, OWL_SAME_AS, iri("sup:Monitor")))
    assert "V4" in validate_ontology(ds).rules()


def test_v5_named_graph_triple_outside_global(pre_evolution_ds):
    ds = pre_evolution_ds.copy()
    ds._add(Quad(mapping_graph_iri("W1"), Iri(EX + "a"), Iri(EX + "b"), Iri(EX + "c")))
    report = validate_ontology(ds)
    assert "V5" in report.rules()


def test_v6_attribute_not_prefixed_by_source(pre_evolution_ds, releases):
    ds = pre_evolution_ds.copy()
    w1 = releases["W1"].wrapper
    rogue = Iri(EX + "rogueAttr")
    from ontomed.terms import RDF_TYPE, S_ATTRIBUTE

    ds._add(Quad(SOURCE_GRAPH, rogue, RDF_TYPE, S_ATTRIBUTE))
    ds._add(Quad(SOURCE_GRAPH, w1.iri, S_HAS_ATTRIBUTE, rogue))
    assert "V6" in validate_ontology(ds).rules()


def test_report_render_lists_rule_and_subject(global_ds):
    ds = global_ds.copy()
    ds._add(Quad(GLOBAL_GRAPH, iri("sup:Monitor"), G_HAS_FEATURE, iri("sup:lagRatio")))
    text = validate_ontology(ds).render()
    assert "V2" in text and "lagRatio" in text


def test_release_sequences_stay_valid(global_ds, releases):
    ds = global_ds
    for name in ("W2", "W1", "W4", "W3"):
        ds, _ = apply_release(ds, releases[name])
        assert validate_ontology(ds).ok
