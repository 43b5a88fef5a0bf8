"""Structural validation of a dataset against the metadata vocabulary.

Six rules cover the legal instantiation of the global, source, and mapping
graphs. Violations are data, not faults: validation always returns a report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .quadstore import Dataset
from .terms import (
    G_CONCEPT,
    G_FEATURE,
    G_HAS_FEATURE,
    GLOBAL_GRAPH,
    M_MAPPING,
    MAPPINGS_GRAPH,
    OWL_SAME_AS,
    RDF_TYPE,
    S_ATTRIBUTE,
    S_DATA_SOURCE,
    S_HAS_ATTRIBUTE,
    S_HAS_WRAPPER,
    S_WRAPPER,
    SOURCE_GRAPH,
    Iri,
)


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: Iri
    detail: str

    def render(self) -> str:
        return f"RULE{self.rule} <{self.subject}> {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def render(self) -> str:
        if self.ok:
            return "ok: 0 violations"
        return "\n".join(v.render() for v in self.violations)


def _typed(ds: Dataset, graph: Iri, type_iri: Iri) -> set[Iri]:
    return {q.subject for q in ds.match(graph, predicate=RDF_TYPE, object=type_iri)}


def validate_ontology(ds: Dataset) -> ValidationReport:
    report = ValidationReport()
    concepts = _typed(ds, GLOBAL_GRAPH, G_CONCEPT)
    features = _typed(ds, GLOBAL_GRAPH, G_FEATURE)
    sources = _typed(ds, SOURCE_GRAPH, S_DATA_SOURCE)
    wrappers = _typed(ds, SOURCE_GRAPH, S_WRAPPER)
    attributes = _typed(ds, SOURCE_GRAPH, S_ATTRIBUTE)

    # V1: hasFeature edges link a concept to a feature.
    for q in ds.match(GLOBAL_GRAPH, predicate=G_HAS_FEATURE):
        if q.subject not in concepts:
            report.violations.append(Violation("V1", q.subject, "hasFeature subject is not a Concept"))
        if q.object not in features:
            report.violations.append(Violation("V1", q.object, "hasFeature object is not a Feature"))

    # V2: a feature belongs to at most one concept.
    for f in sorted(features):
        owners = {q.subject for q in ds.match(GLOBAL_GRAPH, predicate=G_HAS_FEATURE, object=f)}
        if len(owners) > 1:
            names = ", ".join(str(o) for o in sorted(owners))
            report.violations.append(Violation("V2", f, f"feature owned by {len(owners)} concepts: {names}"))

    # V3: hasWrapper links DataSource to Wrapper; hasAttribute links Wrapper to Attribute.
    for q in ds.match(SOURCE_GRAPH, predicate=S_HAS_WRAPPER):
        if q.subject not in sources:
            report.violations.append(Violation("V3", q.subject, "hasWrapper subject is not a DataSource"))
        if q.object not in wrappers:
            report.violations.append(Violation("V3", q.object, "hasWrapper object is not a Wrapper"))
    for q in ds.match(SOURCE_GRAPH, predicate=S_HAS_ATTRIBUTE):
        if q.subject not in wrappers:
            report.violations.append(Violation("V3", q.subject, "hasAttribute subject is not a Wrapper"))
        if q.object not in attributes:
            report.violations.append(Violation("V3", q.object, "hasAttribute object is not an Attribute"))

    # V4: each attribute maps to at most one feature.
    for a in sorted(attributes):
        targets = {q.object for q in ds.match(MAPPINGS_GRAPH, subject=a, predicate=OWL_SAME_AS)}
        if len(targets) > 1:
            report.violations.append(Violation("V4", a, f"attribute mapped to {len(targets)} features"))
        for t in sorted(targets):
            if t not in features:
                report.violations.append(Violation("V4", a, f"sameAs target <{t}> is not a Feature"))

    # V5: every mapping named graph is a subset of the global graph's triples.
    global_triples = ds.graph_triples(GLOBAL_GRAPH)
    for q in ds.match(MAPPINGS_GRAPH, predicate=M_MAPPING):
        extras = ds.graph_triples(q.object) - global_triples
        for s, p, o in sorted(extras):
            report.violations.append(
                Violation("V5", q.object, f"named graph triple <{s}> <{p}> <{o}> absent from global graph")
            )

    # V6: attribute identifiers carry the prefix of their owning source.
    wrapper_source: dict[Iri, set[Iri]] = {}
    for q in ds.match(SOURCE_GRAPH, predicate=S_HAS_WRAPPER):
        wrapper_source.setdefault(q.object, set()).add(q.subject)
    for q in ds.match(SOURCE_GRAPH, predicate=S_HAS_ATTRIBUTE):
        for src in sorted(wrapper_source.get(q.subject, set())):
            if not q.object.value.startswith(src.value + "/"):
                report.violations.append(
                    Violation("V6", q.object, f"attribute not prefixed by its source <{src}>")
                )
    return report
