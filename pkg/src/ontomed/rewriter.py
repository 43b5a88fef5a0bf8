"""Three-phase compilation of a pattern query into a union of walks.

Phase 1 expands the query with identifier features and orders its concepts.
Phase 2 produces single-wrapper partial walks per concept. Phase 3 stitches
partial walks across concepts, discovering equi-joins through the mapping
graphs. The result is filtered to covering, minimal walks and projected back
to the analyst's requested features.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import MissingIdAttribute, NoJoinPath, NoWrapperForConcept
from .quadstore import Dataset, Triple
from .queries import (
    OmqQuery,
    identifier_features,
    parse_omq,
    topological_concepts,
    well_formed_rewrite,
)
from .sources import (
    JoinEnd,
    Ucq,
    Walk,
    attr_feature,
    coverage,
    minimality,
    wrapper_schemas,
)
from .terms import (
    G_CONCEPT,
    G_HAS_FEATURE,
    GLOBAL_GRAPH,
    M_MAPPING,
    MAPPINGS_GRAPH,
    OWL_SAME_AS,
    RDF_TYPE,
    S_HAS_ATTRIBUTE,
    S_HAS_WRAPPER,
    SOURCE_GRAPH,
    Iri,
    wrapper_iri,
)


@dataclass(frozen=True)
class ExpandedQuery:
    """A well-formed query with identifier features joined in, plus the
    topological order its concepts will be processed in."""

    concepts: tuple[Iri, ...]
    query: OmqQuery


@dataclass
class PartialWalkSet:
    """Per-concept single-wrapper walks, each already covering and minimal
    for its concept's requested features."""

    per_concept: dict[Iri, list[Walk]]


@dataclass
class RewriteTrace:
    """Phase-by-phase record of one rewriting run, for explain output."""

    concepts: list[Iri] = field(default_factory=list)
    added_ids: list[Iri] = field(default_factory=list)
    partial_walks: dict[Iri, list[Walk]] = field(default_factory=dict)
    phase3_walks: list[Walk] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def render(self, ds: Dataset) -> str:
        compact = ds.prefixes.compact
        lines = ["phase 1: concepts = [" + ", ".join(compact(c) for c in self.concepts) + "]"]
        if self.added_ids:
            lines.append("phase 1: added identifiers = ["
                         + ", ".join(compact(f) for f in self.added_ids) + "]")
        lines.append("phase 2: partial walks per concept:")
        for concept in self.concepts:
            walks = self.partial_walks.get(concept, [])
            rendered = ", ".join(w.render() for w in walks)
            lines.append(f"  {compact(concept)} -> {{ {rendered} }}")
        lines.append("phase 3: walks:")
        for w in self.phase3_walks:
            lines.append(f"  {w.render()}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


# --- phase 1 ----------------------------------------------------------------

def query_expansion(q: OmqQuery, ds: Dataset) -> ExpandedQuery:
    """Order the pattern's concepts and join every identifier feature into it."""
    order = topological_concepts(q.phi)
    concepts = tuple(
        v for v in order
        if ds.match(GLOBAL_GRAPH, subject=v, predicate=RDF_TYPE, object=G_CONCEPT)
    )
    phi = set(q.phi)
    for c in concepts:
        for f_id in identifier_features(ds, c):
            phi.add((c, G_HAS_FEATURE, f_id))
    return ExpandedQuery(concepts=concepts, query=OmqQuery(pi=q.pi, phi=frozenset(phi)))


# --- phase 2 ----------------------------------------------------------------

def _graphs_with_triple(ds: Dataset, triple: Triple) -> list[Iri]:
    """Mapping named graphs containing the triple, each paired to one wrapper."""
    def build():
        s, p, o = triple
        graphs = {q.graph for q in ds.match(subject=s, predicate=p, object=o)}
        mapped = [
            q.subject for q in ds.match(MAPPINGS_GRAPH, predicate=M_MAPPING)
            if q.object in graphs
        ]
        return sorted(mapped)

    return ds.derived(("edge_wrappers", triple), build)


def _wrapper_name(wrapper: Iri) -> str:
    return wrapper.value.rsplit("/", 1)[-1]


def _wrapper_attr_for_feature(ds: Dataset, wrapper: Iri, feature: Iri) -> str | None:
    """The wrapper's attribute name mapped (sameAs) to the feature, if any."""
    def build():
        per_wrapper: dict[Iri, str] = {}
        for q in ds.match(MAPPINGS_GRAPH, predicate=OWL_SAME_AS, object=feature):
            attr_name = q.subject.value.rsplit("/", 1)[-1]
            for owner in ds.match(SOURCE_GRAPH, predicate=S_HAS_ATTRIBUTE, object=q.subject):
                held = per_wrapper.get(owner.subject)
                if held is None or attr_name < held:
                    per_wrapper[owner.subject] = attr_name
        return per_wrapper

    return ds.derived(("feature_attr_index", feature), build).get(wrapper)


def intra_concept_generation(x: ExpandedQuery, ds: Dataset) -> PartialWalkSet:
    """Build single-wrapper partial walks per concept.

    A wrapper survives for a concept only when its merged projection maps
    back, attribute by attribute, to exactly the features the expanded query
    requests for that concept. Raises NoWrapperForConcept when a concept ends
    up with no candidate at all.
    """
    per_concept: dict[Iri, list[Walk]] = {}
    for c in x.concepts:
        features = sorted(o for s, p, o in x.query.phi if s == c and p == G_HAS_FEATURE)
        projections: dict[str, set[str]] = {}
        if features:
            for f in features:
                for wrapper in _graphs_with_triple(ds, (c, G_HAS_FEATURE, f)):
                    attr = _wrapper_attr_for_feature(ds, wrapper, f)
                    if attr is None:
                        continue
                    projections.setdefault(_wrapper_name(wrapper), set()).add(attr)
        else:
            # A concept with no requested features can still anchor a traversal:
            # any wrapper materializing one of its pattern edges qualifies.
            for s, p, o in sorted(x.query.phi):
                if c not in (s, o) or p == G_HAS_FEATURE:
                    continue
                for wrapper in _graphs_with_triple(ds, (s, p, o)):
                    projections.setdefault(_wrapper_name(wrapper), set())
        walks: list[Walk] = []
        for name in sorted(projections):
            walk = Walk.single(name, projections[name])
            provided = set()
            schema_src = _wrapper_source_prefix(ds, name)
            for attr in projections[name]:
                f = attr_feature(ds, Iri(schema_src + attr))
                if f is not None:
                    provided.add(f)
            if provided == set(features):
                walks.append(walk)
        if not walks:
            raise NoWrapperForConcept(f"no wrapper answers concept <{c}> with its requested features")
        per_concept[c] = walks
    return PartialWalkSet(per_concept=per_concept)


def _wrapper_source_prefix(ds: Dataset, wrapper_name: str) -> str:
    def build():
        owners = sorted(
            q.subject for q in
            ds.match(SOURCE_GRAPH, predicate=S_HAS_WRAPPER, object=wrapper_iri(wrapper_name))
        )
        return owners[0].value + "/"

    return ds.derived(("source_prefix", wrapper_name), build)


# --- phase 3 ----------------------------------------------------------------

def _connecting_edge(phi, concept: Iri, processed: set[Iri]) -> Triple | None:
    """First pattern edge (canonical order) linking the concept to the
    already-processed prefix."""
    for s, p, o in sorted(phi):
        if p == G_HAS_FEATURE:
            continue
        if (s == concept and o in processed) or (o == concept and s in processed):
            return (s, p, o)
    return None


def inter_concept_generation(p: PartialWalkSet, x: ExpandedQuery, ds: Dataset,
                             trace: RewriteTrace | None = None) -> list[Walk]:
    """Join partial walks across concepts into full candidate walks.

    For each consecutive pair without a shared wrapper, the join is discovered
    through the wrappers materializing the connecting pattern edge: the join
    identifier is taken from the edge's head concept, falling back to the tail
    concept when the head carries no identifier feature.
    """
    if not x.concepts:
        return []
    catalog = wrapper_schemas(ds)

    def valid(walk: Walk) -> bool:
        sources = [catalog[n].source for n in walk.wrapper_names()]
        return len(sources) == len(set(sources)) and walk.is_connected()

    current = list(p.per_concept[x.concepts[0]])
    processed = {x.concepts[0]}
    for concept in x.concepts[1:]:
        edge = _connecting_edge(x.query.phi, concept, processed)
        joined: list[Walk] = []
        seen: set[tuple] = set()
        window_error: Exception | None = None
        for left, right in product(current, p.per_concept[concept]):
            merged = left.merge(right)
            if set(left.wrapper_names()) & set(right.wrapper_names()):
                candidates = [merged] if valid(merged) else []
            else:
                try:
                    candidates = _discover_joins(ds, merged, left, right, concept, edge, valid, trace)
                except (NoJoinPath, MissingIdAttribute) as exc:
                    window_error = window_error or exc
                    candidates = []
            for cand in candidates:
                sig = cand.signature()
                if sig not in seen:
                    seen.add(sig)
                    joined.append(cand)
        if not joined:
            raise window_error or NoJoinPath(
                f"no wrapper materializes an edge joining <{concept}> to the query prefix"
            )
        current = joined
        processed.add(concept)
    return current


def _discover_joins(ds: Dataset, merged: Walk, left: Walk, right: Walk, concept: Iri,
                    edge: Triple | None, valid, trace: RewriteTrace | None) -> list[Walk]:
    if edge is None:
        raise NoJoinPath(f"no pattern edge connects <{concept}> to the processed prefix")
    providers = _graphs_with_triple(ds, edge)
    if not providers:
        s, p, o = edge
        raise NoJoinPath(f"no mapping graph provides the edge <{s}> <{p}> <{o}>")
    head, tail = edge[2], edge[0]
    missing: Exception | None = None
    for target in (head, tail):
        ids = identifier_features(ds, target)
        if not ids:
            continue
        side = right if target == concept else left
        candidates: list[Walk] = []
        for f_id in ids:
            holder = _find_wrapper_with_id(ds, side, f_id)
            if holder is None:
                continue
            holder_name, holder_attr = holder
            for wrapper in providers:
                name = _wrapper_name(wrapper)
                if name == holder_name:
                    continue
                attr = _wrapper_attr_for_feature(ds, wrapper, f_id)
                if attr is None:
                    missing = missing or MissingIdAttribute(
                        f"wrapper {name} provides the edge but no attribute for <{f_id}>"
                    )
                    continue
                cand = merged.add_wrapper(name).with_join((name, attr), (holder_name, holder_attr))
                if valid(cand):
                    candidates.append(cand)
                    if trace is not None:
                        trace.notes.append(
                            f"join {name}.{attr} = {holder_name}.{holder_attr} via <{edge[1]}>"
                        )
        if candidates:
            return candidates
    if missing is not None:
        raise missing
    raise MissingIdAttribute(
        f"no identifier attribute joins the walks across <{edge[0]}> and <{edge[2]}>"
    )


def _find_wrapper_with_id(ds: Dataset, walk: Walk, f_id: Iri) -> JoinEnd | None:
    """Lexicographically first wrapper in the walk holding an attribute for
    the identifier feature."""
    for name in sorted(walk.wrapper_names()):
        attr = _wrapper_attr_for_feature(ds, wrapper_iri(name), f_id)
        if attr is not None:
            return (name, attr)
    return None


# --- composition ------------------------------------------------------------

def rewrite(q_text: str, ds: Dataset, trace: RewriteTrace | None = None) -> Ucq:
    """Compile query text into a union of covering, minimal walks.

    Output columns follow the analyst's SELECT order; identifiers added
    during expansion are projected out. Walks equal up to projections are
    collapsed into one conjunct.
    """
    parsed = parse_omq(q_text, ds)
    wf = well_formed_rewrite(ds, parsed)
    expanded = query_expansion(wf, ds)
    if trace is not None:
        trace.concepts = list(expanded.concepts)
        trace.added_ids = sorted(set(_features_of(expanded.query.phi)) - set(_features_of(wf.phi)))
    partial = intra_concept_generation(expanded, ds)
    if trace is not None:
        trace.partial_walks = {c: list(ws) for c, ws in partial.per_concept.items()}
    walks = inter_concept_generation(partial, expanded, ds, trace)
    if trace is not None:
        trace.phase3_walks = list(walks)

    kept = []
    for w in walks:
        if coverage(w, wf, ds) and minimality(w, wf, ds):
            kept.append(w)
        elif trace is not None:
            trace.notes.append(f"dropped non-minimal or non-covering walk {w.render()}")

    by_key: dict[tuple, Walk] = {}
    for w in kept:
        k = w.key()
        by_key[k] = by_key[k].merge(w) if k in by_key else w
    final = sorted(by_key.values(), key=lambda w: (w.steps, sorted(w.joins)))

    bindings = [_bind_features(ds, w, wf.pi) for w in final]
    id_features = frozenset(set(_features_of(expanded.query.phi)) - set(wf.pi))
    return Ucq(walks=final, output_features=tuple(wf.pi), bindings=bindings,
               id_features=id_features)


def _features_of(phi) -> list[Iri]:
    return [o for _, p, o in phi if p == G_HAS_FEATURE]


def _bind_features(ds: Dataset, walk: Walk, features: tuple[Iri, ...]) -> dict[Iri, JoinEnd]:
    binding: dict[Iri, JoinEnd] = {}
    for f in features:
        candidates = []
        for name, attrs in walk.steps:
            prefix = _wrapper_source_prefix(ds, name)
            for attr in attrs:
                if attr_feature(ds, Iri(prefix + attr)) == f:
                    candidates.append((name, attr))
        if candidates:
            binding[f] = min(candidates)
    return binding
