"""In-memory, index-backed store of quads (triples within named graphs).

Datasets are snapshots: the public operations never mutate their input, they
return a fresh dataset instead. Readers may therefore share a dataset freely.
Position indexes keep wildcard pattern lookups proportional to the smallest
candidate set; the (p,o) and (s,p) permutations cover the lookups the
rewriting algorithms are dominated by.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import InvalidIri
from .terms import GLOBAL_GRAPH, RDFS_SUBCLASS_OF, Iri, PrefixTable

Triple = tuple[Iri, Iri, Iri]


@dataclass(frozen=True, order=True)
class Quad:
    graph: Iri
    subject: Iri
    predicate: Iri
    object: Iri

    def triple(self) -> Triple:
        return (self.subject, self.predicate, self.object)


class Dataset:
    """A set of quads plus the prefix table its serialized forms resolve against."""

    def __init__(self, prefixes: PrefixTable | None = None):
        self.prefixes = prefixes.copy() if prefixes is not None else PrefixTable()
        self._quads: set[Quad] = set()
        self._by_g: dict[Iri, set[Quad]] = defaultdict(set)
        self._by_s: dict[Iri, set[Quad]] = defaultdict(set)
        self._by_p: dict[Iri, set[Quad]] = defaultdict(set)
        self._by_o: dict[Iri, set[Quad]] = defaultdict(set)
        self._by_po: dict[tuple[Iri, Iri], set[Quad]] = defaultdict(set)
        self._by_sp: dict[tuple[Iri, Iri], set[Quad]] = defaultdict(set)
        self._subclass_cache: dict[Iri, frozenset[Iri]] = {}
        self._derived_cache: dict = {}

    # --- container protocol ------------------------------------------------

    def __len__(self) -> int:
        return len(self._quads)

    def __iter__(self) -> Iterator[Quad]:
        return iter(self._quads)

    def __contains__(self, q: Quad) -> bool:
        return q in self._quads

    def quads(self) -> frozenset[Quad]:
        return frozenset(self._quads)

    # --- mutation (private to snapshot construction) -----------------------

    def _add(self, q: Quad) -> bool:
        """Add a quad in place; returns True when the quad was new."""
        if q in self._quads:
            return False
        self._quads.add(q)
        self._by_g[q.graph].add(q)
        self._by_s[q.subject].add(q)
        self._by_p[q.predicate].add(q)
        self._by_o[q.object].add(q)
        self._by_po[(q.predicate, q.object)].add(q)
        self._by_sp[(q.subject, q.predicate)].add(q)
        self._subclass_cache.clear()
        self._derived_cache.clear()
        return True

    def _add_terms(self, graph, subject, predicate, obj) -> bool:
        expand = self.prefixes.expand
        return self._add(Quad(expand(graph), expand(subject), expand(predicate), expand(obj)))

    def copy(self) -> "Dataset":
        clone = Dataset(self.prefixes)
        for q in self._quads:
            clone._add(q)
        return clone

    # --- queries -----------------------------------------------------------

    def match(
        self,
        graph: Iri | None = None,
        subject: Iri | None = None,
        predicate: Iri | None = None,
        object: Iri | None = None,
    ) -> set[Quad]:
        """All quads matching the bound positions; unbound positions are wildcards."""
        candidates: list[set[Quad]] = []
        if subject is not None and predicate is not None:
            candidates.append(self._by_sp.get((subject, predicate), set()))
        elif predicate is not None and object is not None:
            candidates.append(self._by_po.get((predicate, object), set()))
        else:
            if subject is not None:
                candidates.append(self._by_s.get(subject, set()))
            if predicate is not None:
                candidates.append(self._by_p.get(predicate, set()))
        if graph is not None:
            candidates.append(self._by_g.get(graph, set()))
        if object is not None:
            candidates.append(self._by_o.get(object, set()))
        if not candidates:
            return set(self._quads)
        candidates.sort(key=len)
        result = set(candidates[0])
        for other in candidates[1:]:
            result &= other
        if graph is not None:
            result = {q for q in result if q.graph == graph}
        if subject is not None:
            result = {q for q in result if q.subject == subject}
        if predicate is not None:
            result = {q for q in result if q.predicate == predicate}
        if object is not None:
            result = {q for q in result if q.object == object}
        return result

    def derived(self, key, builder):
        """Memoized value computed from the dataset's quads.

        The cache is dropped whenever a quad is added, so the value may be
        treated as always consistent with the current contents.
        """
        try:
            return self._derived_cache[key]
        except KeyError:
            value = builder()
            self._derived_cache[key] = value
            return value

    def graph_triples(self, graph: Iri) -> frozenset[Triple]:
        return frozenset(q.triple() for q in self._by_g.get(graph, set()))

    def terms_of_graph(self, graph: Iri) -> frozenset[Iri]:
        terms: set[Iri] = set()
        for q in self._by_g.get(graph, set()):
            terms.update((q.subject, q.predicate, q.object))
        return frozenset(terms)

    # --- subclass entailment ----------------------------------------------

    def superclasses(self, sub: Iri) -> frozenset[Iri]:
        """Reflexive-transitive subClassOf closure of ``sub`` within the global graph."""
        cached = self._subclass_cache.get(sub)
        if cached is not None:
            return cached
        seen: set[Iri] = {sub}
        frontier = [sub]
        while frontier:
            node = frontier.pop()
            for q in self.match(GLOBAL_GRAPH, subject=node, predicate=RDFS_SUBCLASS_OF):
                if q.object not in seen:
                    seen.add(q.object)
                    frontier.append(q.object)
        result = frozenset(seen)
        self._subclass_cache[sub] = result
        return result

    def is_subclass_of(self, sub: Iri, sup: Iri) -> bool:
        return sup in self.superclasses(sub)

    # --- persistence -------------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Write the prefix header followed by one quad record per line."""
        lines = [
            f"@prefix {prefix}: <{namespace}>"
            for prefix, namespace in sorted(self.prefixes.namespaces().items())
        ]
        for q in sorted(self._quads):
            lines.append(f"<{q.graph}> <{q.subject}> <{q.predicate}> <{q.object}>")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Dataset":
        ds = cls()
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("@prefix"):
                parts = line.split(None, 2)
                if len(parts) != 3 or not parts[1].endswith(":"):
                    raise InvalidIri(f"{path}:{lineno}: malformed prefix declaration")
                ds.prefixes.register(parts[1][:-1], parts[2].strip("<>"))
                continue
            fields = line.split()
            if len(fields) != 4 or not all(f.startswith("<") and f.endswith(">") for f in fields):
                raise InvalidIri(f"{path}:{lineno}: malformed quad record")
            g, s, p, o = (Iri(f[1:-1]) for f in fields)
            ds._add(Quad(g, s, p, o))
        return ds


# --- snapshot-style operation wrappers -------------------------------------

def insert_quad(ds: Dataset, q: Quad) -> tuple[Dataset, bool]:
    """Insert a quad, returning the updated snapshot and whether it was new."""
    updated = ds.copy()
    new = updated._add(q)
    return updated, new


def quad(ds: Dataset, graph, subject, predicate, obj) -> Quad:
    """Build a quad from strings or Iris, resolving prefixes against ``ds``."""
    expand = ds.prefixes.expand
    return Quad(expand(graph), expand(subject), expand(predicate), expand(obj))


def match_pattern(
    ds: Dataset,
    graph: Iri | None = None,
    subject: Iri | None = None,
    predicate: Iri | None = None,
    object: Iri | None = None,
) -> set[Quad]:
    return ds.match(graph, subject, predicate, object)


def is_subclass_of(ds: Dataset, sub: Iri, sup: Iri) -> bool:
    return ds.is_subclass_of(sub, sup)
