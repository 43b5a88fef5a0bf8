"""Evaluation of walk unions over file-backed wrapper relations.

Wrapper data lives in comma-separated files with a header row naming the
attributes. Joins compare raw string values. A single walk is evaluated with
bag semantics; the union across walks removes duplicate rows.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import MalformedRow, MissingColumn, NoWalks, UnboundWrapper
from .sources import JoinEnd, Ucq, Walk, WrapperSchema


@dataclass
class Relation:
    """A flat table: named columns with an ID or non-ID role, plus rows."""

    columns: list[tuple[str, str]]           # (name, "ID" | "non-ID")
    rows: list[tuple[str, ...]]

    def column_index(self, name: str) -> int:
        for i, (col, _) in enumerate(self.columns):
            if col == name:
                return i
        raise MissingColumn(f"no column named {name}")

    def render(self) -> str:
        header = ",".join(name for name, _ in self.columns)
        return "\n".join([header, *(",".join(row) for row in self.rows)])


@dataclass
class WrapperBinding:
    """Ties a wrapper schema to the data file backing it."""

    wrapper: WrapperSchema
    data_path: str | Path
    column_map: dict[str, int] | None = None


def load_relation(binding: WrapperBinding) -> Relation:
    """Read a wrapper's data file into a relation with schema-derived roles."""
    schema = binding.wrapper
    path = Path(binding.data_path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumn(f"{path}: empty file, header expected") from None
        header = [h.strip() for h in header]
        if binding.column_map is not None:
            column_map = dict(binding.column_map)
        else:
            column_map = {}
            for attr in schema.attrs:
                if attr not in header:
                    raise MissingColumn(f"{path}: header lacks attribute column {attr}")
                column_map[attr] = header.index(attr)
        if len(set(column_map.values())) != len(column_map):
            raise MissingColumn(f"{path}: two attributes share one column")
        columns = [(attr, "ID" if attr in schema.id_attrs else "non-ID") for attr in schema.attrs]
        rows = []
        for lineno, raw in enumerate(reader, 2):
            if not raw:
                continue
            if len(raw) != len(header):
                raise MalformedRow(f"{path}:{lineno}: expected {len(header)} values, found {len(raw)}")
            rows.append(tuple(raw[column_map[attr]].strip() for attr in schema.attrs))
    return Relation(columns=columns, rows=rows)


def eval_walk(w: Walk, bindings: Mapping[str, WrapperBinding]) -> Relation:
    """Equi-join the walk's wrappers, then project to the walk's attributes.

    Identifier columns are always retained. The result uses qualified column
    names ("wrapper.attribute") and bag semantics.
    """
    relations: dict[str, Relation] = {}
    for name in w.wrapper_names():
        if name not in bindings:
            raise UnboundWrapper(f"wrapper {name} has no data binding")
        relations[name] = load_relation(bindings[name])

    projections = w.projections()
    keep: dict[str, list[str]] = {}
    for name in w.wrapper_names():
        schema = bindings[name].wrapper
        wanted = set(projections.get(name, ())) | set(schema.id_attrs)
        keep[name] = [attr for attr, _ in relations[name].columns if attr in wanted]

    # Hash-join wrappers one at a time along the walk's join graph.
    order = list(w.wrapper_names())
    first = order[0]
    columns: list[tuple[str, str]] = [
        (f"{first}.{attr}", role)
        for attr, role in relations[first].columns if attr in keep[first]
    ]
    idx = [relations[first].column_index(a) for a in keep[first]]
    tuples = [tuple(row[i] for i in idx) for row in relations[first].rows]
    joined = {first}

    remaining = order[1:]
    while remaining:
        # Pick the next wrapper connected to the joined prefix.
        pick = None
        for name in remaining:
            conds = _join_conds(w, joined, name)
            if conds or len(order) == 1:
                pick = (name, conds)
                break
        if pick is None:
            # Disconnected walks are rejected upstream; guard anyway.
            name = remaining[0]
            pick = (name, [])
        name, conds = pick
        remaining.remove(name)
        rel = relations[name]
        r_idx = [rel.column_index(a) for a in keep[name]]
        col_names = [c for c, _ in columns]
        left_keys = [col_names.index(f"{lw}.{la}") for (lw, la), _ in conds]
        right_keys = [keep[name].index(ra) for _, (rw, ra) in conds]

        table: dict[tuple, list[tuple]] = {}
        for row in rel.rows:
            slim = tuple(row[i] for i in r_idx)
            key = tuple(slim[i] for i in right_keys)
            table.setdefault(key, []).append(slim)
        out = []
        for row in tuples:
            key = tuple(row[i] for i in left_keys)
            for other in table.get(key, []) if conds else [r for rs in table.values() for r in rs]:
                out.append(row + other)
        tuples = out
        columns = columns + [
            (f"{name}.{attr}", role)
            for attr, role in rel.columns if attr in keep[name]
        ]
        joined.add(name)
    return Relation(columns=columns, rows=tuples)


def _join_conds(w: Walk, joined: set[str], name: str) -> list[tuple[JoinEnd, JoinEnd]]:
    """Join conditions oriented as (prefix endpoint, new-wrapper endpoint)."""
    conds = []
    for a, b in sorted(w.joins):
        if a[0] in joined and b[0] == name:
            conds.append((a, b))
        elif b[0] in joined and a[0] == name:
            conds.append((b, a))
    return conds


def eval_ucq(u: Ucq, bindings: Mapping[str, WrapperBinding]) -> Relation:
    """Evaluate each walk, project to the output features, and union.

    Duplicates within one walk are kept; identical rows contributed by
    different walks are collapsed.
    """
    if not u.walks:
        raise NoWalks("the union has no conjuncts to evaluate")
    out_cols = [str(f).rsplit("/", 1)[-1] for f in u.output_features]
    rows: list[tuple[str, ...]] = []
    seen: set[tuple[str, ...]] = set()
    for walk, binding in zip(u.walks, u.bindings):
        rel = eval_walk(walk, bindings)
        idx = []
        for f in u.output_features:
            wrapper, attr = binding[f]
            idx.append(rel.column_index(f"{wrapper}.{attr}"))
        walk_rows = [tuple(row[i] for i in idx) for row in rel.rows]
        for row in walk_rows:
            if row not in seen:
                rows.append(row)
        seen.update(walk_rows)
    return Relation(columns=[(c, "non-ID") for c in out_cols], rows=rows)
