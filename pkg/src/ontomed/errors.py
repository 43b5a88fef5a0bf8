"""Exception hierarchy for the ontomed engine."""

from __future__ import annotations


class OntomedError(Exception):
    """Base class for all engine errors."""


# --- term / store level ---------------------------------------------------

class UnknownPrefix(OntomedError):
    """A prefixed identifier uses a namespace prefix that is not registered."""


class InvalidIri(OntomedError):
    """An identifier is empty or neither absolute nor a resolvable prefixed name."""


# --- source model ---------------------------------------------------------

class InvalidWalk(OntomedError):
    """A walk violates the structural rules of the walk algebra."""


class MissingMapping(OntomedError):
    """A wrapper participating in a walk has no mapping named graph."""


class NotCovering(OntomedError):
    """Minimality was asked for a walk that does not cover the query."""


# --- release manager ------------------------------------------------------

class InvalidRelease(OntomedError):
    """A release descriptor violates its structural invariants."""


class SubgraphNotInGlobal(InvalidRelease):
    """A release's mapping subgraph contains triples absent from the global graph."""


class DuplicateWrapper(InvalidRelease):
    """A wrapper with the same name is already registered."""


class DanglingFeatureMap(InvalidRelease):
    """The release's attribute-to-feature map references a feature outside its subgraph."""


# --- query frontend -------------------------------------------------------

class OmqSyntaxError(OntomedError):
    """Query text does not match the accepted template."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnknownIri(OntomedError):
    """A query term does not occur in the global graph."""


class DisconnectedPattern(OntomedError):
    """The query's basic graph pattern is not connected."""


class CyclicPattern(OntomedError):
    """The query's concept graph has at least one cycle."""


class NoIdentifier(OntomedError):
    """A projected concept has no identifier feature to stand in for it."""


# --- rewriter -------------------------------------------------------------

class NoWrapperForConcept(OntomedError):
    """No wrapper provides all requested features of a concept; the query is unanswerable."""


class NoJoinPath(OntomedError):
    """No mapping named graph provides the pattern edge needed to join two concepts."""


class MissingIdAttribute(OntomedError):
    """An edge-providing wrapper lacks the physical attribute for the join identifier."""


# --- executor -------------------------------------------------------------

class MissingColumn(OntomedError):
    """A wrapper data file lacks a column for one of the wrapper's attributes."""


class MalformedRow(OntomedError):
    """A data row's arity does not match the header."""


class UnboundWrapper(OntomedError):
    """A walk references a wrapper with no data binding."""


class NoWalks(OntomedError):
    """A union query with zero conjuncts cannot be evaluated."""


# --- workspace / CLI ------------------------------------------------------

class WorkspaceError(OntomedError):
    """The workspace directory is missing or inconsistent."""
