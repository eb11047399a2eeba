"""Rooted concept trees with subsumption and path-overlap queries.

A taxonomy is a tree of concept ids: every non-root concept has exactly one
parent, and an edge (parent, child) means the child is the narrower concept.
Trees are immutable once built; ``add_concept`` returns a new taxonomy.

Field closeness between a subject field ``l`` and an expert field ``e`` is
the fraction of ``l``'s root path that the two root paths share. It is 1
exactly when ``e`` equals ``l`` or specialises it, and shrinks as the expert
field sits further from the subject field: the larger the field, the weaker
the credibility it confers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    CycleWouldForm,
    DuplicateConcept,
    ParseError,
    UnknownConcept,
    UnknownParent,
)


def _check_concept_id(concept: str) -> None:
    if not isinstance(concept, str) or not concept or concept.strip() != concept:
        raise ParseError(f"invalid concept id: {concept!r}")
    if any(ch.isspace() for ch in concept):
        raise ParseError(f"concept id must not contain whitespace: {concept!r}")


class Taxonomy:
    """A named rooted tree of concepts.

    ``parent`` maps each non-root concept to its parent. Construction
    validates the tree shape: single parent per concept, no cycles, every
    concept reachable from the root.
    """

    def __init__(self, name: str, root: str, parent: Mapping[str, str],
                 labels: Mapping[str, str] | None = None):
        _check_concept_id(root)
        for child, par in parent.items():
            _check_concept_id(child)
            _check_concept_id(par)
        if root in parent:
            raise ParseError(f"root {root!r} must not have a parent")

        self.name = name
        self.root = root
        self._parent = dict(parent)

        # Verify that every concept reaches the root without cycles.
        for concept in self._parent:
            seen = {concept}
            cur = concept
            while cur != root:
                cur = self._parent.get(cur)
                if cur is None:
                    raise ParseError(
                        f"concept {concept!r} does not reach root {root!r}"
                    )
                if cur in seen:
                    raise CycleWouldForm(f"cycle through {cur!r}")
                seen.add(cur)

        labels = dict(labels or {})
        for concept in labels:
            if not self.contains(concept):
                raise UnknownConcept(f"label for unknown concept {concept!r}")
        self.labels: Mapping[str, str] = MappingProxyType(labels)

        children: dict[str, list[str]] = {root: []}
        for child in self._parent:
            children.setdefault(child, [])
        for child, par in self._parent.items():
            children[par].append(child)
        for kids in children.values():
            kids.sort()
        self._children = children

    # -- construction ------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> Taxonomy:
        """Build from the taxonomy file shape.

        ``{"name": str, "root": str, "edges": [[parent, child], ...],
        "labels": {id: str}?}``. Edge order is irrelevant; the constructor
        validates connectivity regardless.
        """
        try:
            name = data["name"]
            root = data["root"]
            edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"taxonomy file missing key: {exc}") from exc
        parent: dict[str, str] = {}
        for edge in edges:
            if not isinstance(edge, (list, tuple)) or len(edge) != 2:
                raise ParseError(f"malformed edge: {edge!r}")
            par, child = edge
            if child in parent and parent[child] != par:
                raise ParseError(
                    f"concept {child!r} has multiple parents: "
                    f"{parent[child]!r} and {par!r}"
                )
            if child == root:
                raise ParseError(f"root {root!r} listed as a child")
            parent[child] = par
        return cls(name, root, parent, data.get("labels"))

    @classmethod
    def load(cls, path) -> Taxonomy:
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
                ) from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        edges = sorted([par, child] for child, par in self._parent.items())
        out: dict = {"name": self.name, "root": self.root, "edges": edges}
        if self.labels:
            out["labels"] = dict(sorted(self.labels.items()))
        return out

    def add_concept(self, child: str, parent: str) -> Taxonomy:
        """Return a new taxonomy with ``child`` attached under ``parent``."""
        _check_concept_id(child)
        if not self.contains(parent):
            raise UnknownParent(f"unknown parent {parent!r}")
        if self.contains(child):
            raise DuplicateConcept(f"concept {child!r} already exists")
        updated = dict(self._parent)
        updated[child] = parent
        return Taxonomy(self.name, self.root, updated, self.labels)

    # -- queries -------------------------------------------------------------

    def contains(self, concept: str) -> bool:
        return concept == self.root or concept in self._parent

    def concepts(self) -> set[str]:
        return {self.root, *self._parent}

    def parent(self, concept: str) -> str | None:
        self._require(concept)
        return self._parent.get(concept)

    def children(self, concept: str) -> list[str]:
        self._require(concept)
        return list(self._children[concept])

    def path_to_root(self, concept: str) -> list[str]:
        """Root-first path ``[root, ..., concept]``, inclusive at both ends."""
        self._require(concept)
        path = [concept]
        cur = concept
        while cur != self.root:
            cur = self._parent[cur]
            path.append(cur)
        path.reverse()
        return path

    def is_subsumed_by(self, narrow: str, broad: str) -> bool:
        """True iff ``narrow`` ⊑ ``broad`` (reflexive)."""
        self._require(broad)
        return broad in self.path_to_root(narrow)

    def field_closeness(self, subject: str, expert: str) -> Fraction:
        """Shared fraction of the subject field's root path.

        |path(root, subject) ∩ path(root, expert)| / |path(root, subject)|,
        counting nodes including the root and both endpoints. Always in
        (0, 1] since the root is shared.
        """
        subject_path = self.path_to_root(subject)
        expert_path = set(self.path_to_root(expert))
        shared = sum(1 for node in subject_path if node in expert_path)
        return Fraction(shared, len(subject_path))

    def descendants(self, concept: str) -> set[str]:
        """All concepts subsumed by ``concept``, itself included."""
        self._require(concept)
        out = set()
        stack = [concept]
        while stack:
            cur = stack.pop()
            out.add(cur)
            stack.extend(self._children[cur])
        return out

    def _require(self, concept: str) -> None:
        if not self.contains(concept):
            raise UnknownConcept(
                f"unknown concept {concept!r} in taxonomy {self.name!r}"
            )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Taxonomy)
            and self.name == other.name
            and self.root == other.root
            and self._parent == other._parent
            and dict(self.labels) == dict(other.labels)
        )

    def __repr__(self) -> str:
        return f"Taxonomy({self.name!r}, root={self.root!r}, {len(self._parent) + 1} concepts)"


def load_taxonomies(paths_or_dicts: Iterable) -> dict[str, Taxonomy]:
    """Load several taxonomies (file paths or inline dicts) into a registry."""
    registry: dict[str, Taxonomy] = {}
    for item in paths_or_dicts:
        tax = Taxonomy.from_dict(item) if isinstance(item, dict) else Taxonomy.load(item)
        if tax.name in registry:
            raise ParseError(f"duplicate taxonomy name {tax.name!r}")
        registry[tax.name] = tax
    return registry
