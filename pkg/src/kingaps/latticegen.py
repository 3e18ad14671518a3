"""Concept lattice construction.

Generates the exhaustive attribute cross-product for a subdomain, filters it
down to an attested inventory, and computes the cover (direct is-a) edges:
the transitive reduction of the generalization order restricted to the
attested set. Because reduction runs on the filtered set, an edge may skip
attribute levels whose intermediate concepts are unattested.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import UnknownLabelError
from .kinmodel import (
    Concept,
    Gender,
    KinStep,
    Relation,
    RelativeAge,
    Subdomain,
    attribute_vector,
    parse_label,
    render_label,
    subdomain_from_name,
)
from .tsv import read_rows

_GENDERS = (Gender.MALE, Gender.FEMALE, Gender.UNSPECIFIED)
_AGES = (RelativeAge.ELDER, RelativeAge.YOUNGER, RelativeAge.UNSPECIFIED)


def generate_all(subdomain: Subdomain) -> list[Concept]:
    """Full attribute cross-product for a subdomain, sorted by label."""
    step_choices: list[list[KinStep]] = []
    for relation in subdomain.skeleton:
        if relation is Relation.SIBLING:
            choices = [
                KinStep(relation, gender, age)
                for gender in _GENDERS
                for age in _AGES
            ]
        else:
            choices = [KinStep(relation, gender) for gender in _GENDERS]
        step_choices.append(choices)
    concepts = [
        Concept(subdomain, steps, speaker)
        for steps in product(*step_choices)
        for speaker in _GENDERS
    ]
    return sorted(concepts, key=render_label)


@dataclass(frozen=True)
class AttestationList:
    """Concept labels attested for a subdomain, with per-label provenance."""

    subdomain: Subdomain
    provenance: dict[str, str]

    @property
    def labels(self) -> set[str]:
        return set(self.provenance)


def load_attestations(path) -> dict[Subdomain, AttestationList]:
    """Read an attestation TSV: subdomain, concept label, provenance."""
    per_subdomain: dict[Subdomain, dict[str, str]] = {}
    for lineno, (sub_name, label, provenance) in read_rows(path, 3):
        subdomain = subdomain_from_name(sub_name)
        concept = parse_label(label)
        if concept.subdomain is not subdomain:
            raise UnknownLabelError(
                f"label {label!r} belongs to {concept.subdomain.value}, "
                f"not {sub_name} ({path}:{lineno})"
            )
        canonical = render_label(concept)
        entries = per_subdomain.setdefault(subdomain, {})
        if canonical in entries:
            raise UnknownLabelError(
                f"duplicate attestation for {canonical!r} ({path}:{lineno})"
            )
        entries[canonical] = provenance
    return {
        subdomain: AttestationList(subdomain, entries)
        for subdomain, entries in per_subdomain.items()
    }


def filter_attested(all_concepts: list[Concept], attested: AttestationList) -> list[Concept]:
    """Keep the generated concepts named by the attestation list."""
    by_label = {render_label(c): c for c in all_concepts}
    kept = []
    for label in sorted(attested.labels):
        concept = by_label.get(label)
        if concept is None:
            raise UnknownLabelError(
                f"attested label {label!r} is outside the generated "
                f"{attested.subdomain.value} concept set"
            )
        kept.append(concept)
    return kept


def cover_edges(concepts) -> set[tuple[Concept, Concept]]:
    """Transitive reduction of the generalization order over `concepts`.

    Edge (g, h) means g is a direct hypernym of h within the given set.
    """
    concepts = list(concepts)
    vectors = {c: attribute_vector(c) for c in concepts}

    def strictly_above(a: Concept, b: Concept) -> bool:
        above = vectors[a]
        below = vectors[b]
        if above == below:
            return False
        for mine, theirs in zip(above, below):
            if mine is not theirs and mine not in (
                Gender.UNSPECIFIED,
                RelativeAge.UNSPECIFIED,
            ):
                return False
        return True

    ancestors: dict[Concept, set[Concept]] = {c: set() for c in concepts}
    for a in concepts:
        for b in concepts:
            if a is not b and strictly_above(a, b):
                ancestors[b].add(a)

    edges: set[tuple[Concept, Concept]] = set()
    for child, ancs in ancestors.items():
        indirect: set[Concept] = set()
        for mid in ancs:
            indirect |= ancestors[mid]
        for parent in ancs - indirect:
            edges.add((parent, child))
    return edges


class Lattice:
    """An attested concept set of one subdomain with its cover edges."""

    def __init__(self, subdomain: Subdomain, concepts, edges=None):
        self.subdomain = subdomain
        self.concepts = frozenset(concepts)
        for concept in self.concepts:
            if concept.subdomain is not subdomain:
                raise UnknownLabelError(
                    f"{render_label(concept)!r} is not a {subdomain.value} concept"
                )
        self.edges = frozenset(edges if edges is not None else cover_edges(self.concepts))
        self._parents: dict[Concept, set[Concept]] = {c: set() for c in self.concepts}
        self._children: dict[Concept, set[Concept]] = {c: set() for c in self.concepts}
        for hypernym, hyponym in self.edges:
            self._parents[hyponym].add(hypernym)
            self._children[hypernym].add(hyponym)

    def parents(self, concept: Concept) -> set[Concept]:
        return set(self._parents[concept])

    def children(self, concept: Concept) -> set[Concept]:
        return set(self._children[concept])

    def sorted_concepts(self) -> list[Concept]:
        return sorted(self.concepts, key=render_label)

    def sorted_edges(self) -> list[tuple[Concept, Concept]]:
        return sorted(self.edges, key=lambda e: (render_label(e[0]), render_label(e[1])))


def build_lattice(subdomain: Subdomain, attested: AttestationList | None = None) -> Lattice:
    """Generate, optionally filter, and wire up one subdomain's lattice."""
    concepts = generate_all(subdomain)
    if attested is not None:
        concepts = filter_attested(concepts, attested)
    return Lattice(subdomain, concepts)


_PARENT_NOUNS = {Gender.MALE: "father", Gender.FEMALE: "mother", Gender.UNSPECIFIED: "parent"}
_CHILD_NOUNS = {Gender.MALE: "son", Gender.FEMALE: "daughter", Gender.UNSPECIFIED: "child"}
_SIBLING_NOUNS = {Gender.MALE: "brother", Gender.FEMALE: "sister", Gender.UNSPECIFIED: "sibling"}
_NOUNS = {
    Relation.PARENT: _PARENT_NOUNS,
    Relation.CHILD: _CHILD_NOUNS,
    Relation.SIBLING: _SIBLING_NOUNS,
}
_AGE_ADJECTIVES = {RelativeAge.ELDER: "elder ", RelativeAge.YOUNGER: "younger "}
_SPEAKER_CLAUSES = {
    Gender.MALE: " (as pronounced by a male speaker)",
    Gender.FEMALE: " (as pronounced by a female speaker)",
}


def render_description(concept: Concept) -> str:
    """Deterministic English gloss: possessive step chain plus speaker clause."""
    phrases = []
    for step in concept.steps:
        noun = _NOUNS[step.relation][step.kin_gender]
        phrases.append(_AGE_ADJECTIVES.get(step.age, "") + noun)
    text = "'s ".join(phrases)
    if concept.speaker_gender is not Gender.UNSPECIFIED:
        text += _SPEAKER_CLAUSES[concept.speaker_gender]
    return text
