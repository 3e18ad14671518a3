"""The four-file TSV resource: emission, loading, validation.

concepts.tsv   subdomain, concept_label, description, provenance
relations.tsv  subdomain, hypernym_label, hyponym_label
words.tsv      subdomain, concept_label, lang_name, iso_code, term, provenance
gaps.tsv       subdomain, concept_label, lang_name, iso_code, evidence

Rows are sorted and emission is byte-stable: identical inputs produce
identical files. The ISO code column is authoritative; the language-name
column is derived from the built-in code table.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import MalformedLabelError, MissingFileError, TsvParseError, UnknownLabelError
from .kinmodel import parse_label, render_label
from .langcodes import language_name
from .latticegen import render_description
from .tsv import read_rows, write_rows

CONCEPTS_FILE = "concepts.tsv"
RELATIONS_FILE = "relations.tsv"
WORDS_FILE = "words.tsv"
GAPS_FILE = "gaps.tsv"

_HEADERS = {
    CONCEPTS_FILE: ("subdomain", "concept_label", "description", "provenance"),
    RELATIONS_FILE: ("subdomain", "hypernym_label", "hyponym_label"),
    WORDS_FILE: ("subdomain", "concept_label", "lang_name", "iso_code", "term", "provenance"),
    GAPS_FILE: ("subdomain", "concept_label", "lang_name", "iso_code", "evidence"),
}


@dataclass(frozen=True, order=True)
class ConceptRow:
    subdomain: str
    label: str
    description: str
    provenance: str


@dataclass(frozen=True, order=True)
class RelationRow:
    subdomain: str
    hypernym: str
    hyponym: str


@dataclass(frozen=True, order=True)
class WordRow:
    subdomain: str
    label: str
    lang_name: str
    iso: str
    term: str
    provenance: str


@dataclass(frozen=True, order=True)
class GapRow:
    subdomain: str
    label: str
    lang_name: str
    iso: str
    evidence: str


@dataclass
class ResourceBundle:
    concepts: list[ConceptRow] = field(default_factory=list)
    relations: list[RelationRow] = field(default_factory=list)
    words: list[WordRow] = field(default_factory=list)
    gaps: list[GapRow] = field(default_factory=list)

    def sort(self) -> "ResourceBundle":
        # ISO code is the sort key, not the derived language name
        self.concepts.sort(key=lambda r: (r.subdomain, r.label))
        self.relations.sort(key=lambda r: (r.subdomain, r.hypernym, r.hyponym))
        self.words.sort(key=lambda r: (r.subdomain, r.label, r.iso, r.term, r.provenance))
        self.gaps.sort(key=lambda r: (r.subdomain, r.label, r.iso, r.evidence))
        return self

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResourceBundle):
            return NotImplemented
        return (
            self.concepts == other.concepts
            and self.relations == other.relations
            and self.words == other.words
            and self.gaps == other.gaps
        )


def build_bundle(lattices, words, gaps, provenance=None) -> ResourceBundle:
    """Assemble a bundle from lattices plus merged word/gap evidence.

    `provenance` maps concept labels to their attestation source; labels
    without an entry get "unspecified". Word and gap concepts must belong to
    one of the given lattices.
    """
    provenance = provenance or {}
    bundle = ResourceBundle()
    known: set[str] = set()
    for lattice in lattices:
        sub = lattice.subdomain.value
        for concept in lattice.sorted_concepts():
            label = render_label(concept)
            known.add(label)
            bundle.concepts.append(
                ConceptRow(sub, label, render_description(concept), provenance.get(label, "unspecified"))
            )
        for hypernym, hyponym in lattice.sorted_edges():
            bundle.relations.append(RelationRow(sub, render_label(hypernym), render_label(hyponym)))

    def subdomain_of(label: str, what: str) -> str:
        if label not in known:
            raise UnknownLabelError(f"{what} references {label!r}, which is not an emitted concept")
        return parse_label(label).subdomain.value

    for word in words:
        bundle.words.append(
            WordRow(
                subdomain_of(word.concept, "word"),
                word.concept,
                language_name(word.language.iso),
                word.language.iso,
                word.term,
                word.provenance.value,
            )
        )
    for gap in gaps:
        bundle.gaps.append(
            GapRow(
                subdomain_of(gap.concept, "gap"),
                gap.concept,
                language_name(gap.language.iso),
                gap.language.iso,
                gap.evidence,
            )
        )
    return bundle.sort()


def write_bundle(bundle: ResourceBundle, out_dir, files=None) -> None:
    """Write the bundle's files (all four by default) under `out_dir`."""
    os.makedirs(out_dir, exist_ok=True)
    bundle.sort()
    emitters = {
        CONCEPTS_FILE: ((r.subdomain, r.label, r.description, r.provenance) for r in bundle.concepts),
        RELATIONS_FILE: ((r.subdomain, r.hypernym, r.hyponym) for r in bundle.relations),
        WORDS_FILE: ((r.subdomain, r.label, r.lang_name, r.iso, r.term, r.provenance) for r in bundle.words),
        GAPS_FILE: ((r.subdomain, r.label, r.lang_name, r.iso, r.evidence) for r in bundle.gaps),
    }
    for name in files if files is not None else _HEADERS:
        write_rows(os.path.join(out_dir, name), emitters[name], header=_HEADERS[name])


def emit_resource(lattices, words, gaps, out_dir, provenance=None) -> ResourceBundle:
    """Build and write the four-file resource; returns the emitted bundle."""
    bundle = build_bundle(lattices, words, gaps, provenance)
    write_bundle(bundle, out_dir)
    return bundle


def load_resource(directory, strict: bool = True) -> ResourceBundle:
    """Load a four-file resource directory.

    In strict mode (the default) malformed labels and references to unknown
    concepts raise TsvParseError with the offending file and line; lenient
    mode defers those to validate_resource.
    """
    paths = {name: os.path.join(directory, name) for name in _HEADERS}
    for name, path in paths.items():
        if not os.path.isfile(path):
            raise MissingFileError(f"resource is missing {name} in {directory}")

    bundle = ResourceBundle()
    known: set[str] = set()

    def check_label(label: str, name: str, lineno: int) -> None:
        if not strict:
            return
        try:
            parse_label(label)
        except MalformedLabelError as exc:
            raise TsvParseError(str(exc), path=paths[name], line=lineno) from exc
        if name != CONCEPTS_FILE and label not in known:
            raise TsvParseError(
                f"unknown concept label {label!r}", path=paths[name], line=lineno
            )

    for lineno, fields in read_rows(paths[CONCEPTS_FILE], 4, header=_HEADERS[CONCEPTS_FILE]):
        check_label(fields[1], CONCEPTS_FILE, lineno)
        known.add(fields[1])
        bundle.concepts.append(ConceptRow(*fields))
    for lineno, fields in read_rows(paths[RELATIONS_FILE], 3, header=_HEADERS[RELATIONS_FILE]):
        check_label(fields[1], RELATIONS_FILE, lineno)
        check_label(fields[2], RELATIONS_FILE, lineno)
        bundle.relations.append(RelationRow(*fields))
    for lineno, fields in read_rows(paths[WORDS_FILE], 6, header=_HEADERS[WORDS_FILE]):
        check_label(fields[1], WORDS_FILE, lineno)
        bundle.words.append(WordRow(*fields))
    for lineno, fields in read_rows(paths[GAPS_FILE], 5, header=_HEADERS[GAPS_FILE]):
        check_label(fields[1], GAPS_FILE, lineno)
        bundle.gaps.append(GapRow(*fields))
    return bundle


@dataclass(frozen=True)
class Violation:
    kind: str
    location: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, location: str, message: str) -> None:
        self.violations.append(Violation(kind, location, message))


def _find_cycles(nodes, edges) -> list[list[str]]:
    """Strongly connected components with more than one node, plus self-loops."""
    out: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        out.setdefault(a, []).append(b)
        out.setdefault(b, [])
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    components: list[list[str]] = []

    def strongconnect(start: str) -> None:
        work = [(start, iter(out[start]))]
        index[start] = low[start] = counter[0]
        counter[0] += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter[0]
                    counter[0] += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(out[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    components.append(sorted(component))

    for node in sorted(out):
        if node not in index:
            strongconnect(node)
    for a, b in edges:
        if a == b:
            components.append([a])
    return sorted(components)


def validate_resource(bundle: ResourceBundle) -> ValidationReport:
    """Check bundle invariants; violations are reported, never raised."""
    report = ValidationReport()
    known: set[str] = set()

    for i, row in enumerate(bundle.concepts):
        try:
            parse_label(row.label)
            known.add(row.label)
        except MalformedLabelError as exc:
            report.add("malformed_label", f"concepts row {i + 1}", str(exc))

    def check_ref(label: str, location: str) -> bool:
        try:
            parse_label(label)
        except MalformedLabelError as exc:
            report.add("malformed_label", location, str(exc))
            return False
        if label not in known:
            report.add("dangling_label", location, f"{label!r} does not appear in concepts")
            return False
        return True

    per_subdomain_edges: dict[str, list[tuple[str, str]]] = {}
    for i, row in enumerate(bundle.relations):
        location = f"relations row {i + 1}"
        hyper_ok = check_ref(row.hypernym, location)
        hypo_ok = check_ref(row.hyponym, location)
        if hyper_ok and hypo_ok:
            per_subdomain_edges.setdefault(row.subdomain, []).append((row.hypernym, row.hyponym))
    for subdomain in sorted(per_subdomain_edges):
        edges = per_subdomain_edges[subdomain]
        nodes = {n for edge in edges for n in edge}
        for component in _find_cycles(nodes, edges):
            report.add(
                "cycle",
                f"relations ({subdomain})",
                "cycle through " + ", ".join(component),
            )

    word_pairs: set[tuple[str, str]] = set()
    for i, row in enumerate(bundle.words):
        check_ref(row.label, f"words row {i + 1}")
        word_pairs.add((row.iso, row.label))
    for i, row in enumerate(bundle.gaps):
        location = f"gaps row {i + 1}"
        check_ref(row.label, location)
        if (row.iso, row.label) in word_pairs:
            report.add(
                "word_gap_conflict",
                location,
                f"{row.iso}/{row.label} appears in both words and gaps",
            )
    return report
