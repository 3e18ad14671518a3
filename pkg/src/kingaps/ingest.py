"""Evidence loaders: typological pattern tables, wikitext dump excerpts, speaker gold.

The wikitext support is a deliberately small subset: level-2 `==English==`
sections, `{{trans-top|<gloss>}} ... {{trans-bottom}}` translation blocks,
and `{{t|iso|term}}` / `{{t+|iso|term}}` items. Anything else inside a block
is skipped per item and counted, never fatal.
"""

from __future__ import annotations

import os
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    DanglingPatternRefError,
    DuplicatePatternError,
    TsvParseError,
    UnreadableFileError,
    WordGapConflictError,
)
from .kinmodel import Subdomain, parse_label, render_label, subdomain_from_name
from .langcodes import language_name, normalize_iso, require_iso
from .tsv import read_rows, write_rows


@dataclass(frozen=True, order=True)
class Language:
    name: str
    iso: str

    def __post_init__(self):
        if not re.fullmatch(r"[a-z]{3}", self.iso):
            raise ValueError(f"ISO code must be 3 lowercase letters: {self.iso!r}")


def language_from_iso(iso: str) -> Language:
    return Language(language_name(iso), iso)


class Provenance(Enum):
    WIKTIONARY = "wiktionary"
    SPEAKER = "speaker"


@dataclass(frozen=True)
class Lexicalization:
    """A word or restricted collocation expressing a concept in a language."""

    language: Language
    concept: str
    term: str
    provenance: Provenance
    usage_note: str = ""

    def key(self) -> tuple[str, str]:
        return (self.language.iso, self.concept)

    def sort_key(self) -> tuple[str, str, str, str]:
        return (self.language.iso, self.concept, self.term, self.provenance.value)


@dataclass(frozen=True)
class Gap:
    """An attested non-lexicalization of a concept in a language."""

    language: Language
    concept: str
    evidence: str

    def key(self) -> tuple[str, str]:
        return (self.language.iso, self.concept)

    def sort_key(self) -> tuple[str, str, str]:
        return (self.language.iso, self.concept, self.evidence)


def sorted_words(words) -> list[Lexicalization]:
    return sorted(words, key=Lexicalization.sort_key)


def sorted_gaps(gaps) -> list[Gap]:
    return sorted(gaps, key=Gap.sort_key)


@dataclass(frozen=True)
class MurdockPattern:
    """A named, exhaustive description of which subdomain concepts a language lexicalizes."""

    name: str
    subdomain: Subdomain
    lexicalized: frozenset[str]


@dataclass(frozen=True, order=True)
class PatternAssignment:
    language: Language
    pattern: str


def load_murdock(patterns_path, assignments_path) -> tuple[dict[str, MurdockPattern], list[PatternAssignment]]:
    """Load pattern definitions and per-language assignments, checking cross-references."""
    patterns: dict[str, MurdockPattern] = {}
    for lineno, (name, sub_name, labels) in read_rows(patterns_path, 3):
        if name in patterns:
            raise DuplicatePatternError(f"pattern {name!r} defined twice ({patterns_path}:{lineno})")
        subdomain = subdomain_from_name(sub_name)
        lexicalized = set()
        for label in filter(None, (part.strip() for part in labels.split(","))):
            concept = parse_label(label)
            if concept.subdomain is not subdomain:
                raise TsvParseError(
                    f"label {label!r} is not a {sub_name} concept",
                    path=patterns_path,
                    line=lineno,
                )
            lexicalized.add(render_label(concept))
        patterns[name] = MurdockPattern(name, subdomain, frozenset(lexicalized))

    assignments: list[PatternAssignment] = []
    for lineno, (iso, pattern_name) in read_rows(assignments_path, 2):
        if pattern_name not in patterns:
            raise DanglingPatternRefError(
                f"{iso!r} assigned to unknown pattern {pattern_name!r} "
                f"({assignments_path}:{lineno})"
            )
        iso3 = require_iso(iso, path=assignments_path, line=lineno)
        assignments.append(PatternAssignment(language_from_iso(iso3), pattern_name))
    return patterns, sorted(assignments)


def normalize_gloss(text: str) -> str:
    return " ".join(text.lower().split())


@dataclass
class GlossMap:
    """Exact-match table from normalized translation-table glosses to concept labels."""

    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs) -> "GlossMap":
        # Longest pattern first so a duplicate normalized pattern resolves
        # deterministically to the most specific raw entry.
        entries: dict[str, str] = {}
        for pattern, label in sorted(pairs, key=lambda p: (-len(p[0]), p[0], p[1])):
            entries.setdefault(normalize_gloss(pattern), render_label(parse_label(label)))
        return cls(entries)

    def lookup(self, gloss: str) -> str | None:
        return self.entries.get(normalize_gloss(gloss))


def load_gloss_map(path) -> GlossMap:
    return GlossMap.from_pairs(fields for _, fields in read_rows(path, 2))


@dataclass
class SkipReport:
    """Counts of what extraction consumed versus what it kept.

    Invariant: items == items_emitted + items_skipped.
    """

    pages: int = 0
    pages_without_english: int = 0
    blocks: int = 0
    blocks_unmatched_gloss: int = 0
    items: int = 0
    items_emitted: int = 0
    items_skipped: int = 0

    def rows(self) -> list[tuple[str, str]]:
        return [
            ("pages", str(self.pages)),
            ("pages_without_english", str(self.pages_without_english)),
            ("blocks", str(self.blocks)),
            ("blocks_unmatched_gloss", str(self.blocks_unmatched_gloss)),
            ("items", str(self.items)),
            ("items_emitted", str(self.items_emitted)),
            ("items_skipped", str(self.items_skipped)),
        ]


_ENGLISH_HEADER = re.compile(r"^==\s*English\s*==\s*$", re.MULTILINE)
_ANY_L2_HEADER = re.compile(r"^==[^=].*?==\s*$", re.MULTILINE)
_TRANS_BLOCK = re.compile(r"\{\{trans-top\|(?P<args>[^}]*)\}\}(?P<body>.*?)\{\{trans-bottom\}\}", re.DOTALL)
_TEMPLATE = re.compile(r"\{\{(?P<inner>[^{}]*)\}\}")


def _english_section(text: str) -> str | None:
    match = _ENGLISH_HEADER.search(text)
    if match is None:
        return None
    rest = text[match.end():]
    nxt = _ANY_L2_HEADER.search(rest)
    return rest[: nxt.start()] if nxt else rest


def _first_positional(args: str) -> str | None:
    for part in args.split("|"):
        if "=" not in part:
            return part
    return None


def extract_wiktionary(dump_dir, gloss_map: GlossMap) -> tuple[list[Lexicalization], SkipReport]:
    """Extract lexicalizations from a directory of one-page `.wiki` files.

    Deterministic regardless of directory enumeration order: pages are
    processed sorted by filename and the result is sorted (iso, concept, term).
    """
    report = SkipReport()
    found: set[Lexicalization] = set()
    try:
        names = sorted(n for n in os.listdir(dump_dir) if n.endswith(".wiki"))
    except OSError as exc:
        raise UnreadableFileError(f"cannot list dump directory {dump_dir}: {exc}") from exc

    for name in names:
        path = os.path.join(dump_dir, name)
        try:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
        except (OSError, UnicodeDecodeError) as exc:
            raise UnreadableFileError(f"cannot read dump page {path}: {exc}") from exc
        report.pages += 1
        section = _english_section(text)
        if section is None:
            report.pages_without_english += 1
            continue
        for block in _TRANS_BLOCK.finditer(section):
            report.blocks += 1
            gloss = _first_positional(block.group("args"))
            concept = gloss_map.lookup(gloss) if gloss is not None else None
            if concept is None:
                report.blocks_unmatched_gloss += 1
                continue
            for template in _TEMPLATE.finditer(block.group("body")):
                report.items += 1
                parts = template.group("inner").split("|")
                if parts[0] not in ("t", "t+") or len(parts) < 3:
                    report.items_skipped += 1
                    continue
                iso = normalize_iso(parts[1])
                term = unicodedata.normalize("NFC", parts[2].strip())
                if iso is None or not term:
                    report.items_skipped += 1
                    continue
                report.items_emitted += 1
                found.add(
                    Lexicalization(language_from_iso(iso), concept, term, Provenance.WIKTIONARY)
                )
    return sorted_words(found), report


def write_words_evidence(path, words) -> None:
    """Normalized word evidence TSV: iso, concept, term, provenance, note."""
    write_rows(
        path,
        (
            (w.language.iso, w.concept, w.term, w.provenance.value, w.usage_note)
            for w in sorted_words(words)
        ),
    )


def read_words_evidence(path) -> list[Lexicalization]:
    words = []
    for lineno, (iso, label, term, provenance, note) in read_rows(path, 5, min_cols=4):
        iso3 = require_iso(iso, path=path, line=lineno)
        if not term:
            raise TsvParseError("word row with empty term", path=path, line=lineno)
        words.append(
            Lexicalization(
                language_from_iso(iso3),
                render_label(parse_label(label)),
                unicodedata.normalize("NFC", term),
                Provenance(provenance),
                note,
            )
        )
    return sorted_words(words)


def write_gaps_evidence(path, gaps) -> None:
    """Normalized gap evidence TSV: iso, concept, evidence."""
    write_rows(path, ((g.language.iso, g.concept, g.evidence) for g in sorted_gaps(gaps)))


def read_gaps_evidence(path) -> list[Gap]:
    gaps = []
    for lineno, (iso, label, evidence) in read_rows(path, 3):
        iso3 = require_iso(iso, path=path, line=lineno)
        if not evidence:
            raise TsvParseError("gap row with empty evidence", path=path, line=lineno)
        gaps.append(Gap(language_from_iso(iso3), render_label(parse_label(label)), evidence))
    return sorted_gaps(gaps)


def load_speaker_gold(path) -> tuple[list[Lexicalization], list[Gap]]:
    """Load native-speaker gold rows: per concept either a word or a gap flag."""
    words: list[Lexicalization] = []
    gaps: list[Gap] = []
    seen: dict[tuple[str, str], str] = {}
    for lineno, (iso, label, kind, term, note) in read_rows(path, 5, min_cols=3):
        iso3 = require_iso(iso, path=path, line=lineno)
        concept = render_label(parse_label(label))
        if kind not in ("word", "gap"):
            raise TsvParseError(f"kind must be 'word' or 'gap', not {kind!r}", path=path, line=lineno)
        pair = (iso3, concept)
        if pair in seen and seen[pair] != kind:
            raise WordGapConflictError(
                f"{iso3}/{concept} is marked both word and gap ({path}:{lineno})"
            )
        seen[pair] = kind
        language = language_from_iso(iso3)
        if kind == "word":
            if not term:
                raise TsvParseError("word row with empty term", path=path, line=lineno)
            words.append(
                Lexicalization(
                    language,
                    concept,
                    unicodedata.normalize("NFC", term),
                    Provenance.SPEAKER,
                    note,
                )
            )
        else:
            if term:
                raise TsvParseError("gap row must have an empty term", path=path, line=lineno)
            gaps.append(Gap(language, concept, "speaker"))
    return sorted_words(words), sorted_gaps(gaps)
