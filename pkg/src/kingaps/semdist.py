"""Hop distance through the concept hierarchy, and MT benchmark scoring.

The distance between two concepts is the least total number of cover-edge
hops from both up to a shared ancestor. A translation that merely
generalizes ("younger brother" rendered as "brother") costs one upward hop;
one that substitutes a sibling concept ("younger brother" rendered as
"elder brother") costs hops up and back down, surfacing the meaning error
that string-overlap metrics miss.
"""

from __future__ import annotations

import unicodedata
from collections import deque
from dataclasses import dataclass

from .errors import NoCommonSubsumerError, SubdomainMismatchError, UnknownLabelError
from .ingest import Language, language_from_iso
from .kinmodel import Concept, parse_label, render_label
from .langcodes import require_iso
from .latticegen import Lattice
from .tsv import read_rows


def _hops_upward(concept: Concept, lattice: Lattice) -> dict[Concept, int]:
    """Minimum cover-edge hop count from `concept` to each of its ancestors."""
    hops = {concept: 0}
    queue = deque([concept])
    while queue:
        node = queue.popleft()
        for parent in lattice.parents(node):
            if parent not in hops:
                hops[parent] = hops[node] + 1
                queue.append(parent)
    return hops


def lcs_distance(a: Concept, b: Concept, lattice: Lattice) -> int:
    """Least total hops from `a` and `b` up to a common subsumer."""
    if a.subdomain is not b.subdomain:
        raise SubdomainMismatchError(
            f"{render_label(a)} and {render_label(b)} live in different subdomains"
        )
    for concept in (a, b):
        if concept not in lattice.concepts:
            raise UnknownLabelError(f"{render_label(concept)!r} is not in the lattice")
    up_a = _hops_upward(a, lattice)
    up_b = _hops_upward(b, lattice)
    common = set(up_a) & set(up_b)
    if not common:
        raise NoCommonSubsumerError(
            f"{render_label(a)} and {render_label(b)} share no ancestor"
        )
    return min(up_a[s] + up_b[s] for s in common)


def _fold(text: str) -> str:
    return unicodedata.normalize("NFC", text).casefold()


class Lexicon:
    """Per-language term-to-concepts index with normalized exact matching."""

    def __init__(self, words):
        self._by_language: dict[str, dict[str, set[str]]] = {}
        for word in words:
            terms = self._by_language.setdefault(word.language.iso, {})
            terms.setdefault(_fold(word.term), set()).add(word.concept)

    def concepts_for(self, term: str, iso: str) -> set[Concept]:
        labels = self._by_language.get(iso, {}).get(_fold(term), set())
        return {parse_label(label) for label in labels}

    def terms(self, iso: str) -> list[str]:
        return sorted(self._by_language.get(iso, {}))


def disambiguate(term: str, language: Language, lexicon: Lexicon) -> set[Concept]:
    """All concepts the lexicon maps to `term` in `language`; empty if unknown."""
    return lexicon.concepts_for(term, language.iso)


def locate_target_term(text: str, language: Language, lexicon: Lexicon) -> tuple[str, set[Concept]] | None:
    """Longest lexicon term occurring in `text`; ties go to the earliest position."""
    folded = _fold(text)
    best: tuple[int, int, str] | None = None
    for term in lexicon.terms(language.iso):
        position = folded.find(term)
        if position < 0:
            continue
        candidate = (-len(term), position, term)
        if best is None or candidate < best:
            best = candidate
    if best is None:
        return None
    term = best[2]
    return term, lexicon.concepts_for(term, language.iso)


@dataclass(frozen=True)
class BenchmarkSentence:
    id: str
    source_text: str
    gold_concept: str
    target_language: Language
    translated_text: str


def load_benchmark(path) -> list[BenchmarkSentence]:
    """Benchmark TSV: id, source_text, gold_concept, target_iso, translated_text."""
    sentences = []
    for lineno, (sid, source, gold, iso, translated) in read_rows(path, 5):
        iso3 = require_iso(iso, path=path, line=lineno)
        gold_label = render_label(parse_label(gold))
        sentences.append(
            BenchmarkSentence(sid, source, gold_label, language_from_iso(iso3), translated)
        )
    return sentences


@dataclass(frozen=True)
class SentenceScore:
    sentence: BenchmarkSentence
    matched_term: str | None
    candidates: tuple[str, ...]
    distance: int | None
    is_gap: bool
    flags: tuple[str, ...]


@dataclass
class SemDistReport:
    """Per language pair: gap count and average distances over scored sentences."""

    language_pair: str
    gap_count: int = 0
    scored: int = 0
    unmatched_count: int = 0
    _dist_sum_all: float = 0.0
    _dist_sum_gaps: float = 0.0
    _gap_scored: int = 0

    @property
    def avg_dist_all(self) -> float | None:
        return self._dist_sum_all / self.scored if self.scored else None

    @property
    def avg_dist_gaps(self) -> float | None:
        return self._dist_sum_gaps / self._gap_scored if self._gap_scored else None


def score_benchmark(sentences, lattices, lexicon: Lexicon, gaps) -> tuple[list[SemDistReport], list[SentenceScore]]:
    """Score translated sentences by hop distance from the annotated meaning.

    Per sentence: find the translated kin term, disambiguate it, and take the
    minimum distance to the gold concept over the candidate senses. Sentences
    whose translation contains no lexicon term, or only terms out of the gold
    concept's subdomain, are excluded from the averages and counted.
    """
    by_subdomain = {lattice.subdomain: lattice for lattice in lattices}
    gap_pairs = {(g.language.iso, g.concept) for g in gaps}
    reports: dict[str, SemDistReport] = {}
    scores: list[SentenceScore] = []

    for sentence in sorted(sentences, key=lambda s: (s.target_language.iso, s.id)):
        pair = f"eng-{sentence.target_language.iso}"
        report = reports.setdefault(pair, SemDistReport(pair))
        gold = parse_label(sentence.gold_concept)
        lattice = by_subdomain.get(gold.subdomain)
        if lattice is None or gold not in lattice.concepts:
            raise UnknownLabelError(
                f"gold concept {sentence.gold_concept!r} of sentence {sentence.id!r} "
                "is not in any provided lattice"
            )
        is_gap = (sentence.target_language.iso, sentence.gold_concept) in gap_pairs
        if is_gap:
            report.gap_count += 1

        flags: list[str] = []
        located = locate_target_term(sentence.translated_text, sentence.target_language, lexicon)
        if located is None:
            flags.append("no_lexicon_term")
            report.unmatched_count += 1
            scores.append(SentenceScore(sentence, None, (), None, is_gap, tuple(flags)))
            continue
        term, candidates = located
        in_subdomain = {c for c in candidates if c.subdomain is gold.subdomain}
        if not in_subdomain:
            flags.append("no_candidate_in_gold_subdomain")
            report.unmatched_count += 1
            scores.append(
                SentenceScore(
                    sentence, term, tuple(sorted(render_label(c) for c in candidates)),
                    None, is_gap, tuple(flags),
                )
            )
            continue
        if len(in_subdomain) > 1:
            flags.append("ambiguous_term")
        distance = min(lcs_distance(gold, candidate, lattice) for candidate in in_subdomain)
        report.scored += 1
        report._dist_sum_all += distance
        if is_gap:
            report._gap_scored += 1
            report._dist_sum_gaps += distance
        scores.append(
            SentenceScore(
                sentence, term, tuple(sorted(render_label(c) for c in in_subdomain)),
                distance, is_gap, tuple(flags),
            )
        )
    return [reports[pair] for pair in sorted(reports)], scores
