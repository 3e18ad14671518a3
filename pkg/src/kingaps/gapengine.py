"""Gap inference from the three evidence sources, plus evidence merging.

Pattern evidence is treated as exhaustive: whatever a language's pattern does
not lexicalize is a gap. Word evidence supports two inference rules:

  rule 1, for concepts with no speaker-related attributes: a concept with no
  word and no worded direct hypernym is a gap (direct hyponyms of a worded
  concept are spared because they may be lexicalized as restricted
  collocations, which absence of dictionary evidence cannot rule out);

  rule 2, for concepts carrying a speaker-related attribute: if the language
  is known not to mark that attribute, every concept carrying it is a gap.

Merging applies precedence speaker > wiktionary > inferred: a speaker gap
suppresses a dictionary word for the same pair, any surviving word suppresses
every gap for its pair, and among surviving gaps the strongest evidence wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import SubdomainMismatchError, TsvParseError
from .ingest import (
    Gap,
    Language,
    Lexicalization,
    MurdockPattern,
    PatternAssignment,
    Provenance,
    language_from_iso,
    sorted_gaps,
    sorted_words,
)
from .kinmodel import (
    parse_label,
    render_label,
    speaker_gender_specified,
    speaker_relative_age_specified,
)
from .latticegen import Lattice
from .langcodes import require_iso
from .tsv import read_rows

DEFAULT_MIN_WORDS = 4


class TraitSource(Enum):
    CONFIG = "config"
    DERIVED_FROM_WORDS = "derived"


@dataclass(frozen=True)
class LanguageTraits:
    """Whether a language marks speaker gender / speaker-relative age in kin terms."""

    language: Language
    marks_speaker_gender: bool
    marks_relative_age: bool
    source: TraitSource


def derive_traits(language: Language, words) -> LanguageTraits:
    """Read the traits off the language's observed words: a trait is marked
    iff some word maps to a concept carrying the attribute."""
    concepts = [parse_label(w.concept) for w in words if w.language.iso == language.iso]
    return LanguageTraits(
        language,
        marks_speaker_gender=any(speaker_gender_specified(c) for c in concepts),
        marks_relative_age=any(speaker_relative_age_specified(c) for c in concepts),
        source=TraitSource.DERIVED_FROM_WORDS,
    )


def load_traits(path) -> dict[str, LanguageTraits]:
    """Traits config TSV: iso, marks_speaker_gender (0|1), marks_relative_age (0|1)."""
    traits: dict[str, LanguageTraits] = {}
    for lineno, (iso, gender_flag, age_flag) in read_rows(path, 3):
        iso3 = require_iso(iso, path=path, line=lineno)
        if gender_flag not in "01" or age_flag not in "01":
            raise TsvParseError("trait flags must be 0 or 1", path=path, line=lineno)
        traits[iso3] = LanguageTraits(
            language_from_iso(iso3),
            marks_speaker_gender=gender_flag == "1",
            marks_relative_age=age_flag == "1",
            source=TraitSource.CONFIG,
        )
    return traits


def gaps_from_pattern(
    assignment: PatternAssignment, pattern: MurdockPattern, lattice: Lattice
) -> list[Gap]:
    """Every lattice concept the pattern does not lexicalize is a gap."""
    if pattern.subdomain is not lattice.subdomain:
        raise SubdomainMismatchError(
            f"pattern {pattern.name!r} covers {pattern.subdomain.value}, "
            f"lattice is {lattice.subdomain.value}"
        )
    evidence = f"murdock:{pattern.name}"
    return sorted_gaps(
        Gap(assignment.language, label, evidence)
        for label in (render_label(c) for c in lattice.concepts)
        if label not in pattern.lexicalized
    )


def _speaker_related(concept) -> bool:
    return speaker_gender_specified(concept) or speaker_relative_age_specified(concept)


def infer_rule1(
    language: Language, words, lattice: Lattice, min_words: int = DEFAULT_MIN_WORDS
) -> list[Gap]:
    """Gaps for concepts that have neither a word nor a worded direct hypernym.

    Only concepts without speaker-related attributes are eligible. Languages
    with fewer than `min_words` words overall are excluded: too little
    dictionary coverage makes absence of a word meaningless.
    """
    if min_words < 1:
        raise ValueError("min_words must be >= 1")
    own = [w for w in words if w.language.iso == language.iso]
    if len({(w.concept, w.term) for w in own}) < min_words:
        return []
    worded = {parse_label(w.concept) for w in own}
    gaps = []
    for concept in lattice.sorted_concepts():
        if _speaker_related(concept):
            continue
        if concept in worded:
            continue
        if any(parent in worded for parent in lattice.parents(concept)):
            continue
        gaps.append(Gap(language, render_label(concept), "rule1:wiktionary"))
    return gaps


def infer_rule2(traits: LanguageTraits, lattice: Lattice) -> list[Gap]:
    """Gaps for speaker-related concepts whose attribute the language never marks."""
    gaps = []
    for concept in lattice.sorted_concepts():
        hit = (not traits.marks_speaker_gender and speaker_gender_specified(concept)) or (
            not traits.marks_relative_age and speaker_relative_age_specified(concept)
        )
        if hit:
            gaps.append(Gap(traits.language, render_label(concept), "rule2:wiktionary"))
    return gaps


def _evidence_rank(evidence: str) -> tuple[int, str]:
    if evidence == "speaker":
        rank = 0
    elif evidence.startswith("murdock:"):
        rank = 1
    elif evidence == "rule1:wiktionary":
        rank = 2
    elif evidence == "rule2:wiktionary":
        rank = 3
    else:
        rank = 4
    return rank, evidence


def merge_evidence(words, gap_sets) -> tuple[list[Lexicalization], list[Gap]]:
    """Combine words and gap sets under source precedence.

    Returns deduplicated, sorted (words, gaps) with no pair present on both
    sides.
    """
    all_gaps = [gap for gaps in gap_sets for gap in gaps]
    speaker_gap_pairs = {g.key() for g in all_gaps if g.evidence == "speaker"}

    survivors: dict[tuple[str, str, str], Lexicalization] = {}
    for word in sorted(
        words, key=lambda w: (w.sort_key(), w.provenance is not Provenance.SPEAKER)
    ):
        if word.provenance is not Provenance.SPEAKER and word.key() in speaker_gap_pairs:
            continue
        # Same term from several sources: keep the speaker entry, it carries
        # the usage note and (language, concept, term) must stay unique.
        key = (word.language.iso, word.concept, word.term)
        if key not in survivors or word.provenance is Provenance.SPEAKER:
            survivors[key] = word
    surviving_words = sorted_words(survivors.values())
    word_pairs = {w.key() for w in surviving_words}

    best: dict[tuple[str, str], Gap] = {}
    for gap in sorted(all_gaps, key=lambda g: (g.key(), _evidence_rank(g.evidence))):
        if gap.key() in word_pairs:
            continue
        best.setdefault(gap.key(), gap)
    return surviving_words, sorted_gaps(best.values())
