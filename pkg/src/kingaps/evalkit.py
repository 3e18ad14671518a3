"""Precision/recall/F1 scoring against speaker gold, and Cohen's Kappa.

Metric display follows the resource's reporting conventions: percentages
rounded half-up to one decimal, with the displayed F1 recomputed from the
displayed (rounded) precision and recall. Raw values are kept alongside.
A zero denominator yields None, displayed as "n/a", never as 0.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .errors import EmptyInputError, MissingGoldError
from .kinmodel import parse_label, render_label
from .tsv import read_rows


def round_half_up(value: float, digits: int = 1) -> float:
    quantum = Decimal(1).scaleb(-digits)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def display(value: float | None, digits: int = 1) -> str:
    if value is None:
        return "n/a"
    return f"{round_half_up(value, digits):.{digits}f}"


@dataclass(frozen=True)
class PrfRow:
    """One metric row: a group (language / subdomain / total) and an item kind."""

    group_kind: str
    group_key: str
    item_kind: str
    tp: int
    fp: int
    fn: int
    precision: float | None
    recall: float | None
    f1: float | None

    @property
    def display_precision(self) -> str:
        return display(self.precision)

    @property
    def display_recall(self) -> str:
        return display(self.recall)

    @property
    def display_f1(self) -> str:
        if self.precision is None or self.recall is None:
            return "n/a"
        p = round_half_up(self.precision)
        r = round_half_up(self.recall)
        if p + r == 0:
            return display(0.0)
        return display(2 * p * r / (p + r))


def prf(group_kind: str, group_key: str, item_kind: str, tp: int, fp: int, fn: int) -> PrfRow:
    """Build a metric row; undefined metrics (zero denominator) become None."""
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    precision = 100.0 * tp / (tp + fp) if tp + fp else None
    recall = 100.0 * tp / (tp + fn) if tp + fn else None
    f1 = None
    if precision is not None and recall is not None and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    elif precision is not None and recall is not None:
        f1 = 0.0
    return PrfRow(group_kind, group_key, item_kind, tp, fp, fn, precision, recall, f1)


@dataclass(frozen=True)
class JudgedItem:
    """One claimed or gold item joined across system output and speaker gold."""

    iso: str
    concept: str
    kind: str  # "word" | "gap"
    system_claimed: bool
    gold_accepts: bool


def _norm_term(term: str) -> str:
    return unicodedata.normalize("NFC", term)


def judge_items(system_words, system_gaps, gold_words, gold_gaps, languages=None) -> list[JudgedItem]:
    """Join system claims with gold; unclaimed gold items become misses.

    Words are judged per (language, concept, term); a gold usage note never
    demotes a word. Gaps are judged per (language, concept).
    """
    gold_isos = {w.language.iso for w in gold_words} | {g.language.iso for g in gold_gaps}
    if languages is None:
        scored = gold_isos
    else:
        scored = set(languages)
        missing = scored - gold_isos
        if missing:
            raise MissingGoldError(
                "no gold data for: " + ", ".join(sorted(missing))
            )

    gold_word_keys = {
        (w.language.iso, w.concept, _norm_term(w.term)) for w in gold_words
    }
    gold_gap_keys = {(g.language.iso, g.concept) for g in gold_gaps}

    items: list[JudgedItem] = []
    claimed_words = set()
    for word in system_words:
        if word.language.iso not in scored:
            continue
        key = (word.language.iso, word.concept, _norm_term(word.term))
        claimed_words.add(key)
        items.append(
            JudgedItem(word.language.iso, word.concept, "word", True, key in gold_word_keys)
        )
    for key in sorted(gold_word_keys - claimed_words):
        if key[0] in scored:
            items.append(JudgedItem(key[0], key[1], "word", False, True))

    claimed_gaps = set()
    for gap in system_gaps:
        if gap.language.iso not in scored:
            continue
        key = (gap.language.iso, gap.concept)
        claimed_gaps.add(key)
        items.append(JudgedItem(gap.language.iso, gap.concept, "gap", True, key in gold_gap_keys))
    for key in sorted(gold_gap_keys - claimed_gaps):
        if key[0] in scored:
            items.append(JudgedItem(key[0], key[1], "gap", False, True))
    return items


def _tally(items) -> tuple[int, int, int]:
    tp = sum(1 for i in items if i.system_claimed and i.gold_accepts)
    fp = sum(1 for i in items if i.system_claimed and not i.gold_accepts)
    fn = sum(1 for i in items if not i.system_claimed and i.gold_accepts)
    return tp, fp, fn


def score_system(system_words, system_gaps, gold_words, gold_gaps, languages=None) -> list[PrfRow]:
    """Per-language, per-subdomain, and total word/gap metric rows."""
    items = judge_items(system_words, system_gaps, gold_words, gold_gaps, languages)
    rows: list[PrfRow] = []
    for kind in ("word", "gap"):
        of_kind = [i for i in items if i.kind == kind]
        for iso in sorted({i.iso for i in of_kind}):
            rows.append(prf("language", iso, kind, *_tally([i for i in of_kind if i.iso == iso])))
        by_subdomain: dict[str, list[JudgedItem]] = {}
        for item in of_kind:
            by_subdomain.setdefault(parse_label(item.concept).subdomain.value, []).append(item)
        for subdomain in sorted(by_subdomain):
            rows.append(prf("subdomain", subdomain, kind, *_tally(by_subdomain[subdomain])))
        rows.append(prf("total", "total", kind, *_tally(of_kind)))
    return rows


def score_bundle(bundle, gold_words, gold_gaps, languages=None) -> list[PrfRow]:
    """Score a loaded resource bundle's word and gap rows against gold."""
    from .ingest import Gap, Lexicalization, Provenance, language_from_iso

    words = [
        Lexicalization(language_from_iso(r.iso), r.label, r.term, Provenance(r.provenance))
        for r in bundle.words
    ]
    gaps = [Gap(language_from_iso(r.iso), r.label, r.evidence) for r in bundle.gaps]
    return score_system(words, gaps, gold_words, gold_gaps, languages)


@dataclass(frozen=True)
class CountRow:
    """Aggregate evaluation counts for one language.

    `word_errors` / `gap_errors` are the claimed items the speakers rejected;
    `expert_words` / `expert_gaps` are the items speakers added that the
    system had missed.
    """

    language: str
    wikt_words: int
    inferred_gaps: int
    expert_words: int
    expert_gaps: int
    word_errors: int
    gap_errors: int


def load_count_table(path) -> list[CountRow]:
    rows = []
    for _, fields in read_rows(path, 7):
        rows.append(CountRow(fields[0], *(int(v) for v in fields[1:])))
    return rows


def reports_from_counts(counts: list[CountRow]) -> list[PrfRow]:
    """Per-language and total P/R/F1 rows from aggregate counts."""
    rows: list[PrfRow] = []
    for count in counts:
        word_tp = count.wikt_words - count.word_errors
        gap_tp = count.inferred_gaps - count.gap_errors
        rows.append(prf("language", count.language, "word", word_tp, count.word_errors, count.expert_words))
        rows.append(prf("language", count.language, "gap", gap_tp, count.gap_errors, count.expert_gaps))
    total_word_tp = sum(c.wikt_words - c.word_errors for c in counts)
    total_gap_tp = sum(c.inferred_gaps - c.gap_errors for c in counts)
    rows.append(
        prf(
            "total", "total", "word",
            total_word_tp,
            sum(c.word_errors for c in counts),
            sum(c.expert_words for c in counts),
        )
    )
    rows.append(
        prf(
            "total", "total", "gap",
            total_gap_tp,
            sum(c.gap_errors for c in counts),
            sum(c.expert_gaps for c in counts),
        )
    )
    return rows


@dataclass(frozen=True)
class KappaReport:
    kappa: float
    n: int
    both_yes: int
    first_only: int
    second_only: int
    both_no: int
    first_constant: bool
    second_constant: bool


def kappa_diagnostics(pairs) -> KappaReport:
    """Cohen's Kappa over (rater1, rater2) boolean pairs, with marginals."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyInputError("kappa needs at least one rating pair")
    both_yes = sum(1 for a, b in pairs if a and b)
    first_only = sum(1 for a, b in pairs if a and not b)
    second_only = sum(1 for a, b in pairs if not a and b)
    both_no = sum(1 for a, b in pairs if not a and not b)
    n = len(pairs)
    observed = (both_yes + both_no) / n
    first_yes = (both_yes + first_only) / n
    second_yes = (both_yes + second_only) / n
    expected = first_yes * second_yes + (1 - first_yes) * (1 - second_yes)
    if expected == 1.0:
        kappa = 1.0
    else:
        kappa = (observed - expected) / (1 - expected)
    return KappaReport(
        kappa,
        n,
        both_yes,
        first_only,
        second_only,
        both_no,
        first_constant=first_yes in (0.0, 1.0),
        second_constant=second_yes in (0.0, 1.0),
    )


def cohen_kappa(pairs) -> float:
    return kappa_diagnostics(pairs).kappa


def murdock_kappa_input(our_gaps, patterns, assignments, lattices) -> list[tuple[bool, bool]]:
    """Binary gap/no-gap pairs over the cells covered by both sources.

    Cells are (language, concept) for languages holding a pattern assignment
    and appearing in our gap data, over the concepts of the pattern's
    subdomain lattice. Rater one is our data, rater two the pattern.
    """
    our_pairs = {(g.language.iso, g.concept) for g in our_gaps}
    our_languages = {iso for iso, _ in our_pairs}
    by_subdomain = {lattice.subdomain: lattice for lattice in lattices}
    cells: list[tuple[bool, bool]] = []
    for assignment in sorted(assignments):
        if assignment.language.iso not in our_languages:
            continue
        pattern = patterns[assignment.pattern]
        lattice = by_subdomain.get(pattern.subdomain)
        if lattice is None:
            continue
        for concept in lattice.sorted_concepts():
            label = render_label(concept)
            ours = (assignment.language.iso, label) in our_pairs
            theirs = label not in pattern.lexicalized
            cells.append((ours, theirs))
    return cells
