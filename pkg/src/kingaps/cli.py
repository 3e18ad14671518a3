"""Command-line pipeline: generate, ingest, infer, emit, validate, evaluate, score.

Every stage reads files produced by earlier stages (or original inputs) and
writes deterministic TSVs, so the whole pipeline is idempotent and re-runnable
from persisted intermediates. A plain key=value config file can supply any
path option; explicit flags win.

Exit status: 0 on success, 1 on data errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import KingapsError, MissingFileError
from .evalkit import (
    display,
    kappa_diagnostics,
    load_count_table,
    murdock_kappa_input,
    reports_from_counts,
    round_half_up,
    score_system,
)
from .gapengine import (
    DEFAULT_MIN_WORDS,
    derive_traits,
    gaps_from_pattern,
    infer_rule1,
    infer_rule2,
    load_traits,
    merge_evidence,
)
from .ingest import (
    extract_wiktionary,
    language_from_iso,
    load_gloss_map,
    load_murdock,
    load_speaker_gold,
    read_gaps_evidence,
    read_words_evidence,
    write_gaps_evidence,
    write_words_evidence,
)
from .latticegen import build_lattice, load_attestations
from .resourceio import (
    CONCEPTS_FILE,
    RELATIONS_FILE,
    build_bundle,
    load_resource,
    validate_resource,
    write_bundle,
)
from .semdist import Lexicon, load_benchmark, score_benchmark
from .tsv import write_rows

_CONFIG_KEYS = {
    "attested",
    "patterns",
    "assignments",
    "dump_dir",
    "gloss_map",
    "speaker_gold",
    "traits",
    "out_dir",
    "min_words",
}


def _load_config(path) -> dict[str, str]:
    if not os.path.isfile(path):
        raise MissingFileError(f"missing config file: {path}")
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise KingapsError(f"config line {lineno} is not key=value: {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise KingapsError(f"unknown config key {key!r} on line {lineno}")
            values[key] = value.strip()
    return values


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    for key, value in _load_config(args.config).items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, int(value) if key == "min_words" else value)


def _require(args: argparse.Namespace, *names: str) -> None:
    """Check that the named options are present and point at existing paths."""
    for name in names:
        value = getattr(args, name, None)
        if value is None:
            raise KingapsError(f"--{name.replace('_', '-')} is required (flag or config)")
    for name in names:
        value = getattr(args, name)
        if name.endswith("_dir") and name != "out_dir":
            if not os.path.isdir(value):
                raise MissingFileError(f"missing directory: {value}")
        elif name != "out_dir" and not os.path.isfile(value):
            raise MissingFileError(f"missing file: {value}")


def _lattices(args) -> tuple[list, dict[str, str]]:
    attestations = load_attestations(args.attested)
    lattices = [
        build_lattice(subdomain, attestations[subdomain])
        for subdomain in sorted(attestations, key=lambda s: s.value)
    ]
    provenance: dict[str, str] = {}
    for attested in attestations.values():
        provenance.update(attested.provenance)
    return lattices, provenance


def _out(args, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


def cmd_gen_lattice(args) -> int:
    _require(args, "attested", "out_dir")
    lattices, provenance = _lattices(args)
    bundle = build_bundle(lattices, [], [], provenance)
    write_bundle(bundle, args.out_dir, files=(CONCEPTS_FILE, RELATIONS_FILE))
    print(f"wrote {len(bundle.concepts)} concepts, {len(bundle.relations)} relations")
    return 0


def cmd_ingest(args) -> int:
    if args.source == "murdock":
        _require(args, "patterns", "assignments", "out_dir")
        patterns, assignments = load_murdock(args.patterns, args.assignments)
        write_rows(
            _out(args, "murdock_patterns.tsv"),
            (
                (p.name, p.subdomain.value, ",".join(sorted(p.lexicalized)))
                for p in sorted(patterns.values(), key=lambda p: p.name)
            ),
        )
        write_rows(
            _out(args, "murdock_assignments.tsv"),
            ((a.language.iso, a.pattern) for a in assignments),
        )
        print(f"loaded {len(patterns)} patterns, {len(assignments)} assignments")
    elif args.source == "wiktionary":
        _require(args, "dump_dir", "gloss_map", "out_dir")
        words, report = extract_wiktionary(args.dump_dir, load_gloss_map(args.gloss_map))
        write_words_evidence(_out(args, "words_wiktionary.tsv"), words)
        write_rows(_out(args, "wiktionary_skips.tsv"), report.rows())
        print(f"extracted {len(words)} lexicalizations from {report.pages} pages")
    else:
        _require(args, "speaker_gold", "out_dir")
        words, gaps = load_speaker_gold(args.speaker_gold)
        write_words_evidence(_out(args, "words_speaker.tsv"), words)
        write_gaps_evidence(_out(args, "gaps_speaker.tsv"), gaps)
        print(f"loaded {len(words)} speaker words, {len(gaps)} speaker gaps")
    return 0


def cmd_infer_gaps(args) -> int:
    _require(args, "attested", "out_dir")
    lattices, _ = _lattices(args)
    min_words = args.min_words if args.min_words is not None else DEFAULT_MIN_WORDS

    wikt_words = []
    if args.wiktionary_words:
        _require(args, "wiktionary_words")
        wikt_words = read_words_evidence(args.wiktionary_words)
    speaker_words, speaker_gaps = [], []
    if args.speaker_words:
        _require(args, "speaker_words")
        speaker_words = read_words_evidence(args.speaker_words)
    if args.speaker_gaps:
        _require(args, "speaker_gaps")
        speaker_gaps = read_gaps_evidence(args.speaker_gaps)

    traits_config = {}
    if args.traits:
        _require(args, "traits")
        traits_config = load_traits(args.traits)

    rule_gaps = []
    by_language: dict[str, list] = {}
    for word in wikt_words:
        by_language.setdefault(word.language.iso, []).append(word)
    for iso in sorted(by_language):
        own = by_language[iso]
        if len({(w.concept, w.term) for w in own}) < min_words:
            continue
        language = language_from_iso(iso)
        traits = traits_config.get(iso) or derive_traits(language, own)
        for lattice in lattices:
            rule_gaps.extend(infer_rule1(language, own, lattice, min_words))
            rule_gaps.extend(infer_rule2(traits, lattice))

    pattern_gaps = []
    if args.patterns or args.assignments:
        _require(args, "patterns", "assignments")
        patterns, assignments = load_murdock(args.patterns, args.assignments)
        by_subdomain = {lattice.subdomain: lattice for lattice in lattices}
        for assignment in assignments:
            pattern = patterns[assignment.pattern]
            lattice = by_subdomain.get(pattern.subdomain)
            if lattice is not None:
                pattern_gaps.extend(gaps_from_pattern(assignment, pattern, lattice))

    _, wikt_only_gaps = merge_evidence(wikt_words, [rule_gaps])
    write_gaps_evidence(_out(args, "gaps_wiktionary.tsv"), wikt_only_gaps)

    merged_words, merged_gaps = merge_evidence(
        wikt_words + speaker_words, [speaker_gaps, pattern_gaps, rule_gaps]
    )
    write_words_evidence(_out(args, "words_merged.tsv"), merged_words)
    write_gaps_evidence(_out(args, "gaps_merged.tsv"), merged_gaps)
    print(
        f"inferred {len(wikt_only_gaps)} dictionary-based gaps; "
        f"merged result: {len(merged_words)} words, {len(merged_gaps)} gaps"
    )
    return 0


def cmd_emit(args) -> int:
    _require(args, "attested", "words", "gaps", "out_dir")
    lattices, provenance = _lattices(args)
    words = read_words_evidence(args.words)
    gaps = read_gaps_evidence(args.gaps)
    bundle = build_bundle(lattices, words, gaps, provenance)
    write_bundle(bundle, args.out_dir)
    print(
        f"emitted {len(bundle.concepts)} concepts, {len(bundle.relations)} relations, "
        f"{len(bundle.words)} words, {len(bundle.gaps)} gaps"
    )
    return 0


def cmd_validate(args) -> int:
    bundle = load_resource(args.resource_dir, strict=False)
    report = validate_resource(bundle)
    for violation in report.violations:
        print(f"{violation.kind}\t{violation.location}\t{violation.message}")
    if report.ok:
        print("resource is valid")
        return 0
    print(f"{len(report.violations)} violation(s) found", file=sys.stderr)
    return 1


def _write_prf_report(rows, out_path=None) -> None:
    header = (
        "group_kind", "group_key",
        "words_p", "words_r", "words_f1",
        "gaps_p", "gaps_r", "gaps_f1",
    )
    by_group: dict[tuple[str, str], dict[str, object]] = {}
    for row in rows:
        by_group.setdefault((row.group_kind, row.group_key), {})[row.item_kind] = row
    kind_order = {"language": 0, "subdomain": 1, "total": 2}
    order = sorted(by_group, key=lambda k: (kind_order.get(k[0], 3), k[1]))
    lines = []
    for key in order:
        cells = list(key)
        for kind in ("word", "gap"):
            row = by_group[key].get(kind)
            if row is None:
                cells += ["n/a", "n/a", "n/a"]
            else:
                cells += [row.display_precision, row.display_recall, row.display_f1]
        lines.append(cells)
    if out_path:
        write_rows(out_path, lines, header=header)
    else:
        print("\t".join(header))
        for cells in lines:
            print("\t".join(cells))


def cmd_evaluate(args) -> int:
    if args.counts:
        _require(args, "counts")
        rows = reports_from_counts(load_count_table(args.counts))
        _write_prf_report(rows, args.out)
        return 0

    _require(args, "words", "gaps", "gold")
    system_words = read_words_evidence(args.words)
    system_gaps = read_gaps_evidence(args.gaps)
    gold_words, gold_gaps = load_speaker_gold(args.gold)
    rows = score_system(system_words, system_gaps, gold_words, gold_gaps)
    _write_prf_report(rows, args.out)

    if args.patterns or args.assignments:
        _require(args, "patterns", "assignments", "attested")
        patterns, assignments = load_murdock(args.patterns, args.assignments)
        lattices, _ = _lattices(args)
        # Agreement against pattern evidence is only meaningful for gaps that
        # were not themselves derived from that evidence.
        own_gaps = [g for g in system_gaps if not g.evidence.startswith("murdock:")]
        cells = murdock_kappa_input(own_gaps, patterns, assignments, lattices)
        if cells:
            report = kappa_diagnostics(cells)
            print(f"kappa\t{round_half_up(report.kappa, 2):.2f}\tcells\t{report.n}")
        else:
            print("kappa\tn/a\tcells\t0")
    return 0


def cmd_mt_score(args) -> int:
    _require(args, "benchmark", "words", "gaps", "attested")
    sentences = load_benchmark(args.benchmark)
    lexicon = Lexicon(read_words_evidence(args.words))
    gaps = read_gaps_evidence(args.gaps)
    lattices, _ = _lattices(args)
    reports, scores = score_benchmark(sentences, lattices, lexicon, gaps)

    header = ("language_pair", "gaps", "sem_dist_gaps", "sem_dist_all", "scored", "unmatched")
    lines = [
        (
            r.language_pair,
            str(r.gap_count),
            display(r.avg_dist_gaps, 2),
            display(r.avg_dist_all, 2),
            str(r.scored),
            str(r.unmatched_count),
        )
        for r in reports
    ]
    if args.out:
        write_rows(args.out, lines, header=header)
    else:
        print("\t".join(header))
        for cells in lines:
            print("\t".join(cells))

    if args.details:
        write_rows(
            args.details,
            (
                (
                    s.sentence.id,
                    s.sentence.target_language.iso,
                    s.matched_term or "",
                    ",".join(s.candidates),
                    "" if s.distance is None else str(s.distance),
                    "1" if s.is_gap else "0",
                    ",".join(s.flags),
                )
                for s in scores
            ),
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kingaps",
        description="Kinship concept hierarchy, lexical gap inference, and evaluation toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value config file; flags override it")

    p = sub.add_parser("gen-lattice", help="emit concepts.tsv and relations.tsv for an attested inventory")
    common(p)
    p.add_argument("--attested", help="attestation TSV: subdomain, concept label, provenance")
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=cmd_gen_lattice)

    p = sub.add_parser("ingest", help="normalize one evidence source")
    common(p)
    p.add_argument("source", choices=("murdock", "wiktionary", "speakers"))
    p.add_argument("--patterns", help="pattern definitions TSV")
    p.add_argument("--assignments", help="language-to-pattern assignments TSV")
    p.add_argument("--dump-dir", dest="dump_dir", help="directory of .wiki page files")
    p.add_argument("--gloss-map", dest="gloss_map", help="gloss-to-concept TSV")
    p.add_argument("--speaker-gold", dest="speaker_gold", help="speaker gold TSV")
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("infer-gaps", help="apply gap inference rules and merge evidence")
    common(p)
    p.add_argument("--attested")
    p.add_argument("--wiktionary-words", dest="wiktionary_words")
    p.add_argument("--speaker-words", dest="speaker_words")
    p.add_argument("--speaker-gaps", dest="speaker_gaps")
    p.add_argument("--patterns")
    p.add_argument("--assignments")
    p.add_argument("--traits", help="traits config TSV: iso, marks_speaker_gender, marks_relative_age")
    p.add_argument("--min-words", dest="min_words", type=int)
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=cmd_infer_gaps)

    p = sub.add_parser("emit", help="write the four-file resource")
    common(p)
    p.add_argument("--attested")
    p.add_argument("--words", help="merged word evidence TSV")
    p.add_argument("--gaps", help="merged gap evidence TSV")
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("validate", help="check a resource directory's invariants")
    common(p)
    p.add_argument("resource_dir")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="P/R/F1 against speaker gold, or from a counts table")
    common(p)
    p.add_argument("--counts", help="aggregate counts TSV (language, wikt words, inferred gaps, expert words, expert gaps, word errors, gap errors)")
    p.add_argument("--words", help="system word evidence TSV")
    p.add_argument("--gaps", help="system gap evidence TSV")
    p.add_argument("--gold", help="speaker gold TSV")
    p.add_argument("--patterns")
    p.add_argument("--assignments")
    p.add_argument("--attested")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("mt-score", help="hop-distance scoring of translated benchmark sentences")
    common(p)
    p.add_argument("--benchmark", help="benchmark TSV: id, source text, gold concept, target iso, translation")
    p.add_argument("--words", help="lexicon word evidence TSV")
    p.add_argument("--gaps", help="gap evidence TSV")
    p.add_argument("--attested")
    p.add_argument("--out")
    p.add_argument("--details", help="write per-sentence scores here")
    p.set_defaults(func=cmd_mt_score)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except KingapsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
