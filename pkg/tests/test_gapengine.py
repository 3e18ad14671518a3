import random

import pytest

import support
from kingaps.errors import SubdomainMismatchError
from kingaps.gapengine import (
    LanguageTraits,
    TraitSource,
    derive_traits,
    gaps_from_pattern,
    infer_rule1,
    infer_rule2,
    load_traits,
    merge_evidence,
)
from kingaps.ingest import (
    Gap,
    Lexicalization,
    MurdockPattern,
    PatternAssignment,
    Provenance,
    language_from_iso,
)
from kingaps.kinmodel import Subdomain, parse_label, render_label
from kingaps.latticegen import Lattice, build_lattice, generate_all, load_attestations

MON = language_from_iso("mon")
HUN = language_from_iso("hun")
JAV = language_from_iso("jav")


def lattice_from(labels):
    concepts = [parse_label(t) for t in labels]
    return Lattice(concepts[0].subdomain, concepts)


def word(iso, concept, term, provenance=Provenance.WIKTIONARY, note=""):
    return Lexicalization(language_from_iso(iso), concept, term, provenance, note)


def gap_pairs(gaps):
    return {(g.language.iso, g.concept) for g in gaps}


SIX_SIBLINGS = ("Sb", "Br", "Si", "El;Br", "El;Si", "Yo;Sb")


def test_pattern_gaps_are_the_unlexicalized_complement():
    lattice = lattice_from(SIX_SIBLINGS)
    pattern = MurdockPattern("Algonkian", Subdomain.SIBLINGS, frozenset({"El;Br", "El;Si", "Yo;Sb"}))
    gaps = gaps_from_pattern(PatternAssignment(JAV, "Algonkian"), pattern, lattice)
    assert gap_pairs(gaps) == {("jav", "Sb"), ("jav", "Br"), ("jav", "Si")}
    assert all(g.evidence == "murdock:Algonkian" for g in gaps)


def test_pattern_covering_everything_yields_no_gaps():
    lattice = lattice_from(SIX_SIBLINGS)
    pattern = MurdockPattern("Full", Subdomain.SIBLINGS, frozenset(SIX_SIBLINGS))
    assert gaps_from_pattern(PatternAssignment(JAV, "Full"), pattern, lattice) == []


def test_pattern_covering_nothing_gaps_the_whole_lattice():
    lattice = lattice_from(SIX_SIBLINGS)
    pattern = MurdockPattern("None", Subdomain.SIBLINGS, frozenset())
    gaps = gaps_from_pattern(PatternAssignment(JAV, "None"), pattern, lattice)
    assert gap_pairs(gaps) == {("jav", label) for label in SIX_SIBLINGS}


def test_pattern_gaps_partition_the_lattice():
    lattice = lattice_from(SIX_SIBLINGS)
    pattern = MurdockPattern("Algonkian", Subdomain.SIBLINGS, frozenset({"El;Br", "El;Si", "Yo;Sb"}))
    gaps = gaps_from_pattern(PatternAssignment(JAV, "Algonkian"), pattern, lattice)
    gap_labels = {g.concept for g in gaps}
    assert gap_labels | set(pattern.lexicalized) == {render_label(c) for c in lattice.concepts}
    assert gap_labels & set(pattern.lexicalized) == set()


def test_pattern_subdomain_mismatch():
    lattice = lattice_from(("Pa;Pa",))
    pattern = MurdockPattern("Algonkian", Subdomain.SIBLINGS, frozenset({"El;Br"}))
    with pytest.raises(SubdomainMismatchError):
        gaps_from_pattern(PatternAssignment(JAV, "Algonkian"), pattern, lattice)


def test_rule1_spares_direct_hyponyms_of_worded_concepts():
    # Fa;Sb and Pa;Br are unattested, so Fa;Br sits directly under Pa;Sb
    lattice = lattice_from(("Pa;Sb", "Fa;Br", "Fa;El;Br"))
    words = [word("eng", "Pa;Sb", "uncle-or-aunt")]
    gaps = infer_rule1(language_from_iso("eng"), words, lattice, min_words=1)
    assert gap_pairs(gaps) == {("eng", "Fa;El;Br")}
    assert all(g.evidence == "rule1:wiktionary" for g in gaps)


def test_rule1_mongolian_cousin_fixture():
    lattice = Lattice(Subdomain.COUSINS, generate_all(Subdomain.COUSINS))
    words = [
        word("mon", "Pa;Sb;Ch", "үеэл"),
        word("mon", "El;Br", "ах"),
        word("mon", "El;Si", "эгч"),
        word("mon", "Yo;Sb", "дүү"),
    ]
    gaps = gap_pairs(infer_rule1(MON, words, lattice, min_words=4))
    # everything two or more cover edges below the only worded concept
    assert ("mon", "Pa;El;Sb;So") in gaps
    assert ("mon", "Pa;El;Sb;Da") in gaps
    # direct hyponyms of the worded root are spared
    for child in ("Fa;Sb;Ch", "Mo;Sb;Ch", "Pa;El;Sb;Ch", "Pa;Yo;Sb;Ch", "Pa;Br;Ch", "Pa;Si;Ch", "Pa;Sb;So", "Pa;Sb;Da"):
        assert ("mon", child) not in gaps
    # speaker-related concepts are never eligible
    assert not any("ms" in concept or "fs" in concept for _, concept in gaps)
    assert len(gaps) == 81 - 1 - 8


def test_rule1_excludes_languages_below_word_threshold():
    lattice = lattice_from(SIX_SIBLINGS)
    assert infer_rule1(MON, [], lattice, min_words=4) == []
    three_words = [word("mon", "El;Br", "ах"), word("mon", "El;Si", "эгч"), word("mon", "Yo;Sb", "дүү")]
    assert infer_rule1(MON, three_words, lattice, min_words=4) == []
    assert infer_rule1(MON, three_words, lattice, min_words=3) != []


def test_rule1_counts_words_across_subdomains():
    lattice = lattice_from(SIX_SIBLINGS)
    words = [
        word("mon", "Pa;Sb;Ch", "үеэл"),
        word("mon", "Pa;Pa", "өвөг эцэг"),
        word("mon", "Ch;Ch", "ач"),
        word("mon", "Pa;Br", "авга ах"),
    ]
    # four words overall, none in the sibling lattice: the root becomes a gap
    gaps = gap_pairs(infer_rule1(MON, words, lattice, min_words=4))
    assert ("mon", "Sb") in gaps


def test_rule1_matches_transcribed_oracle_on_random_instances():
    rng = random.Random(47)
    for _ in range(200):
        subset = support.random_subset(rng, max_size=40)
        lattice = Lattice(subset[0].subdomain, subset)
        labels = [render_label(c) for c in subset]
        worded = rng.sample(labels, rng.randint(0, min(6, len(labels))))
        words = [word("mon", label, f"w{i}") for i, label in enumerate(worded)]
        min_words = rng.choice((1, 1, 1, 4))
        got = {concept for _, concept in gap_pairs(infer_rule1(MON, words, lattice, min_words))}
        assert got == support.oracle_rule1("mon", words, subset, min_words)


def test_rule1_adding_a_word_never_adds_a_gap():
    rng = random.Random(53)
    for _ in range(60):
        subset = support.random_subset(rng, max_size=30)
        lattice = Lattice(subset[0].subdomain, subset)
        labels = [render_label(c) for c in subset]
        base = [word("mon", label, f"w{i}") for i, label in enumerate(rng.sample(labels, min(4, len(labels))))]
        before = gap_pairs(infer_rule1(MON, base, lattice, min_words=1))
        extra = base + [word("mon", rng.choice(labels), "extra")]
        after = gap_pairs(infer_rule1(MON, extra, lattice, min_words=1))
        assert after <= before


def sibling_fixture_lattice():
    attestations = load_attestations(support.fixture("attested", "siblings.tsv"))
    return build_lattice(Subdomain.SIBLINGS, attestations[Subdomain.SIBLINGS])


def test_rule2_speaker_gender():
    lattice = sibling_fixture_lattice()
    traits = LanguageTraits(HUN, marks_speaker_gender=False, marks_relative_age=True,
                            source=TraitSource.CONFIG)
    gaps = gap_pairs(infer_rule2(traits, lattice))
    assert gaps == {
        ("hun", "El;Br;ms"), ("hun", "El;Br;fs"),
        ("hun", "El;Si;ms"), ("hun", "El;Si;fs"),
    }


def test_rule2_nothing_when_both_attributes_marked():
    lattice = sibling_fixture_lattice()
    traits = LanguageTraits(HUN, True, True, TraitSource.CONFIG)
    assert infer_rule2(traits, lattice) == []


def test_rule2_relative_age():
    lattice = sibling_fixture_lattice()
    traits = LanguageTraits(HUN, marks_speaker_gender=True, marks_relative_age=False,
                            source=TraitSource.CONFIG)
    gaps = {concept for _, concept in gap_pairs(infer_rule2(traits, lattice))}
    assert gaps == {
        "El;Br", "Yo;Br", "El;Si", "Yo;Si", "El;Sb", "Yo;Sb",
        "El;Br;ms", "El;Br;fs", "El;Si;ms", "El;Si;fs",
    }
    assert all(g.evidence == "rule2:wiktionary" for g in infer_rule2(traits, lattice))


def test_derive_traits_reads_attributes_off_words():
    no_marks = derive_traits(MON, [word("mon", "Pa;Sb;Ch", "үеэл")])
    assert not no_marks.marks_speaker_gender and not no_marks.marks_relative_age
    assert no_marks.source is TraitSource.DERIVED_FROM_WORDS

    age = derive_traits(MON, [word("mon", "El;Br", "ах")])
    assert age.marks_relative_age and not age.marks_speaker_gender

    # an age anchored at the parent is not speaker-relative
    deep_age = derive_traits(MON, [word("mon", "Fa;El;Br", "авга ах")])
    assert not deep_age.marks_relative_age

    gendered = derive_traits(language_from_iso("kor"), [word("kor", "El;Br;ms", "형")])
    assert gendered.marks_speaker_gender


def test_load_traits_config(tmp_path):
    path = tmp_path / "traits.tsv"
    path.write_text("# comment\nkor\t1\t1\neng\t0\t0\n", encoding="utf-8")
    traits = load_traits(path)
    assert traits["kor"].marks_speaker_gender and traits["kor"].marks_relative_age
    assert not traits["eng"].marks_speaker_gender
    assert traits["eng"].source is TraitSource.CONFIG


def test_merge_speaker_word_overrides_inferred_gap():
    speaker_word = word("mon", "Pa;El;Sb;So", "үеэл ах", Provenance.SPEAKER, "collocation")
    rule_gap = Gap(MON, "Pa;El;Sb;So", "rule1:wiktionary")
    words, gaps = merge_evidence([speaker_word], [[rule_gap]])
    assert words == [speaker_word]
    assert gaps == []


def test_merge_disjoint_sets_union():
    w = word("mon", "El;Br", "ах")
    g = Gap(MON, "Br", "rule1:wiktionary")
    words, gaps = merge_evidence([w], [[g]])
    assert words == [w] and gaps == [g]


def test_merge_gap_evidence_precedence():
    murdock = Gap(JAV, "Sb", "murdock:Algonkian")
    rule1 = Gap(JAV, "Sb", "rule1:wiktionary")
    rule2 = Gap(JAV, "Sb", "rule2:wiktionary")
    _, gaps = merge_evidence([], [[rule2], [rule1], [murdock]])
    assert gaps == [murdock]
    speaker = Gap(JAV, "Sb", "speaker")
    _, gaps = merge_evidence([], [[murdock], [speaker]])
    assert gaps == [speaker]


def test_merge_speaker_gap_suppresses_wiktionary_word():
    wikt = word("hun", "Br", "fivér")
    speaker_gap = Gap(HUN, "Br", "speaker")
    words, gaps = merge_evidence([wikt], [[speaker_gap]])
    assert words == []
    assert gaps == [speaker_gap]


def test_merge_keeps_speaker_duplicate_of_same_term():
    wikt = word("mon", "Pa;Sb;Ch", "үеэл")
    spoken = word("mon", "Pa;Sb;Ch", "үеэл", Provenance.SPEAKER, "confirmed")
    words, _ = merge_evidence([wikt, spoken], [])
    assert words == [spoken]


def test_merge_never_leaves_a_pair_on_both_sides():
    rng = random.Random(59)
    labels = [render_label(c) for c in generate_all(Subdomain.SIBLINGS)]
    for _ in range(50):
        words = [
            word("mon", rng.choice(labels), f"t{i}",
                 rng.choice((Provenance.WIKTIONARY, Provenance.SPEAKER)))
            for i in range(rng.randint(0, 8))
        ]
        gaps = [
            Gap(MON, rng.choice(labels),
                rng.choice(("speaker", "murdock:X", "rule1:wiktionary", "rule2:wiktionary")))
            for _ in range(rng.randint(0, 8))
        ]
        merged_words, merged_gaps = merge_evidence(words, [gaps])
        assert {w.key() for w in merged_words} & {g.key() for g in merged_gaps} == set()
        # deterministic under input permutation
        rng.shuffle(words)
        rng.shuffle(gaps)
        again_words, again_gaps = merge_evidence(words, [gaps])
        assert (again_words, again_gaps) == (merged_words, merged_gaps)
