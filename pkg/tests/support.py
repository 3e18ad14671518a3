"""Shared test utilities: independent oracles and a pipeline driver.

Oracles deliberately take a different route than the library: numpy boolean
matrices and networkx graph algorithms instead of the library's hand-rolled
set arithmetic, so the two routes only agree when both are right.
"""

from __future__ import annotations

import os
import random

import networkx as nx
import numpy as np

from kingaps.kinmodel import (
    Concept,
    Gender,
    Relation,
    RelativeAge,
    Subdomain,
    render_label,
    subsumes,
)
from kingaps.latticegen import Lattice, generate_all

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")


def fixture(*parts: str) -> str:
    return os.path.join(FIXTURES, *parts)


def strict_order_matrix(concepts: list[Concept]) -> np.ndarray:
    n = len(concepts)
    lt = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(concepts):
        for j, b in enumerate(concepts):
            if i != j and subsumes(a, b):
                lt[i, j] = True
    return lt


def oracle_cover_matrix(lt: np.ndarray) -> np.ndarray:
    """Transitive reduction via boolean matrix multiplication."""
    reachable_in_two = (lt.astype(int) @ lt.astype(int)) > 0
    return lt & ~reachable_in_two


def oracle_cover_edges(concepts: list[Concept]) -> set[tuple[str, str]]:
    """Transitive reduction computed by networkx over the strict order."""
    g = nx.DiGraph()
    labels = [render_label(c) for c in concepts]
    g.add_nodes_from(labels)
    lt = strict_order_matrix(concepts)
    for i in range(len(concepts)):
        for j in range(len(concepts)):
            if lt[i, j]:
                g.add_edge(labels[i], labels[j])
    return set(nx.transitive_reduction(g).edges())


def lattice_edge_labels(lattice: Lattice) -> set[tuple[str, str]]:
    return {(render_label(a), render_label(b)) for a, b in lattice.edges}


def random_subset(rng: random.Random, subdomain: Subdomain | None = None, max_size: int = 40) -> list[Concept]:
    subdomain = subdomain or rng.choice(list(Subdomain))
    pool = generate_all(subdomain)
    size = rng.randint(1, min(max_size, len(pool)))
    return sorted(rng.sample(pool, size), key=render_label)


def oracle_lcs_distance(a: Concept, b: Concept, lattice: Lattice) -> int | None:
    """Least-common-subsumer hop distance via networkx shortest paths."""
    g = nx.DiGraph()
    g.add_nodes_from(lattice.concepts)
    g.add_edges_from((hyponym, hypernym) for hypernym, hyponym in lattice.edges)
    up_a = nx.single_source_shortest_path_length(g, a)
    up_b = nx.single_source_shortest_path_length(g, b)
    common = set(up_a) & set(up_b)
    if not common:
        return None
    return min(up_a[s] + up_b[s] for s in common)


def _rule1_eligible(concept: Concept) -> bool:
    if concept.speaker_gender is not Gender.UNSPECIFIED:
        return False
    first = concept.steps[0]
    return not (first.relation is Relation.SIBLING and first.age is not RelativeAge.UNSPECIFIED)


def oracle_rule1(language_iso: str, words, concepts: list[Concept], min_words: int) -> set[str]:
    """Direct transcription of the first inference rule.

    Parents are recomputed from scratch: p is a parent of c iff p strictly
    subsumes c with no attested concept strictly in between.
    """
    own = [w for w in words if w.language.iso == language_iso]
    if len({(w.concept, w.term) for w in own}) < min_words:
        return set()
    worded = {w.concept for w in own}
    lt = strict_order_matrix(concepts)
    cover = oracle_cover_matrix(lt)
    labels = [render_label(c) for c in concepts]
    gaps = set()
    for j, concept in enumerate(concepts):
        if not _rule1_eligible(concept):
            continue
        if labels[j] in worded:
            continue
        parent_labels = {labels[i] for i in range(len(concepts)) if cover[i, j]}
        if parent_labels & worded:
            continue
        gaps.add(labels[j])
    return gaps


def run_pipeline(out_dir: str, resource_dir: str | None = None) -> str:
    """Drive every stage of the command-line pipeline over the shipped fixtures."""
    from kingaps.cli import main

    resource_dir = resource_dir or os.path.join(out_dir, "resource")
    steps = [
        ["ingest", "wiktionary", "--dump-dir", fixture("wiktionary_dump"),
         "--gloss-map", fixture("glossmap.tsv"), "--out-dir", out_dir],
        ["ingest", "murdock", "--patterns", fixture("murdock", "sibling_patterns.tsv"),
         "--assignments", fixture("murdock", "assignments.tsv"), "--out-dir", out_dir],
        ["ingest", "speakers", "--speaker-gold", fixture("speakers", "gold.tsv"),
         "--out-dir", out_dir],
        ["infer-gaps", "--attested", fixture("attested", "kinship.tsv"),
         "--wiktionary-words", os.path.join(out_dir, "words_wiktionary.tsv"),
         "--speaker-words", os.path.join(out_dir, "words_speaker.tsv"),
         "--speaker-gaps", os.path.join(out_dir, "gaps_speaker.tsv"),
         "--patterns", fixture("murdock", "sibling_patterns.tsv"),
         "--assignments", fixture("murdock", "assignments.tsv"),
         "--traits", fixture("traits.tsv"),
         "--out-dir", out_dir],
        ["emit", "--attested", fixture("attested", "kinship.tsv"),
         "--words", os.path.join(out_dir, "words_merged.tsv"),
         "--gaps", os.path.join(out_dir, "gaps_merged.tsv"),
         "--out-dir", resource_dir],
    ]
    for argv in steps:
        code = main(argv)
        assert code == 0, f"pipeline step failed: {argv}"
    return resource_dir


def read_tree(root: str) -> dict[str, bytes]:
    """All files under `root` keyed by relative path, for byte comparisons."""
    out = {}
    for directory, _, names in os.walk(root):
        for name in names:
            path = os.path.join(directory, name)
            with open(path, "rb") as handle:
                out[os.path.relpath(path, root)] = handle.read()
    return out
