"""Core domain model: kin-path concepts, their labels, and the generalization order.

A concept is a fixed-shape path of kin steps (parent / child / sibling) plus
the speaker's gender. Each step carries the kin's gender, and sibling steps
additionally carry the kin's age relative to the step's anchor person. The
label grammar below is the wire format used by every TSV file, so rendering
must stay bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import MalformedLabelError, SubdomainMismatchError


class Gender(Enum):
    MALE = "M"
    FEMALE = "F"
    UNSPECIFIED = "U"


class RelativeAge(Enum):
    ELDER = "El"
    YOUNGER = "Yo"
    UNSPECIFIED = "U"


class Relation(Enum):
    PARENT = "parent"
    CHILD = "child"
    SIBLING = "sibling"


class Subdomain(Enum):
    GRANDPARENTS = "grandparents"
    GRANDCHILDREN = "grandchildren"
    SIBLINGS = "siblings"
    UNCLES_AUNTS = "uncles_aunts"
    NEPHEWS_NIECES = "nephews_nieces"
    COUSINS = "cousins"

    @property
    def skeleton(self) -> tuple[Relation, ...]:
        return _SKELETONS[self]


_SKELETONS: dict[Subdomain, tuple[Relation, ...]] = {
    Subdomain.GRANDPARENTS: (Relation.PARENT, Relation.PARENT),
    Subdomain.GRANDCHILDREN: (Relation.CHILD, Relation.CHILD),
    Subdomain.SIBLINGS: (Relation.SIBLING,),
    Subdomain.UNCLES_AUNTS: (Relation.PARENT, Relation.SIBLING),
    Subdomain.NEPHEWS_NIECES: (Relation.SIBLING, Relation.CHILD),
    Subdomain.COUSINS: (Relation.PARENT, Relation.SIBLING, Relation.CHILD),
}

_SKELETON_TO_SUBDOMAIN = {skel: sub for sub, skel in _SKELETONS.items()}


def subdomain_from_name(name: str) -> Subdomain:
    try:
        return Subdomain(name)
    except ValueError:
        raise MalformedLabelError(f"unknown subdomain name: {name!r}") from None


@dataclass(frozen=True)
class KinStep:
    """One step along a kin path.

    `age` is the kin's age relative to the step's anchor (the person reached
    by the previous step, or the speaker for the first step) and is only
    meaningful on sibling steps.
    """

    relation: Relation
    kin_gender: Gender = Gender.UNSPECIFIED
    age: RelativeAge = RelativeAge.UNSPECIFIED

    def __post_init__(self):
        if self.age is not RelativeAge.UNSPECIFIED and self.relation is not Relation.SIBLING:
            raise MalformedLabelError(
                f"relative age only applies to sibling steps, not {self.relation.value}"
            )


@dataclass(frozen=True)
class Concept:
    """An interlingual kin concept: a step path plus the speaker's gender."""

    subdomain: Subdomain
    steps: tuple[KinStep, ...]
    speaker_gender: Gender = Gender.UNSPECIFIED

    def __post_init__(self):
        shape = tuple(step.relation for step in self.steps)
        if shape != self.subdomain.skeleton:
            raise MalformedLabelError(
                f"step shape {shape} does not match the "
                f"{self.subdomain.value} skeleton {self.subdomain.skeleton}"
            )

    def __lt__(self, other: "Concept") -> bool:
        return (self.subdomain.value, render_label(self)) < (
            other.subdomain.value,
            render_label(other),
        )


# Kin tokens by (relation, gender); the label grammar's terminal alphabet.
_KIN_TOKENS = {
    (Relation.PARENT, Gender.MALE): "Fa",
    (Relation.PARENT, Gender.FEMALE): "Mo",
    (Relation.PARENT, Gender.UNSPECIFIED): "Pa",
    (Relation.CHILD, Gender.MALE): "So",
    (Relation.CHILD, Gender.FEMALE): "Da",
    (Relation.CHILD, Gender.UNSPECIFIED): "Ch",
    (Relation.SIBLING, Gender.MALE): "Br",
    (Relation.SIBLING, Gender.FEMALE): "Si",
    (Relation.SIBLING, Gender.UNSPECIFIED): "Sb",
}
_TOKEN_TO_KIN = {token: key for key, token in _KIN_TOKENS.items()}
_AGE_TOKENS = {RelativeAge.ELDER: "El", RelativeAge.YOUNGER: "Yo"}
_TOKEN_TO_AGE = {token: age for age, token in _AGE_TOKENS.items()}
_SPEAKER_TOKENS = {Gender.MALE: "ms", Gender.FEMALE: "fs"}
_TOKEN_TO_SPEAKER = {token: g for g, token in _SPEAKER_TOKENS.items()}


def render_label(concept: Concept) -> str:
    """Render the canonical label: per-step [age];kin tokens, speaker token last."""
    tokens: list[str] = []
    for step in concept.steps:
        if step.age is not RelativeAge.UNSPECIFIED:
            tokens.append(_AGE_TOKENS[step.age])
        tokens.append(_KIN_TOKENS[(step.relation, step.kin_gender)])
    if concept.speaker_gender is not Gender.UNSPECIFIED:
        tokens.append(_SPEAKER_TOKENS[concept.speaker_gender])
    return ";".join(tokens)


@lru_cache(maxsize=None)
def parse_label(text: str) -> Concept:
    """Parse a label into the unique concept it denotes.

    Tolerates surrounding whitespace per token; everything else is strict.
    """
    if not text or not text.strip():
        raise MalformedLabelError("empty label")
    tokens = [token.strip() for token in text.strip().split(";")]
    if any(not token for token in tokens):
        raise MalformedLabelError(f"empty token in label {text!r}")

    speaker = Gender.UNSPECIFIED
    if tokens and tokens[-1] in _TOKEN_TO_SPEAKER:
        speaker = _TOKEN_TO_SPEAKER[tokens.pop()]

    steps: list[KinStep] = []
    pending_age: RelativeAge | None = None
    for token in tokens:
        if token in _TOKEN_TO_AGE:
            if pending_age is not None:
                raise MalformedLabelError(f"two age tokens in a row in {text!r}")
            pending_age = _TOKEN_TO_AGE[token]
        elif token in _TOKEN_TO_KIN:
            relation, gender = _TOKEN_TO_KIN[token]
            if pending_age is not None and relation is not Relation.SIBLING:
                raise MalformedLabelError(
                    f"age token before non-sibling token {token!r} in {text!r}"
                )
            steps.append(
                KinStep(relation, gender, pending_age or RelativeAge.UNSPECIFIED)
            )
            pending_age = None
        else:
            raise MalformedLabelError(f"unknown token {token!r} in {text!r}")
    if pending_age is not None:
        raise MalformedLabelError(f"dangling age token at end of {text!r}")
    if not steps:
        raise MalformedLabelError(f"label {text!r} has no kin steps")

    shape = tuple(step.relation for step in steps)
    subdomain = _SKELETON_TO_SUBDOMAIN.get(shape)
    if subdomain is None:
        raise MalformedLabelError(
            f"step shape of {text!r} matches no subdomain skeleton"
        )
    return Concept(subdomain, tuple(steps), speaker)


def attribute_vector(concept: Concept) -> tuple:
    """Flatten a concept into its comparable attribute positions.

    Order: per step (kin gender, then age on sibling steps), then speaker
    gender. Positions align iff the subdomains match.
    """
    values: list = []
    for step in concept.steps:
        values.append(step.kin_gender)
        if step.relation is Relation.SIBLING:
            values.append(step.age)
    values.append(concept.speaker_gender)
    return tuple(values)


_UNSPECIFIED = (Gender.UNSPECIFIED, RelativeAge.UNSPECIFIED)


def subsumes(general: Concept, specific: Concept) -> bool:
    """True iff `general` is attribute-wise at least as general as `specific`."""
    if general.subdomain is not specific.subdomain:
        raise SubdomainMismatchError(
            f"cannot compare {general.subdomain.value} with {specific.subdomain.value}"
        )
    for mine, theirs in zip(attribute_vector(general), attribute_vector(specific)):
        if mine is not theirs and mine not in _UNSPECIFIED:
            return False
    return True


def speaker_gender_specified(concept: Concept) -> bool:
    return concept.speaker_gender is not Gender.UNSPECIFIED


def speaker_relative_age_specified(concept: Concept) -> bool:
    """True iff the concept carries an age measured against the speaker.

    That is the age on a first-position sibling step (sibling paths are
    anchored at the speaker); ages deeper in the path are anchored at the
    preceding kin, not the speaker.
    """
    first = concept.steps[0]
    return first.relation is Relation.SIBLING and first.age is not RelativeAge.UNSPECIFIED
