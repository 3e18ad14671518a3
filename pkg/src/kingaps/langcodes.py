"""ISO 639 language code tables.

Codes are normalized to ISO 639-3. The alias table maps the two-letter codes
that translation templates commonly carry; the name table backs the
human-readable language-name column of the emitted resource. Both tables are
deliberately small: they cover the shipped fixtures plus common languages,
and unknown three-letter codes pass through with the code reused as name.
"""

from __future__ import annotations

import re

from .errors import TsvParseError

# ISO 639-1 -> 639-3 for codes that appear in translation templates.
ISO_ALIASES = {
    "ar": "ara",
    "bn": "ben",
    "cs": "ces",
    "de": "deu",
    "el": "ell",
    "en": "eng",
    "es": "spa",
    "fa": "fas",
    "fi": "fin",
    "fr": "fra",
    "he": "heb",
    "hi": "hin",
    "hu": "hun",
    "id": "ind",
    "it": "ita",
    "ja": "jpn",
    "jv": "jav",
    "kn": "kan",
    "ko": "kor",
    "ml": "mal",
    "mn": "mon",
    "nl": "nld",
    "pl": "pol",
    "pt": "por",
    "ru": "rus",
    "sv": "swe",
    "sw": "swa",
    "ta": "tam",
    "te": "tel",
    "th": "tha",
    "tr": "tur",
    "ur": "urd",
    "vi": "vie",
    "yo": "yor",
    "zh": "zho",
}

ISO_NAMES = {
    "ara": "Arabic",
    "ben": "Bengali",
    "ces": "Czech",
    "deu": "German",
    "ell": "Greek",
    "eng": "English",
    "fas": "Persian",
    "fin": "Finnish",
    "fra": "French",
    "heb": "Hebrew",
    "hin": "Hindi",
    "hun": "Hungarian",
    "ind": "Indonesian",
    "ita": "Italian",
    "jav": "Javanese",
    "jpn": "Japanese",
    "kan": "Kannada",
    "kor": "Korean",
    "mal": "Malayalam",
    "mon": "Mongolian",
    "nld": "Dutch",
    "otr": "Otoro",
    "pol": "Polish",
    "por": "Portuguese",
    "rus": "Russian",
    "spa": "Spanish",
    "swa": "Swahili",
    "swe": "Swedish",
    "tam": "Tamil",
    "tel": "Telugu",
    "tha": "Thai",
    "tur": "Turkish",
    "urd": "Urdu",
    "vie": "Vietnamese",
    "yor": "Yoruba",
    "zho": "Chinese",
}

_ISO3 = re.compile(r"^[a-z]{3}$")


def normalize_iso(code: str) -> str | None:
    """Return the ISO 639-3 form of `code`, or None if it cannot be one."""
    code = code.strip().lower()
    code = ISO_ALIASES.get(code, code)
    return code if _ISO3.fullmatch(code) else None


def require_iso(code: str, path=None, line: int | None = None) -> str:
    iso = normalize_iso(code)
    if iso is None:
        raise TsvParseError(f"not an ISO 639-3 code: {code!r}", path=path, line=line)
    return iso


def language_name(iso: str) -> str:
    return ISO_NAMES.get(iso, iso)
