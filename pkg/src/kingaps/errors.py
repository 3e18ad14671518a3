"""Exception types shared across the toolkit."""


class KingapsError(Exception):
    """Base class for all toolkit errors."""


class MalformedLabelError(KingapsError):
    """A concept label does not conform to the label grammar."""


class SubdomainMismatchError(KingapsError):
    """Two concepts from different subdomains were combined."""


class UnknownLabelError(KingapsError):
    """A label refers to a concept outside the expected concept set."""


class TsvParseError(KingapsError):
    """A TSV input file is malformed.

    Carries the offending path and 1-based line number when known.
    """

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where = f" [{where}]"
        super().__init__(f"{message}{where}")


class MissingFileError(KingapsError):
    """A required input file is absent."""


class UnreadableFileError(KingapsError):
    """A dump page file could not be read or decoded."""


class DanglingPatternRefError(KingapsError):
    """A language is assigned to a pattern name that was never defined."""


class DuplicatePatternError(KingapsError):
    """The same pattern name is defined twice."""


class WordGapConflictError(KingapsError):
    """One source marks the same (language, concept) as both word and gap."""


class MissingGoldError(KingapsError):
    """Scoring was requested for a language the gold data does not cover."""


class EmptyInputError(KingapsError):
    """An agreement computation received no rating pairs."""


class NoCommonSubsumerError(KingapsError):
    """Two concepts share no ancestor in the given lattice."""
