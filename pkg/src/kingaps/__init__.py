"""kingaps: kinship concept hierarchy, lexical gap inference, and evaluation."""

__version__ = "0.1.0"
