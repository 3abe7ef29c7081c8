"""Exception hierarchy shared across the package.

Exit-code mapping lives in the CLI: ConfigError/ValidationError/UsageError
exit with 2, everything else raised from here exits with 1.
"""


class TaxmapError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TaxmapError):
    """A file violated its documented format. Carries the 1-based line number."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)


class UnknownConceptError(TaxmapError):
    """Lookup of a concept id that is not part of the graph or table."""


class EmptyVocabError(TaxmapError):
    """No token survived the vocabulary count threshold."""


class MissingOovError(TaxmapError):
    """Out-of-vocabulary lookup on a table without an OOV vector."""


class EmptyPhraseError(TaxmapError):
    """Tokenization produced no tokens."""


class ShapeError(TaxmapError):
    """An array did not have the expected shape."""


class StateError(TaxmapError):
    """Operation called out of order (e.g. backward before forward)."""


class NumericError(TaxmapError):
    """Non-finite value encountered; message names the offending tensor."""


class ValidationError(TaxmapError):
    """Inputs are structurally valid but violate a contract precondition."""


class DegenerateQueryError(TaxmapError):
    """Cosine query with zero norm."""


class ConfigError(TaxmapError):
    """Configuration is missing, malformed, or inconsistent."""


class CheckpointError(TaxmapError):
    """Checkpoint file is malformed or from an unsupported version."""
