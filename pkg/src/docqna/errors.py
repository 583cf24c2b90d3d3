"""Exception types shared across the package."""


class DocQAError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(DocQAError):
    """An operation was called with parameters violating its preconditions."""


class MissingDirectory(DocQAError):
    """The corpus directory is absent or not readable."""


class EmptyCorpus(DocQAError):
    """No loadable documents were found in the corpus directory."""


class ProviderUnavailable(DocQAError):
    """The remote embedding provider could not be reached or answered badly."""


class AuthFailure(DocQAError):
    """The remote embedding provider rejected the configured credentials."""


class DimensionMismatch(DocQAError):
    """Vector dimensions disagree with the declared or expected dimension."""


class EmptyIndex(DocQAError):
    """The vector index contains no entries."""


class CorruptIndex(DocQAError):
    """An index file failed magic, version, or consistency checks."""


class EmptyQuery(DocQAError):
    """The query is empty after trimming whitespace."""


class GeneratorUnavailable(DocQAError):
    """The generative answer endpoint failed or returned an unusable answer."""
