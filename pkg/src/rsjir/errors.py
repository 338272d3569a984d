"""Exception hierarchy shared by every module of the toolkit."""


class RSJError(Exception):
    """Base class for all toolkit errors."""


class DegenerateProbability(RSJError, ValueError):
    """A probability sits at 0 or 1 where the log-odds weight diverges."""


class DegenerateDocFreq(RSJError, ValueError):
    """A closed-form weight is undefined at this document frequency."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class NonpositiveLift(RSJError, ValueError):
    """A lift constant or lift-function value is not strictly positive."""


class DuplicateDocId(RSJError, ValueError):
    """Two documents in one corpus share an id."""


class CorpusFormatError(RSJError, ValueError):
    """A corpus or query file line cannot be parsed."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class MalformedIndexFile(RSJError, ValueError):
    """An index file is truncated or does not follow the on-disk format."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class VersionMismatch(RSJError, ValueError):
    """An index file declares a format version this code cannot read."""


class SchemeParseError(RSJError, ValueError):
    """A textual scheme descriptor does not parse."""
