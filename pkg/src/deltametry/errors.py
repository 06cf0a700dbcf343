"""Exception hierarchy shared by all deltametry modules.

Exit-code grouping used by the CLI:
  usage errors -> 2, input/parse errors -> 3, numeric/degenerate-data
  errors -> 4, I/O errors -> 5.
"""


class DeltametryError(Exception):
    """Base class for all errors raised by this package."""


class InputError(DeltametryError):
    """Malformed or unusable input (exit code 3)."""


class DataError(DeltametryError):
    """Numerically degenerate or inconsistent data (exit code 4)."""


class MalformedIdError(InputError):
    def __init__(self, stem: str):
        super().__init__(f"malformed document id {stem!r}: expected Author_Title")
        self.stem = stem


class EmptyCorpusError(InputError):
    def __init__(self, directory):
        super().__init__(f"no .txt files found in {directory}")
        self.directory = directory


class CorpusLoadError(InputError):
    """Some files failed to load; carries the partial result."""

    def __init__(self, errors, documents):
        lines = "; ".join(f"{path}: {msg}" for path, msg in errors)
        super().__init__(f"{len(errors)} file(s) failed to load: {lines}")
        self.errors = list(errors)
        self.documents = list(documents)


class TableParseError(InputError):
    def __init__(self, message, row=None, column=None):
        loc = ""
        if row is not None:
            loc = f" at row {row}" + (f", column {column}" if column is not None else "")
        super().__init__(message + loc)
        self.row = row
        self.column = column


class OrientationError(InputError):
    def __init__(self, message):
        super().__init__(
            message + " (pass orientation='docs-rows' or 'words-rows' explicitly)"
        )


class EmptyTableError(DataError):
    pass


class DegenerateDocumentError(DataError):
    def __init__(self, doc_id):
        super().__init__(f"document {doc_id} has zero tokens")
        self.doc_id = doc_id


class InsufficientDataError(DataError):
    pass


class ModelMismatchError(DataError):
    pass


class DimensionError(DataError):
    pass


class UnknownDocumentError(DataError):
    def __init__(self, doc_id):
        super().__init__(f"document {doc_id} not present in matrix")
        self.doc_id = doc_id


class UnknownAuthorError(DataError):
    def __init__(self, author):
        super().__init__(f"author {author!r} not present")
        self.author = author


class UnknownCandidateError(DataError):
    def __init__(self, candidate):
        super().__init__(f"candidate author {candidate!r} has no usable documents")
        self.candidate = candidate


class DegenerateSetupError(DataError):
    pass


class InvalidMatrixError(DataError):
    pass


class UsageError(DeltametryError):
    """Bad CLI arguments or config (exit code 2)."""
