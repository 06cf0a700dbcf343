"""Corpus loading and tokenization.

Plain-text corpora follow the Author_Title.txt naming convention: the file
stem up to the first underscore is the author label, the remainder is the
title (which may itself contain underscores).
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

from .errors import CorpusLoadError, EmptyCorpusError, MalformedIdError

__all__ = [
    "DocumentId",
    "Document",
    "TokenizerConfig",
    "parse_document_id",
    "tokenize",
    "load_corpus",
]


@dataclass(frozen=True, order=True)
class DocumentId:
    author: str
    title: str

    @property
    def raw(self) -> str:
        return f"{self.author}_{self.title}"

    def __str__(self) -> str:
        return self.raw


def parse_document_id(stem: str) -> DocumentId:
    """Split a file stem on the FIRST underscore into author and title."""
    author, sep, title = stem.partition("_")
    if not sep or not author or not title:
        raise MalformedIdError(stem)
    return DocumentId(author=author, title=title)


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenization rule shared by every document of one analysis.

    letters-plus-apostrophe keeps internal apostrophes ("don't" is one
    token); letters-only splits on them. Numerals are stripped by default,
    so "Ch 7" tokenizes to ["ch"].
    """

    lowercase: bool = True
    splitter: Literal["letters", "letters+apostrophe"] = "letters+apostrophe"
    strip_numerals: bool = True


# \w minus digits and underscore = Unicode letters (plus marks/connectors,
# close enough for stylometric word splitting).
_LETTER = r"[^\W\d_]"
_ALNUM = r"[^\W_]"


def _token_pattern(config: TokenizerConfig) -> re.Pattern:
    atom = _LETTER if config.strip_numerals else _ALNUM
    if config.splitter == "letters+apostrophe":
        return re.compile(rf"{atom}+(?:['’]{atom}+)*")
    return re.compile(rf"{atom}+")


def tokenize(text: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    """Extract word tokens from text according to the configured rule."""
    text = unicodedata.normalize("NFC", text)
    if config.lowercase:
        # Lowercase before splitting: for a handful of code points lower()
        # produces combining marks that would otherwise break tokens apart.
        text = text.lower()
    return _token_pattern(config).findall(text)


@dataclass(frozen=True)
class Document:
    id: DocumentId
    tokens: tuple[str, ...] = field(repr=False)

    @property
    def token_count(self) -> int:
        return len(self.tokens)


def load_corpus(
    directory: str | Path, config: TokenizerConfig = TokenizerConfig()
) -> list[Document]:
    """Load every .txt file under directory as one Document.

    Files are processed in lexicographic stem order regardless of how the
    filesystem enumerates them. Unreadable files and malformed stems do not
    abort the whole load: the readable part is collected and a
    CorpusLoadError carrying both the partial result and the per-file error
    listing is raised.
    """
    directory = Path(directory)
    paths = sorted(directory.glob("*.txt"), key=lambda p: p.stem)
    if not paths:
        raise EmptyCorpusError(directory)
    documents: list[Document] = []
    errors: list[tuple[str, str]] = []
    for path in paths:
        try:
            doc_id = parse_document_id(path.stem)
            text = path.read_text(encoding="utf-8-sig")
        except (MalformedIdError, OSError, UnicodeDecodeError) as exc:
            errors.append((str(path), str(exc)))
            continue
        documents.append(Document(id=doc_id, tokens=tuple(tokenize(text, config))))
    if errors:
        raise CorpusLoadError(errors, documents)
    return documents


def total_tokens(corpus: Iterable[Document]) -> int:
    return sum(doc.token_count for doc in corpus)
