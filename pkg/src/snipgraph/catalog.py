"""Person-name catalog: loading, normalization, and in-text entity spotting.

A catalog is a dictionary of canonical person names. Matching inside snippet
text is case-insensitive, tolerant of collapsed whitespace, longest-match-wins,
and token-bounded (a name never matches inside a longer word).
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Iterable


class CatalogLoadError(ValueError):
    """Catalog input could not be decoded or read."""


_WS_RUN = re.compile(r"\s+")


def normalize_name(raw: str) -> str:
    """Canonical lookup form: NFC, casefold, whitespace runs collapsed, trimmed."""
    s = unicodedata.normalize("NFC", raw).casefold()
    return " ".join(s.split())


def collapse_ws(text: str) -> str:
    """Collapse every whitespace run (incl. newlines) to a single space."""
    return _WS_RUN.sub(" ", text)


@lru_cache(maxsize=4096)
def phrase_regex(phrase: str, ignore_case: bool = True) -> re.Pattern[str]:
    """Compile a token-bounded matcher for a phrase.

    Internal spaces match any whitespace run. Boundary guards ([^\\W_] = letters
    and digits) are applied only where the phrase edge is itself alphanumeric,
    so punctuation phrases like "&" may sit flush against a word.
    """
    parts = phrase.split()
    body = r"\s+".join(re.escape(p) for p in parts) if parts else re.escape(phrase)
    if phrase and phrase[0].isalnum():
        body = r"(?<![^\W_])" + body
    if phrase and phrase[-1].isalnum():
        body = body + r"(?![^\W_])"
    flags = re.IGNORECASE if ignore_case else 0
    return re.compile(body, flags)


@dataclass(frozen=True)
class Entity:
    """A catalog member; `canonical_name` is the catalog's stored spelling."""

    canonical_name: str


@dataclass
class EntityCatalog:
    """Immutable-after-load name dictionary.

    `names` holds canonical spellings (first occurrence wins on duplicates);
    `normalized_index` maps each normalized form back to its canonical name.
    """

    names: set[str] = field(default_factory=set)
    normalized_index: dict[str, str] = field(default_factory=dict)
    loaded: int = 0
    skipped: int = 0
    _matcher: re.Pattern[str] | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.normalized_index)

    def __contains__(self, name: str) -> bool:
        return normalize_name(name) in self.normalized_index

    def canonical(self, name: str) -> str | None:
        """Canonical spelling for any variant of a catalog name, else None."""
        return self.normalized_index.get(normalize_name(name))

    def add(self, raw: str) -> bool:
        """Add one name; returns False for blank or already-present entries."""
        canonical = raw.strip()
        key = normalize_name(canonical)
        if not key or key in self.normalized_index:
            return False
        self.names.add(canonical)
        self.normalized_index[key] = canonical
        self._matcher = None
        return True

    def matcher(self) -> re.Pattern[str] | None:
        """Compiled alternation over all names, longest (tokens, chars) first."""
        if self._matcher is None and self.normalized_index:
            keys = sorted(
                self.normalized_index,
                key=lambda k: (-len(k.split()), -len(k), k),
            )
            alts = []
            for key in keys:
                body = r"\s+".join(re.escape(tok) for tok in key.split())
                alts.append(r"(?<![^\W_])" + body + r"(?![^\W_])")
            self._matcher = re.compile("|".join(alts), re.IGNORECASE)
        return self._matcher


def load_catalog(source: IO[str] | Iterable[str]) -> EntityCatalog:
    """Load one name per line; blanks and normalized duplicates are skipped.

    The counts of loaded and skipped lines are reported on the returned
    catalog. Undecodable input raises CatalogLoadError naming the byte offset.
    """
    catalog = EntityCatalog()
    try:
        for line in source:
            if catalog.add(line):
                catalog.loaded += 1
            else:
                catalog.skipped += 1
    except UnicodeDecodeError as exc:
        raise CatalogLoadError(
            f"invalid UTF-8 in catalog input at byte {exc.start}"
        ) from exc
    return catalog


def load_catalog_file(path: str) -> EntityCatalog:
    with open(path, "r", encoding="utf-8", newline=None) as fh:
        return load_catalog(fh)


def _char_to_byte_table(text: str) -> list[int]:
    # offsets[i] = byte offset of char i in UTF-8; one extra entry for the end
    offsets = [0] * (len(text) + 1)
    pos = 0
    for i, ch in enumerate(text):
        offsets[i] = pos
        pos += len(ch.encode("utf-8"))
    offsets[len(text)] = pos
    return offsets


def find_entity_matches(text: str, catalog: EntityCatalog) -> list[tuple[str, int, int]]:
    """Non-overlapping catalog matches as (canonical_name, char_start, char_end).

    Longest match wins at each position, scanning left to right. Used
    internally by the snippet extractors, which need character offsets.
    """
    matcher = catalog.matcher()
    if matcher is None:
        return []
    out = []
    for m in matcher.finditer(text):
        canonical = catalog.normalized_index.get(normalize_name(m.group()))
        if canonical is not None:
            out.append((canonical, m.start(), m.end()))
    return out


def find_entities(text: str, catalog: EntityCatalog) -> list[tuple[Entity, tuple[int, int]]]:
    """All catalog-name occurrences in `text` with UTF-8 byte spans.

    Matches are non-overlapping, sorted by start offset, longest-match-wins,
    and token-bounded (characters adjacent to a match are never letters or
    digits).
    """
    matches = find_entity_matches(text, catalog)
    if not matches:
        return []
    if text.isascii():
        return [(Entity(name), (s, e)) for name, s, e in matches]
    table = _char_to_byte_table(text)
    return [(Entity(name), (table[s], table[e])) for name, s, e in matches]
