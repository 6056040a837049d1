"""Search plumbing: queries, budget accounting, snippet corpora, caching,
and the gateway that turns a query into a ranked, deduplicated snippet list.

Two backends implement the same page-fetch protocol: ReplayBackend serves a
fixed snippet corpus for offline, reproducible runs; LiveBackend talks to a
web search API. The gateway adds paging, retries, caching, and budgeting on
top of either.
"""

from __future__ import annotations

import hashlib
import math
import os
import re
import time
from dataclasses import dataclass, field
from typing import IO, Callable, Iterable, Protocol
from urllib.parse import urlparse

from .catalog import normalize_name, phrase_regex

PAGE_SIZE = 50

FORBIDDEN_QUERY_CHARS = ("&", ",", "+")

CONNECTIVITY = "connectivity"
PAIR = "pair"
ENTITY = "entity"


class QueryError(ValueError):
    """Query text cannot be sent to a search engine."""


class TransportError(RuntimeError):
    """Backend failed to produce a result page."""


class BudgetExceededError(RuntimeError):
    """The request budget cannot cover the next search."""


class CorpusFormatError(ValueError):
    """Malformed corpus input; message names the offending line."""


def requests_for(k: int) -> int:
    """Requests needed to collect k results at PAGE_SIZE results per request."""
    return max(1, math.ceil(k / PAGE_SIZE))


def is_queryable_phrase(phrase: str) -> bool:
    """True when the phrase can appear in query text.

    Whitespace-only phrases (notably the single-space pattern) and phrases
    containing quote or operator characters are not queryable.
    """
    if not phrase.strip():
        return False
    if '"' in phrase:
        return False
    return not any(ch in phrase for ch in FORBIDDEN_QUERY_CHARS)


def validate_query_text(text: str) -> str:
    for ch in FORBIDDEN_QUERY_CHARS:
        if ch in text:
            raise QueryError(f"query contains forbidden character {ch!r}: {text!r}")
    return text


@dataclass(frozen=True)
class Query:
    """A raw query string plus its kind (connectivity or pair)."""

    raw: str
    kind: str

    @property
    def cache_key(self) -> str:
        return normalize_name(self.raw)


def _quoted(term: str, role: str) -> str:
    if not term.strip():
        raise QueryError(f"{role} is empty")
    if '"' in term:
        raise QueryError(f"{role} contains a quote character: {term!r}")
    validate_query_text(term)
    return f'"{term}"'


def connectivity_query(entity: str, pattern_phrase: str) -> Query:
    """Build `"<entity>" <pattern>`; the pattern must be queryable."""
    if not is_queryable_phrase(pattern_phrase):
        raise QueryError(f"pattern phrase is not queryable: {pattern_phrase!r}")
    return Query(f"{_quoted(entity, 'entity')} {pattern_phrase.strip()}", CONNECTIVITY)


def pair_query(entity_a: str, entity_b: str) -> Query:
    """Build `"<a>" "<b>"` for co-occurrence checks."""
    return Query(f"{_quoted(entity_a, 'entity')} {_quoted(entity_b, 'entity')}", PAIR)


def entity_query(entity: str) -> Query:
    """Build `"<entity>"` alone, as used by the pairwise baseline."""
    return Query(_quoted(entity, "entity"), ENTITY)


@dataclass(frozen=True)
class Snippet:
    """One ranked search result: url, source domain, snippet text."""

    url: str
    domain: str
    text: str
    rank: int


@dataclass(frozen=True)
class CorpusRecord:
    """One stored snippet: url, source domain, snippet text."""

    url: str
    domain: str
    text: str


# Common multi-part public suffixes that need a third hostname label to
# identify the registrant.
_MULTI_PART_SUFFIXES = frozenset(
    {
        "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk",
        "com.au", "net.au", "org.au",
        "co.jp", "ne.jp", "or.jp",
        "co.nz", "co.in", "co.za", "co.kr",
        "com.br", "com.mx", "com.cn", "com.sg", "com.tr", "com.ar",
    }
)


def registrable_domain(url: str) -> str:
    """Registrable domain of a URL: the last two hostname labels, or three
    when the last two form a known multi-part suffix like co.uk."""
    host = urlparse(url).hostname
    if host is None:
        host = urlparse("//" + url).hostname or ""
    host = host.lower().rstrip(".")
    labels = host.split(".")
    if len(labels) <= 2:
        return host
    if ".".join(labels[-2:]) in _MULTI_PART_SUFFIXES:
        return ".".join(labels[-3:])
    return ".".join(labels[-2:])


# --- corpus serialization -------------------------------------------------

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape_field(value: str) -> str:
    for plain, escaped in _ESCAPES.items():
        value = value.replace(plain, escaped)
    return value


def unescape_field(value: str) -> str:
    if "\\" not in value:
        return value
    out: list[str] = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(value) or value[i + 1] not in _UNESCAPES:
            raise ValueError(f"bad escape sequence at position {i}")
        out.append(_UNESCAPES[value[i + 1]])
        i += 2
    return "".join(out)


def load_corpus(source: IO[str] | Iterable[str]) -> list[CorpusRecord]:
    """Parse tab-separated url/domain/text records; blank lines are skipped."""
    records: list[CorpusRecord] = []
    for lineno, line in enumerate(source, start=1):
        raw = line.rstrip("\n")
        if raw.endswith("\r"):
            raw = raw[:-1]
        if not raw:
            continue
        fields = raw.split("\t")
        if len(fields) != 3:
            raise CorpusFormatError(
                f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}"
            )
        try:
            url, domain, text = (unescape_field(f) for f in fields)
        except ValueError as exc:
            raise CorpusFormatError(f"line {lineno}: {exc}") from exc
        records.append(CorpusRecord(url, domain, text))
    return records


def load_corpus_file(path: str) -> list[CorpusRecord]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return load_corpus(fh)


def save_corpus(records: Iterable[CorpusRecord], fh: IO[str]) -> None:
    for rec in records:
        fh.write(
            f"{escape_field(rec.url)}\t{escape_field(rec.domain)}\t{escape_field(rec.text)}\n"
        )


def save_corpus_file(records: Iterable[CorpusRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        save_corpus(records, fh)


# --- budget ---------------------------------------------------------------

@dataclass(frozen=True)
class QueryLogEntry:
    raw: str
    requests: int
    cached: bool


@dataclass
class BudgetLedger:
    """Tracks search requests against an optional cap.

    `used_requests` only grows; cache hits are logged but cost nothing.
    `max_requests` of None means unlimited.
    """

    max_requests: int | None = None
    used_requests: int = 0
    queries_issued: int = 0
    log: list[QueryLogEntry] = field(default_factory=list)

    @property
    def remaining(self) -> int | None:
        if self.max_requests is None:
            return None
        return self.max_requests - self.used_requests

    @property
    def exhausted(self) -> bool:
        return self.max_requests is not None and self.used_requests >= self.max_requests

    def can_spend(self, requests: int) -> bool:
        if self.max_requests is None:
            return True
        return self.used_requests + requests <= self.max_requests

    def charge(self, raw_query: str, requests: int) -> None:
        if requests < 0:
            raise ValueError("requests must be >= 0")
        self.used_requests += requests
        self.queries_issued += 1
        self.log.append(QueryLogEntry(raw_query, requests, cached=False))

    def note_cached(self, raw_query: str) -> None:
        self.log.append(QueryLogEntry(raw_query, 0, cached=True))


# --- cache ----------------------------------------------------------------

class SnippetCache:
    """Disk cache of query results.

    Each query maps (via the sha256 of its normalized text) to one file: a
    header line holding the raw query, then one url/domain/text record per
    snippet in rank order. Entries store whatever the gateway fetched, so
    mixing different k values against one cache directory is not supported.
    """

    def __init__(self, directory: str) -> None:
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def _path(self, cache_key: str) -> str:
        digest = hashlib.sha256(cache_key.encode("utf-8")).hexdigest()
        return os.path.join(self.directory, digest + ".tsv")

    def get(self, query: Query) -> list[Snippet] | None:
        path = self._path(query.cache_key)
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = fh.read().split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        records = load_corpus(lines[1:])
        return [
            Snippet(rec.url, rec.domain, rec.text, rank)
            for rank, rec in enumerate(records, start=1)
        ]

    def put(self, query: Query, snippets: Iterable[Snippet]) -> None:
        path = self._path(query.cache_key)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(escape_field(query.raw) + "\n")
            save_corpus(
                (CorpusRecord(s.url, s.domain, s.text) for s in snippets), fh
            )
        os.replace(tmp, path)


# --- backends -------------------------------------------------------------

class SearchBackend(Protocol):
    def fetch(self, raw_query: str, offset: int, count: int) -> list[CorpusRecord]:
        """Return up to `count` results starting at `offset`."""
        ...


_QUOTED_PHRASE = re.compile(r'"([^"]*)"')


def parse_query_terms(raw: str) -> tuple[list[str], list[str]]:
    """Split a raw query into quoted phrases and bare tokens."""
    phrases = [p for p in _QUOTED_PHRASE.findall(raw) if p.strip()]
    rest = _QUOTED_PHRASE.sub(" ", raw)
    tokens = rest.split()
    return phrases, tokens


class ReplayBackend:
    """Serves a fixed corpus: a snippet matches a query when every quoted
    phrase occurs in its text (token-bounded, any case). Bare tokens outside
    quotes are ignored, the way a broad-match term barely constrains a
    web-scale index.

    Results keep corpus insertion order, which stands in for search-engine
    ranking and makes replay runs fully deterministic.
    """

    def __init__(self, records: Iterable[CorpusRecord]) -> None:
        self.records = list(records)
        self._memo: dict[str, list[CorpusRecord]] = {}

    def _matches(self, raw_query: str) -> list[CorpusRecord]:
        hit = self._memo.get(raw_query)
        if hit is not None:
            return hit
        phrases, _ = parse_query_terms(raw_query)
        needles = [phrase_regex(term) for term in phrases]
        found = [
            rec
            for rec in self.records
            if all(rx.search(rec.text) for rx in needles)
        ]
        self._memo[raw_query] = found
        return found

    def fetch(self, raw_query: str, offset: int, count: int) -> list[CorpusRecord]:
        return self._matches(raw_query)[offset : offset + count]


def replay_backend_from_corpus(path: str) -> ReplayBackend:
    return ReplayBackend(load_corpus_file(path))


DEFAULT_ENDPOINT = "https://api.bing.microsoft.com/v7.0/search"

Transport = Callable[[str, dict, dict], tuple[int, dict]]


def _requests_transport(timeout: float) -> Transport:
    import requests

    def transport(url: str, params: dict, headers: dict) -> tuple[int, dict]:
        try:
            resp = requests.get(url, params=params, headers=headers, timeout=timeout)
        except requests.RequestException as exc:
            raise TransportError(f"search request failed: {exc}") from exc
        try:
            body = resp.json() if resp.content else {}
        except ValueError:
            body = {}
        return resp.status_code, body

    return transport


class LiveBackend:
    """Web search API backend.

    Speaks the common key-in-header JSON search protocol: GET with q, count,
    and offset parameters, results under webPages.value. The transport is
    injectable so tests never touch the network.
    """

    def __init__(
        self,
        api_key: str,
        endpoint: str = DEFAULT_ENDPOINT,
        transport: Transport | None = None,
        timeout: float = 10.0,
        min_delay: float = 0.0,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if not api_key:
            raise ValueError("api_key is required for live search")
        if min_delay < 0:
            raise ValueError("min_delay must be >= 0")
        self.endpoint = endpoint
        self.min_delay = min_delay
        self._headers = {"Ocp-Apim-Subscription-Key": api_key}
        self._transport = transport or _requests_transport(timeout)
        self._clock = clock
        self._sleep = sleep
        self._last_request: float | None = None

    def _pace(self) -> None:
        # keeps successive API calls at least min_delay seconds apart
        if self.min_delay > 0 and self._last_request is not None:
            wait = self.min_delay - (self._clock() - self._last_request)
            if wait > 0:
                self._sleep(wait)
        self._last_request = self._clock()

    def fetch(self, raw_query: str, offset: int, count: int) -> list[CorpusRecord]:
        params = {"q": raw_query, "count": min(count, PAGE_SIZE), "offset": offset}
        self._pace()
        status, body = self._transport(self.endpoint, params, self._headers)
        if status != 200:
            raise TransportError(f"search API returned status {status}")
        items = (body.get("webPages") or {}).get("value") or []
        records = []
        for item in items:
            url = item.get("url", "")
            records.append(
                CorpusRecord(url, registrable_domain(url), item.get("snippet", ""))
            )
        return records


# --- gateway --------------------------------------------------------------

class SearchGateway:
    """Pages, deduplicates, caches, retries, and budgets snippet searches.

    search() fetches PAGE_SIZE results per request until k results are
    collected or a short page signals the end, and returns the snippets
    together with the number of requests it consumed. Duplicate (url, text)
    results are dropped. One budget request is charged per page actually
    fetched; cache hits are free. With enforce_budget a search refuses to
    start on an exhausted ledger; a search already in flight may overshoot
    the cap. Callers that do their own budget checks pass
    enforce_budget=False.
    """

    def __init__(
        self,
        backend: SearchBackend,
        ledger: BudgetLedger | None = None,
        cache: SnippetCache | None = None,
        retries: int = 3,
        backoff: float = 1.0,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        if retries < 1:
            raise ValueError("retries must be >= 1")
        self.backend = backend
        self.ledger = ledger if ledger is not None else BudgetLedger()
        self.cache = cache
        self.retries = retries
        self.backoff = backoff
        self._sleep = sleep

    def _fetch_page(self, raw_query: str, offset: int) -> list[CorpusRecord]:
        delay = self.backoff
        for attempt in range(1, self.retries + 1):
            try:
                return self.backend.fetch(raw_query, offset, PAGE_SIZE)
            except TransportError:
                if attempt == self.retries:
                    raise
                self._sleep(delay)
                delay *= 2
        raise AssertionError("unreachable")

    def search(
        self, query: Query, k: int, enforce_budget: bool = True
    ) -> tuple[list[Snippet], int]:
        """Up to k ranked snippets for `query` plus the requests consumed;
        see class docstring."""
        if k < 1:
            raise ValueError("k must be >= 1")
        validate_query_text(query.raw)
        if self.cache is not None:
            cached = self.cache.get(query)
            if cached is not None:
                self.ledger.note_cached(query.raw)
                return cached[:k], 0
        if enforce_budget and self.ledger.exhausted:
            raise BudgetExceededError(
                f"request budget exhausted before searching {query.raw!r}"
            )
        max_pages = requests_for(k)
        collected: list[Snippet] = []
        seen: set[tuple[str, str]] = set()
        spent = 0
        for page_idx in range(max_pages):
            page = self._fetch_page(query.raw, page_idx * PAGE_SIZE)
            spent += 1
            for rec in page:
                key = (rec.url, rec.text)
                if key in seen:
                    continue
                seen.add(key)
                collected.append(
                    Snippet(rec.url, rec.domain.lower(), rec.text, len(collected) + 1)
                )
            if len(page) < PAGE_SIZE or len(collected) >= k:
                break
        self.ledger.charge(query.raw, spent)
        result = collected[:k]
        if self.cache is not None:
            self.cache.put(query, result)
        return result, spent
