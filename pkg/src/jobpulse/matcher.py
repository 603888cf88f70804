"""Offline search-phrase semantics: term matching, industry filter, discovery.

Matching is exact on normalized tokens: a term hits a posting when its
phrase occurs as a contiguous token run in the title or job description.
Hyphenated tokens bridge to their parts ("rf-engineer" also indexes as
"rf engineer"), treating hyphenation as a typography accident. There is no
fuzzy matching; the discovery report is the sanctioned recall-recovery
mechanism, and discovered phrases are appended to the taxonomy by hand,
never automatically.

match_posting and industry_filter are pure per-posting functions; fan-out
across postings is safe with a deterministic merge in posting order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .corpus import Corpus, Posting, Region, normalize_text
from .errors import InputError
from .taxonomy import Jst, Taxonomy

logger = logging.getLogger(__name__)

DEFAULT_ROLE_WORDS = ("engineer", "technician", "scientist", "analyst", "administrator")
DEFAULT_MIN_COUNT = 3

FILTER_ANY_FIELD = "any_field"
FILTER_ALL_FIELDS = "all_fields"
FILTER_MODES = (FILTER_ANY_FIELD, FILTER_ALL_FIELDS)


def expand_hyphens(tokens: tuple[str, ...]) -> tuple[str, ...]:
    """Split hyphenated tokens into their parts for matching."""
    if not any("-" in t for t in tokens):
        return tokens
    out: list[str] = []
    for t in tokens:
        if "-" in t:
            out.extend(t.split("-"))
        else:
            out.append(t)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class SearchPhrase:
    """An industry token plus a quoted term n-gram, e.g. semiconductor "product engineer"."""

    industry_token: str
    jst_phrase: str

    def render(self) -> str:
        return f'{self.industry_token} "{self.jst_phrase}"'

    def __str__(self) -> str:
        return self.render()


def validate_industry_token(industry_token: str) -> str:
    """Normalize and validate the industry token (exactly one token)."""
    tokens = normalize_text(industry_token)
    if len(tokens) != 1:
        raise InputError(f"industry token must be a single token, got {industry_token!r}")
    return tokens[0]


def build_search_phrase(jst: Jst, industry_token: str) -> SearchPhrase:
    """Render the canonical search phrase for one term."""
    return SearchPhrase(industry_token=validate_industry_token(industry_token), jst_phrase=jst.phrase)


def parse_search_phrase(rendered: str) -> SearchPhrase:
    """Parse the display form back into its parts (round-trip of render)."""
    stripped = rendered.strip()
    if stripped.count('"') != 2 or not stripped.endswith('"'):
        raise InputError(f"malformed search phrase {rendered!r}")
    head, _, quoted = stripped.partition('"')
    return SearchPhrase(
        industry_token=validate_industry_token(head),
        jst_phrase=quoted.rstrip('"'),
    )


@dataclass(frozen=True, slots=True)
class MatchRecord:
    """Terms that hit one posting, with per-term title-occurrence flags."""

    job_id: str
    region: Region
    matched_jsts: frozenset[Jst]
    matched_in_title: frozenset[Jst]

    def __post_init__(self) -> None:
        if not self.matched_jsts:
            raise InputError(f"match record for {self.job_id} has no matched terms")


class MatchIndex:
    """First-token index over a taxonomy's terms for fast contiguous-run scans."""

    def __init__(self, taxonomy: Taxonomy) -> None:
        self.taxonomy = taxonomy
        self._by_first: dict[str, list[tuple[tuple[str, ...], Jst]]] = {}
        for jst in taxonomy.jsts:
            expanded = expand_hyphens(jst.tokens)
            if not expanded:
                continue
            self._by_first.setdefault(expanded[0], []).append((expanded, jst))

    def scan(self, tokens: tuple[str, ...]) -> set[Jst]:
        """All terms occurring as contiguous runs in the expanded token sequence."""
        expanded = expand_hyphens(tokens)
        hits: set[Jst] = set()
        by_first = self._by_first
        n = len(expanded)
        for i, tok in enumerate(expanded):
            for phrase, jst in by_first.get(tok, ()):
                if jst in hits:
                    continue
                end = i + len(phrase)
                if end <= n and phrase == expanded[i:end]:
                    hits.add(jst)
        return hits


def match_posting(posting: Posting, taxonomy: Taxonomy, index: MatchIndex | None = None) -> MatchRecord | None:
    """Match one posting against the taxonomy's terms.

    Terms are searched in the title and job description (not the employer
    description); returns nothing when no term occurs.
    """
    if index is None:
        index = MatchIndex(taxonomy)
    title_hits = index.scan(normalize_text(posting.title))
    desc_hits = index.scan(normalize_text(posting.job_description))
    matched = title_hits | desc_hits
    if not matched:
        return None
    return MatchRecord(
        job_id=posting.job_id,
        region=posting.region,
        matched_jsts=frozenset(matched),
        matched_in_title=frozenset(title_hits),
    )


def match_corpus(postings: Corpus | list[Posting], taxonomy: Taxonomy) -> list[MatchRecord]:
    """Match every posting, preserving posting order; non-matching postings drop out."""
    index = MatchIndex(taxonomy)
    records = []
    for posting in postings:
        record = match_posting(posting, taxonomy, index)
        if record is not None:
            records.append(record)
    return records


def industry_filter(posting: Posting, industry_token: str, mode: str = FILTER_ANY_FIELD) -> bool:
    """Keep a posting when the industry token occurs in its descriptions.

    ``any_field`` keeps the posting when the token appears in the job
    description or the employer description; ``all_fields`` requires both.
    The title is not consulted.
    """
    if mode not in FILTER_MODES:
        raise InputError(f"unknown filter mode {mode!r}: expected one of {FILTER_MODES}")
    token = validate_industry_token(industry_token)
    in_job = token in expand_hyphens(normalize_text(posting.job_description))
    in_employer = token in expand_hyphens(normalize_text(posting.employer_description))
    if mode == FILTER_ALL_FIELDS:
        return in_job and in_employer
    return in_job or in_employer


def filter_corpus(
    postings: Corpus | list[Posting], industry_token: str, mode: str = FILTER_ANY_FIELD
) -> list[Posting]:
    """Postings passing the industry filter, in input order."""
    return [p for p in postings if industry_filter(p, industry_token, mode)]


def discover_candidate_titles(
    postings: Corpus | list[Posting],
    taxonomy: Taxonomy,
    min_count: int = DEFAULT_MIN_COUNT,
    role_words: tuple[str, ...] = DEFAULT_ROLE_WORDS,
) -> list[tuple[str, int]]:
    """Surface posting-title n-grams the taxonomy lacks.

    Scans titles only (descriptions are too noisy). A title containing any
    known term is already reachable and contributes nothing; from the
    remaining titles, n-grams of length 2-4 ending in a role word are
    counted once per posting. Returns (phrase, count) pairs with
    count >= min_count, sorted by count descending then phrase ascending.
    """
    if min_count < 1:
        raise InputError(f"min_count must be positive, got {min_count}")
    index = MatchIndex(taxonomy)
    role_set = set(role_words)
    counts: dict[str, int] = {}
    for posting in postings:
        tokens = expand_hyphens(normalize_text(posting.title))
        if index.scan(tokens):
            continue
        grams: set[str] = set()
        for length in (2, 3, 4):
            for i in range(len(tokens) - length + 1):
                gram = tokens[i : i + length]
                if gram[-1] in role_set:
                    grams.add(" ".join(gram))
        for gram in grams:
            counts[gram] = counts.get(gram, 0) + 1
    ranked = [(phrase, n) for phrase, n in counts.items() if n >= min_count]
    ranked.sort(key=lambda item: (-item[1], item[0]))
    return ranked
