"""Employer-name disambiguation.

Company names reuse semantically loaded words ("Advanced", "American",
"University of") at high frequency, so naive first-word grouping merges
distinct companies. The remedy implemented here:

- normalize names and strip legal suffixes (inc, llc, ...), which never
  count as distinguishing tokens;
- block by first token and compare token by token, so "Advanced Micro
  Devices" and "Advanced Systems" split at the second word, and
  "University of California Los Angeles" / "... Santa Barbara" split at
  the fourth;
- merge a name into another only when its full token sequence is a proper
  prefix of the other (a corporate division extending the parent's name),
  guarded by the common-word dictionary: a name made entirely of
  dictionary tokens ("Advanced") never absorbs longer names.

Net effect: merges happen exactly for identical normalized names and for
guarded prefix extensions, nothing else. The mapping is deterministic and
input-order-invariant; the canonical name of a group is its shortest
member (the parent), ties broken lexicographically.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from fractions import Fraction

from .corpus import Region, normalize_text
from .dedup import DemandLedger
from .errors import ContractError, InputError
from .report import render_decimal, render_pct

logger = logging.getLogger(__name__)

DEFAULT_LEGAL_SUFFIXES = ("inc", "llc", "corp", "co", "ltd")

# Tokens named or implied by the source methodology; extend via a dictionary
# file, not code.
DEFAULT_DICTIONARY_TOKENS = ("american", "advanced", "university", "of")


@dataclass(frozen=True)
class NameDictionary:
    """Common name words that must never identify a company on their own."""

    common_tokens: frozenset[str]

    def __contains__(self, token: str) -> bool:
        return token in self.common_tokens

    def all_common(self, tokens: tuple[str, ...]) -> bool:
        return all(t in self.common_tokens for t in tokens)


def default_dictionary() -> NameDictionary:
    return NameDictionary(common_tokens=frozenset(DEFAULT_DICTIONARY_TOKENS))


def load_dictionary(path: str) -> NameDictionary:
    """Load a dictionary file: one token per line, '#' comments."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read dictionary file {path}: {exc}") from exc
    tokens: set[str] = set()
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens.update(normalize_text(stripped))
    if not tokens:
        raise InputError(f"{path}: dictionary file declares no tokens")
    return NameDictionary(common_tokens=frozenset(tokens))


@dataclass(frozen=True)
class CanonicalEmployer:
    """A disambiguated employer identity and its member raw names."""

    canonical_name: str
    members: frozenset[str]
    posting_count: Fraction = Fraction(0)


def normalize_name(
    raw: str, suffixes: tuple[str, ...] = DEFAULT_LEGAL_SUFFIXES
) -> tuple[str, ...]:
    """Normalize a raw employer name to comparison tokens.

    Lowercase tokenization, then trailing legal suffixes are stripped
    ("Amazon Inc" compares as "amazon"). A name made only of suffixes keeps
    its tokens rather than vanishing.
    """
    tokens = normalize_text(raw)
    suffix_set = set(suffixes)
    stripped = list(tokens)
    while len(stripped) > 1 and stripped[-1] in suffix_set:
        stripped.pop()
    if len(stripped) == 1 and stripped[0] in suffix_set and len(tokens) > 1:
        return tokens
    return tuple(stripped)


class _UnionFind:
    def __init__(self, items: list[tuple[str, ...]]) -> None:
        self.parent = {item: item for item in items}

    def find(self, item: tuple[str, ...]) -> tuple[str, ...]:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: tuple[str, ...], b: tuple[str, ...]) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Deterministic: shorter (then lexicographically smaller) name roots.
            if (len(ra), ra) <= (len(rb), rb):
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def canonicalize(
    names: list[str],
    dictionary: NameDictionary | None = None,
    suffixes: tuple[str, ...] = DEFAULT_LEGAL_SUFFIXES,
) -> tuple[dict[str, CanonicalEmployer], list[str]]:
    """Group raw employer names into canonical identities.

    Returns (mapping of raw name -> CanonicalEmployer, rejected raw names).
    Empty or token-less names are rejected with a diagnostic. Names whose
    first tokens differ are never merged.
    """
    dictionary = dictionary or default_dictionary()
    rejected: list[str] = []
    by_sequence: dict[tuple[str, ...], set[str]] = {}
    for raw in names:
        tokens = normalize_name(raw, suffixes)
        if not tokens:
            rejected.append(raw)
            logger.warning("employer name %r normalizes to nothing; excluded", raw)
            continue
        by_sequence.setdefault(tokens, set()).add(raw)

    sequences = sorted(by_sequence)
    uf = _UnionFind(sequences)
    by_first: dict[str, list[tuple[str, ...]]] = {}
    for seq in sequences:
        by_first.setdefault(seq[0], []).append(seq)
    for block in by_first.values():
        # Sorted order guarantees a prefix immediately precedes its extensions.
        for short in block:
            if dictionary.all_common(short):
                continue
            n = len(short)
            for other in block:
                if len(other) > n and other[:n] == short:
                    uf.union(short, other)

    groups: dict[tuple[str, ...], list[tuple[str, ...]]] = {}
    for seq in sequences:
        groups.setdefault(uf.find(seq), []).append(seq)

    mapping: dict[str, CanonicalEmployer] = {}
    for member_seqs in groups.values():
        canonical_seq = min(member_seqs, key=lambda s: (len(s), s))
        members = frozenset(raw for seq in member_seqs for raw in by_sequence[seq])
        employer = CanonicalEmployer(canonical_name=" ".join(canonical_seq), members=members)
        for raw in members:
            mapping[raw] = employer
    return mapping, rejected


@dataclass(frozen=True)
class EmployerReport:
    """Employer-base statistics over the demand ledger."""

    raw_name_count: int
    employer_count: int
    unit_total: Fraction
    mean_units: Fraction
    ranked: tuple[tuple[str, Fraction], ...]
    top_k: int
    top_total: Fraction
    top_share: Fraction

    @property
    def top(self) -> tuple[tuple[str, Fraction], ...]:
        return self.ranked[: self.top_k]

    @property
    def mean_label(self) -> str:
        return render_decimal(self.mean_units, 1)

    @property
    def top_share_label(self) -> str:
        return render_pct(self.top_share, 1)


def employer_stats(
    ledger: DemandLedger,
    mapping: dict[str, CanonicalEmployer],
    unit_employers: dict[tuple[str, Region], str],
    top_k: int = 3,
) -> EmployerReport:
    """Aggregate demand units per canonical employer.

    ``unit_employers`` links each (job_id, region) demand unit to its raw
    employer name; every linked name must appear in the mapping or the
    upstream contract was violated.
    """
    unit_weights: dict[tuple[str, Region], Fraction] = {}
    for a in ledger.assignments:
        key = (a.job_id, a.region)
        unit_weights[key] = unit_weights.get(key, Fraction(0)) + a.weight
    counts: dict[str, Fraction] = {}
    raw_seen: set[str] = set()
    for key, weight in unit_weights.items():
        try:
            raw = unit_employers[key]
        except KeyError:
            raise ContractError(f"demand unit {key} has no employer name") from None
        employer = mapping.get(raw)
        if employer is None:
            raise ContractError(f"employer name {raw!r} missing from canonical mapping")
        raw_seen.add(raw)
        counts[employer.canonical_name] = counts.get(employer.canonical_name, Fraction(0)) + weight
    total = sum(counts.values(), start=Fraction(0))
    employer_count = len(counts)
    mean = total / employer_count if employer_count else Fraction(0)
    ranked = tuple(sorted(counts.items(), key=lambda item: (-item[1], item[0])))
    top_total = sum((count for _, count in ranked[:top_k]), start=Fraction(0))
    top_share = top_total / total if total else Fraction(0)
    return EmployerReport(
        raw_name_count=len(raw_seen),
        employer_count=employer_count,
        unit_total=total,
        mean_units=mean,
        ranked=ranked,
        top_k=top_k,
        top_total=top_total,
        top_share=top_share,
    )


def render_employers_csv(report: EmployerReport) -> str:
    """Per-employer export: canonical_name,units,units_num,units_den,share_pct."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["canonical_name", "units", "units_num", "units_den", "share_pct"])
    for name, count in report.ranked:
        share = count / report.unit_total if report.unit_total else Fraction(0)
        writer.writerow(
            [name, render_decimal(count), count.numerator, count.denominator, render_pct(share)]
        )
    return buf.getvalue()


def render_employers_text(report: EmployerReport) -> str:
    lines = [
        f"canonical employers: {report.employer_count} (from {report.raw_name_count} raw names)",
        f"demand units: {render_decimal(report.unit_total)}",
        f"mean units per employer: {report.mean_label}",
        f"top {report.top_k} employers: {render_decimal(report.top_total)} units"
        f" ({report.top_share_label} of total)",
        "",
    ]
    width = max([len(name) for name, _ in report.ranked], default=8)
    lines.append(f"{'employer'.ljust(width)}  {'units':>9}  share")
    for name, count in report.ranked:
        share = count / report.unit_total if report.unit_total else Fraction(0)
        lines.append(f"{name.ljust(width)}  {render_decimal(count):>9}  {render_pct(share)}")
    return "\n".join(lines) + "\n"


def render_mapping_csv(mapping: dict[str, CanonicalEmployer]) -> str:
    """Mapping export: raw_name,canonical_name (sorted by raw name)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["raw_name", "canonical_name"])
    for raw in sorted(mapping):
        writer.writerow([raw, mapping[raw].canonical_name])
    return buf.getvalue()
