"""Job-term hierarchy: titles grouped into families, families into functions.

Loads the taxonomy from CSV, validates reference closure, and resolves the
precedence rule for phrases that appear at both hierarchy levels: the family
wins and the phrase is removed from consideration as a title anywhere else.

A loaded Taxonomy is immutable and safe for concurrent reads.
"""

from __future__ import annotations

import csv
import enum
import logging
from dataclasses import dataclass, field

from .corpus import normalize_text
from .errors import InputError

logger = logging.getLogger(__name__)

TAXONOMY_HEADER = ("function", "family", "title")


class JobFunction(enum.Enum):
    """The four top-level groupings by education level and value-chain role."""

    SCIENTIST = "Scientist"
    ENGINEER = "Engineer"
    TECHNICIAN = "Technician"
    OPERATIONAL_SUPPORT = "OperationalSupport"

    def __str__(self) -> str:
        return self.value


_FUNCTION_ALIASES = {
    "scientist": JobFunction.SCIENTIST,
    "scientists": JobFunction.SCIENTIST,
    "engineer": JobFunction.ENGINEER,
    "engineers": JobFunction.ENGINEER,
    "technician": JobFunction.TECHNICIAN,
    "technicians": JobFunction.TECHNICIAN,
    "operationalsupport": JobFunction.OPERATIONAL_SUPPORT,
    "organizationalsupport": JobFunction.OPERATIONAL_SUPPORT,
}


def parse_function(label: str) -> JobFunction:
    """Parse a function label, tolerating case, spaces, hyphens, underscores."""
    key = label.strip().lower().replace(" ", "").replace("_", "").replace("-", "")
    try:
        return _FUNCTION_ALIASES[key]
    except KeyError:
        raise InputError(f"unknown job function label {label!r}") from None


class JstLevel(enum.Enum):
    FAMILY = "Family"
    TITLE = "Title"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class JobFamily:
    name: str
    function: JobFunction


@dataclass(frozen=True, slots=True)
class JobTitle:
    name: str
    family: JobFamily


@dataclass(frozen=True, slots=True)
class Jst:
    """One job-specific term: a family or title phrase used as a match keyword."""

    phrase: str
    tokens: tuple[str, ...]
    level: JstLevel
    family: JobFamily
    title: JobTitle | None = None

    def __post_init__(self) -> None:
        if self.level is JstLevel.FAMILY and self.title is not None:
            raise InputError(f"family-level term {self.phrase!r} must not carry a title")
        if self.level is JstLevel.TITLE and self.title is None:
            raise InputError(f"title-level term {self.phrase!r} must carry a title")


@dataclass(frozen=True)
class Taxonomy:
    """Validated, immutable hierarchy with exact-phrase lookup."""

    functions: tuple[JobFunction, ...]
    families: tuple[JobFamily, ...]
    titles: tuple[JobTitle, ...]
    jsts: tuple[Jst, ...]
    source_version: str = ""
    warnings: tuple[str, ...] = ()
    _index: dict[tuple[str, ...], Jst] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {jst.tokens: jst for jst in self.jsts}
        if len(index) != len(self.jsts):
            raise InputError("duplicate phrases survived precedence resolution")
        object.__setattr__(self, "_index", index)

    def find(self, tokens: tuple[str, ...]) -> Jst | None:
        return self._index.get(tokens)

    def families_of(self, function: JobFunction) -> tuple[JobFamily, ...]:
        return tuple(f for f in self.families if f.function is function)

    def jsts_of(self, function: JobFunction) -> tuple[Jst, ...]:
        return tuple(j for j in self.jsts if j.family.function is function)


def normalize_phrase(raw: str) -> tuple[str, ...]:
    """Normalize a taxonomy phrase to its token sequence.

    Lowercase, whitespace collapsed, leading/trailing punctuation stripped;
    shares the corpus tokenizer so taxonomy phrases and posting text live in
    the same token space.
    """
    return normalize_text(raw)


def resolve_precedence(entries: list[Jst]) -> tuple[list[Jst], list[str]]:
    """Apply the hierarchy-precedence rule to candidate terms.

    When a phrase occurs both as a family and as a title, only the
    family-level entry survives; every title-level occurrence is dropped
    with a warning. A phrase declared as a family in two different families
    is ambiguous and rejected, as is the same title phrase claimed by two
    families with no family-level entry to arbitrate.

    Idempotent: resolving an already-resolved list returns it unchanged.
    """
    by_tokens: dict[tuple[str, ...], list[Jst]] = {}
    for entry in entries:
        by_tokens.setdefault(entry.tokens, []).append(entry)

    survivors: list[Jst] = []
    warnings: list[str] = []
    dropped: set[int] = set()
    for tokens, group in by_tokens.items():
        family_entries = [e for e in group if e.level is JstLevel.FAMILY]
        title_entries = [e for e in group if e.level is JstLevel.TITLE]
        if len(family_entries) > 1:
            names = sorted({e.family.name for e in family_entries})
            raise InputError(
                f"phrase {' '.join(tokens)!r} is declared as a family more than once ({', '.join(names)})"
            )
        if family_entries and title_entries:
            for e in title_entries:
                warnings.append(
                    f"phrase {e.phrase!r} used as both family and title: family takes "
                    f"precedence, removed as a title in family {e.family.name!r}"
                )
                dropped.add(id(e))
        elif len(title_entries) > 1:
            names = sorted({e.family.name for e in title_entries})
            raise InputError(
                f"title phrase {' '.join(tokens)!r} claimed by multiple families ({', '.join(names)})"
            )
    for entry in entries:
        if id(entry) not in dropped:
            survivors.append(entry)
    return survivors, warnings


def lookup(taxonomy: Taxonomy, phrase: str | tuple[str, ...]) -> Jst | None:
    """Exact-phrase lookup; absence is a valid result."""
    tokens = normalize_phrase(phrase) if isinstance(phrase, str) else tuple(phrase)
    if not tokens:
        return None
    return taxonomy.find(tokens)


def _read_rows(path: str) -> list[tuple[int, list[str]]]:
    """Read CSV rows with their original line numbers; '#' lines and blanks skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read taxonomy file {path}: {exc}") from exc
    numbered = [
        (no, line)
        for no, line in enumerate(raw_lines, start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    rows: list[tuple[int, list[str]]] = []
    for (no, _), parsed in zip(numbered, csv.reader(line for _, line in numbered)):
        rows.append((no, parsed))
    return rows


def load_taxonomy(path: str, source_version: str = "") -> Taxonomy:
    """Load and validate a taxonomy CSV.

    Schema: UTF-8, header ``function,family,title``; a row with an empty
    title declares the family-level term; ``#`` starts a comment line.
    Every family must be declared by exactly one empty-title row. Phrase
    collisions across levels resolve by family precedence with a warning
    per collision.
    """
    rows = _read_rows(path)
    if not rows:
        raise InputError(f"{path}: empty taxonomy file")
    header_no, header = rows[0]
    if [h.strip().lower() for h in header] != list(TAXONOMY_HEADER):
        raise InputError(
            f"{path}:{header_no}: bad header {header!r}, expected {','.join(TAXONOMY_HEADER)}"
        )

    families: dict[str, JobFamily] = {}
    family_lines: dict[str, int] = {}
    title_rows: list[tuple[int, JobFunction, str, str]] = []
    for line_no, row in rows[1:]:
        if len(row) != 3:
            raise InputError(f"{path}:{line_no}: expected 3 fields, got {len(row)}")
        function = parse_function(row[0])
        family_tokens = normalize_phrase(row[1])
        if not family_tokens:
            raise InputError(f"{path}:{line_no}: empty family name")
        family_name = " ".join(family_tokens)
        title_raw = row[2].strip()
        if not title_raw:
            if family_name in families:
                raise InputError(
                    f"{path}:{line_no}: family {family_name!r} already declared at line "
                    f"{family_lines[family_name]}"
                )
            families[family_name] = JobFamily(name=family_name, function=function)
            family_lines[family_name] = line_no
        else:
            title_rows.append((line_no, function, family_name, title_raw))

    if not families:
        raise InputError(f"{path}: taxonomy declares zero families")

    titles: list[JobTitle] = []
    seen_titles: set[tuple[str, str]] = set()
    for line_no, function, family_name, title_raw in title_rows:
        family = families.get(family_name)
        if family is None:
            raise InputError(
                f"{path}:{line_no}: title references undeclared family {family_name!r}"
            )
        if family.function is not function:
            raise InputError(
                f"{path}:{line_no}: family {family_name!r} declared under "
                f"{family.function} but title row says {function}"
            )
        title_tokens = normalize_phrase(title_raw)
        if not title_tokens:
            raise InputError(f"{path}:{line_no}: title normalizes to nothing")
        title_name = " ".join(title_tokens)
        if (family_name, title_name) in seen_titles:
            raise InputError(f"{path}:{line_no}: duplicate title {title_name!r} in family {family_name!r}")
        seen_titles.add((family_name, title_name))
        titles.append(JobTitle(name=title_name, family=family))

    candidates: list[Jst] = [
        Jst(phrase=f.name, tokens=normalize_phrase(f.name), level=JstLevel.FAMILY, family=f)
        for f in families.values()
    ]
    candidates.extend(
        Jst(
            phrase=t.name,
            tokens=normalize_phrase(t.name),
            level=JstLevel.TITLE,
            family=t.family,
            title=t,
        )
        for t in titles
    )
    survivors, warnings = resolve_precedence(candidates)
    for message in warnings:
        logger.warning("%s: %s", path, message)

    surviving_titles = tuple(j.title for j in survivors if j.level is JstLevel.TITLE)
    taxonomy = Taxonomy(
        functions=tuple(JobFunction),
        families=tuple(families.values()),
        titles=surviving_titles,
        jsts=tuple(survivors),
        source_version=source_version or path,
        warnings=tuple(warnings),
    )
    if len(taxonomy.jsts) != len(taxonomy.families) + len(taxonomy.titles):
        raise InputError(
            f"{path}: term count {len(taxonomy.jsts)} != families {len(taxonomy.families)}"
            f" + surviving titles {len(taxonomy.titles)}"
        )
    return taxonomy
