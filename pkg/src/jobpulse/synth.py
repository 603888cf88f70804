"""Seeded synthetic-corpus generator with exported ground truth.

Stands in for the unreachable commercial platform: every posting's planted
term set, industry membership, employer identity, and cross-region
repetition is recorded, so each pipeline stage can be checked against
truth exactly.

Design constraints that keep the truth exact:

- attribute counts (function, term count k, industry membership, region)
  are apportioned by largest remainder, not sampled, so configured mixes
  are realized to within one posting per stratum;
- planted term phrases are embedded verbatim with filler words between
  them, and the filler vocabulary is filtered against every taxonomy
  token, so no accidental term run can form;
- terms whose phrase contains another term as a contiguous run are never
  planted (the plant would imply the shorter match);
- employer names only exhibit phenomena the disambiguation rules cover,
  and a division name is only drawn after its parent appears.

Generation is single-threaded and deterministic for a given (seed, config,
taxonomy); the same seed twice yields byte-identical files.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .corpus import (
    DEFAULT_WINDOW_END,
    DEFAULT_WINDOW_START,
    Posting,
    Region,
    normalize_text,
    posting_to_json,
)
from .errors import ContractError, InputError
from .matcher import DEFAULT_ROLE_WORDS, MatchIndex, expand_hyphens
from .taxonomy import JobFunction, Jst, Taxonomy

logger = logging.getLogger(__name__)

TRUTH_HEADER = (
    "job_id",
    "region",
    "off_industry",
    "jsts",
    "employer_name",
    "employer_identity",
    "cross_region_group",
)


def default_region_mix() -> dict[Region, Fraction]:
    return {Region.LA: Fraction(3, 4), Region.SB: Fraction(1, 10), Region.SD: Fraction(3, 20)}


def default_function_mix() -> dict[JobFunction, Fraction]:
    # Engineer-heavy mix with technicians just under a fifth of demand.
    return {
        JobFunction.ENGINEER: Fraction(329, 500),
        JobFunction.TECHNICIAN: Fraction(419, 2000),
        JobFunction.SCIENTIST: Fraction(37, 400),
        JobFunction.OPERATIONAL_SUPPORT: Fraction(1, 25),
    }


def default_k_mix() -> dict[int, Fraction]:
    # Mean terms per posting 2.45, so deduplication removes well over half
    # of the observation rows.
    return {
        1: Fraction(1, 4),
        2: Fraction(3, 10),
        3: Fraction(1, 4),
        4: Fraction(3, 20),
        5: Fraction(1, 20),
    }


_FILLER_CANDIDATES = (
    "join", "our", "team", "and", "support", "daily", "production", "goals",
    "the", "role", "includes", "ownership", "of", "key", "deliverables",
    "with", "training", "provided", "onsite", "schedule", "benefits",
    "growth", "culture", "collaboration", "across", "groups", "tasks",
    "span", "planning", "reviews", "documentation", "audits", "tooling",
    "upkeep", "reporting", "cadence", "weekly", "standups", "mentoring",
    "travel", "minimal", "relocation", "offered", "campus", "facility",
    "badge", "access", "parking", "included", "apply", "today",
)

_NEUTRAL_TITLE_WORDS = (
    "operations", "specialist", "coordinator", "associate", "assistant",
    "planner", "facilitator", "scheduler", "supervisor", "expeditor",
)

_DISTINCTIVE_WORDS = (
    "vortex", "zenith", "apex", "orion", "citadel", "nova", "pinnacle",
    "stellar", "summit", "meridian", "catalyst", "horizon", "vertex",
    "polaris", "arcadia", "trident", "aurora", "cobalt", "onyx", "falcon",
    "griffin", "helios", "juniper", "krypton", "lumen", "mirage", "nimbus",
    "obsidian", "pegasus", "raven", "sable", "tempest", "umbra", "vulcan",
    "willow", "xenon", "yarrow", "zephyr", "ember", "quasar", "talon",
    "borealis", "cascade", "evergreen", "fulcrum", "granite", "harbor",
    "jade", "keystone", "lattice", "monarch", "octave", "prism", "quartz",
    "rubicon", "sentinel", "tundra", "ivory", "cinder", "bastion",
)

_ORG_NOUNS = (
    "dynamics", "technologies", "industries", "laboratories", "devices",
    "instruments", "solutions", "components", "circuits", "fabrication",
    "microsystems", "foundry", "works", "optics", "robotics", "photonics",
    "ventures", "holdings", "partners", "group",
)

_DIVISION_EXTENSIONS = (
    "robotics", "research", "labs", "ventures", "logistics", "energy",
    "aerospace", "digital", "medical", "imaging", "services", "americas",
    "west", "defense", "automation", "packaging",
)

_COLLISION_FIRST_WORDS = ("advanced", "american", "university", "general", "national", "united")

# Share of planted division names whose parent company also appears in the
# stock; the rest extend a withheld parent and correctly stay distinct.
_PARENT_PRESENT_SHARE = Fraction(7, 10)

_SUFFIX_VARIANT_RATE = 0.2
_TITLED_FROM_TERM_RATE = 0.6


def _as_fraction(x) -> Fraction:
    # Floats go through their decimal rendering so 0.15 means 3/20.
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def _round_half_up(x: Fraction) -> int:
    n = x.numerator // x.denominator
    if (x - n) >= Fraction(1, 2):
        n += 1
    return n


def apportion(total: int, weights: dict) -> dict:
    """Split an integer total by fractional weights via largest remainder.

    Deterministic: remainder ties break by weight insertion order. The
    result sums to the total exactly.
    """
    if total < 0:
        raise InputError(f"cannot apportion negative total {total}")
    weight_sum = sum((Fraction(w) for w in weights.values()), start=Fraction(0))
    if weight_sum == 0:
        if total:
            raise InputError("cannot apportion a positive total over zero weights")
        return {k: 0 for k in weights}
    quotas = {k: Fraction(total) * Fraction(w) / weight_sum for k, w in weights.items()}
    counts = {k: q.numerator // q.denominator for k, q in quotas.items()}
    leftover = total - sum(counts.values())
    by_remainder = sorted(
        enumerate(weights),
        key=lambda item: (-(quotas[item[1]] - counts[item[1]]), item[0]),
    )
    for _, key in by_remainder[:leftover]:
        counts[key] += 1
    return counts


@dataclass(frozen=True)
class SynthConfig:
    """Knobs for the generator; defaults encode the target corpus shape."""

    seed: int = 42
    n_postings: int = 5300
    region_mix: dict[Region, Fraction] = field(default_factory=default_region_mix)
    off_industry_rate: Fraction = Fraction(1, 3)
    multi_jst_rate_by_k: dict[int, Fraction] = field(default_factory=default_k_mix)
    function_mix: dict[JobFunction, Fraction] = field(default_factory=default_function_mix)
    division_rate: Fraction = Fraction(3, 20)
    onomastic_collision_rate: Fraction = Fraction(1, 5)
    cross_region_repeat_count: int = 0
    unknown_title_plants: tuple[tuple[str, int], ...] = ()
    industry_token: str = "semiconductor"

    def __post_init__(self) -> None:
        if self.n_postings < 0:
            raise InputError(f"n_postings must be >= 0, got {self.n_postings}")
        if self.cross_region_repeat_count < 0:
            raise InputError("cross_region_repeat_count must be >= 0")
        object.__setattr__(self, "off_industry_rate", _as_fraction(self.off_industry_rate))
        object.__setattr__(self, "division_rate", _as_fraction(self.division_rate))
        object.__setattr__(
            self, "onomastic_collision_rate", _as_fraction(self.onomastic_collision_rate)
        )
        object.__setattr__(
            self, "region_mix", {k: _as_fraction(v) for k, v in self.region_mix.items()}
        )
        object.__setattr__(
            self, "function_mix", {k: _as_fraction(v) for k, v in self.function_mix.items()}
        )
        object.__setattr__(
            self,
            "multi_jst_rate_by_k",
            {k: _as_fraction(v) for k, v in self.multi_jst_rate_by_k.items()},
        )
        object.__setattr__(self, "unknown_title_plants", tuple(self.unknown_title_plants))
        for name, rate in (
            ("off_industry_rate", self.off_industry_rate),
            ("division_rate", self.division_rate),
            ("onomastic_collision_rate", self.onomastic_collision_rate),
        ):
            if not (0 <= rate <= 1):
                raise InputError(f"{name} must be within [0, 1], got {rate}")
        for label, mix in (("region_mix", self.region_mix), ("function_mix", self.function_mix)):
            if any(w < 0 for w in mix.values()):
                raise InputError(f"{label} has a negative weight")
            if sum(mix.values(), start=Fraction(0)) != 1:
                raise InputError(f"{label} must sum to exactly 1")
        if any(k < 1 or k > 5 for k in self.multi_jst_rate_by_k):
            raise InputError("multi_jst_rate_by_k keys must lie in 1..5")
        if any(w < 0 for w in self.multi_jst_rate_by_k.values()):
            raise InputError("multi_jst_rate_by_k has a negative weight")
        if sum(self.multi_jst_rate_by_k.values(), start=Fraction(0)) != 1:
            raise InputError("multi_jst_rate_by_k must sum to exactly 1")
        for phrase, count in self.unknown_title_plants:
            if not normalize_text(phrase):
                raise InputError(f"unknown title plant {phrase!r} normalizes to nothing")
            if count < 0:
                raise InputError(f"plant count for {phrase!r} must be >= 0")


@dataclass(frozen=True, slots=True)
class TruthRow:
    """Planted facts for one emitted posting."""

    job_id: str
    region: Region
    off_industry: bool
    jsts: tuple[str, ...]
    employer_name: str
    employer_identity: str
    cross_region_group: int | None = None


@dataclass(frozen=True)
class GroundTruth:
    rows: tuple[TruthRow, ...]

    def by_unit(self) -> dict[tuple[str, Region], TruthRow]:
        return {(r.job_id, r.region): r for r in self.rows}


@dataclass(frozen=True)
class EmployerIdentity:
    """One true company: a parent display name plus any division display names."""

    key: str
    parent_display: str
    division_displays: tuple[str, ...] = ()

    def all_displays(self) -> tuple[str, ...]:
        return (self.parent_display,) + self.division_displays


@dataclass(frozen=True)
class EmployerStock:
    identities: tuple[EmployerIdentity, ...]

    def all_names(self) -> list[tuple[str, str]]:
        """(raw display, identity key) for every name in the stock."""
        return [(d, ident.key) for ident in self.identities for d in ident.all_displays()]


def _display(tokens: tuple[str, ...]) -> str:
    return " ".join(t.capitalize() for t in tokens)


class _NameRegistry:
    """Tracks claimed token sequences; forbids cross-identity prefix relations."""

    def __init__(self) -> None:
        self._by_first: dict[str, list[tuple[tuple[str, ...], str]]] = {}

    def conflicts(self, seq: tuple[str, ...], identity: str) -> bool:
        for other, owner in self._by_first.get(seq[0], ()):
            if owner == identity:
                continue
            shorter, longer = (other, seq) if len(other) <= len(seq) else (seq, other)
            if longer[: len(shorter)] == shorter:
                return True
        return False

    def claim(self, seq: tuple[str, ...], identity: str) -> None:
        self._by_first.setdefault(seq[0], []).append((seq, identity))


def build_employer_stock(
    rng: random.Random,
    n_names: int,
    division_rate: Fraction,
    collision_rate: Fraction,
) -> EmployerStock:
    """Build a raw-name stock with planted divisions and onomastic collisions.

    ``n_names`` counts raw names, not companies: a division name belongs to
    its parent's identity. A fixed share of division names has the parent
    present (those merge); the rest extend a withheld parent and stay
    distinct. Collision names start with a common first word but diverge at
    the second, so they must split.
    """
    if n_names < 1:
        raise InputError(f"employer stock needs at least one name, got {n_names}")
    division_rate = _as_fraction(division_rate)
    collision_rate = _as_fraction(collision_rate)
    n_divisions = _round_half_up(division_rate * n_names)
    n_base = n_names - n_divisions
    if n_base < 1:
        raise InputError("division_rate leaves no base companies in the stock")
    mergeable = min(_round_half_up(_PARENT_PRESENT_SHARE * n_divisions), n_base)
    orphans = n_divisions - mergeable
    n_collide = _round_half_up(collision_rate * n_base)

    registry = _NameRegistry()
    identities: list[EmployerIdentity] = []
    salt = 0

    def invent(identity: str, prefix: tuple[str, ...], pools: list[tuple[str, ...]]) -> tuple[str, ...]:
        nonlocal salt
        for _ in range(32):
            candidate = prefix + tuple(rng.choice(pool) for pool in pools)
            if len(set(candidate)) == len(candidate) and not registry.conflicts(candidate, identity):
                return candidate
        for _ in range(32):
            candidate = prefix + (rng.choice(_DISTINCTIVE_WORDS), rng.choice(_DISTINCTIVE_WORDS), rng.choice(_ORG_NOUNS))
            if len(set(candidate)) == len(candidate) and not registry.conflicts(candidate, identity):
                return candidate
        for _ in range(10_000):
            salt += 1
            candidate = prefix + tuple(rng.choice(pool) for pool in pools) + (f"x{salt}",)
            if not registry.conflicts(candidate, identity):
                return candidate
        raise ContractError("employer name stock exhausted")

    base_seqs: list[tuple[str, ...]] = []
    for i in range(n_base):
        ident = f"id{i}"
        if i < n_collide:
            first = _COLLISION_FIRST_WORDS[i % len(_COLLISION_FIRST_WORDS)]
            seq = invent(ident, (first,), [_DISTINCTIVE_WORDS, _ORG_NOUNS])
        elif rng.random() < 0.15:
            seq = invent(ident, (), [_DISTINCTIVE_WORDS])
        else:
            seq = invent(ident, (), [_DISTINCTIVE_WORDS, _ORG_NOUNS])
        registry.claim(seq, ident)
        base_seqs.append(seq)
        identities.append(EmployerIdentity(key=" ".join(seq), parent_display=_display(seq)))

    parent_order = list(range(n_base))
    rng.shuffle(parent_order)
    divisions_by_parent: dict[int, list[str]] = {}
    for d in range(mergeable):
        parent_idx = parent_order[d % n_base]
        ident = f"id{parent_idx}"
        parent_seq = base_seqs[parent_idx]
        n_ext = 1 if rng.random() < 0.7 else 2
        seq = invent(ident, parent_seq, [_DIVISION_EXTENSIONS] * n_ext)
        registry.claim(seq, ident)
        divisions_by_parent.setdefault(parent_idx, []).append(_display(seq))
    for idx, divs in divisions_by_parent.items():
        identities[idx] = EmployerIdentity(
            key=identities[idx].key,
            parent_display=identities[idx].parent_display,
            division_displays=tuple(divs),
        )

    for o in range(orphans):
        ghost_id = f"ghost{o}"
        ghost = invent(ghost_id, (), [_DISTINCTIVE_WORDS, _ORG_NOUNS])
        registry.claim(ghost, ghost_id)  # withheld parent blocks reuse of its prefix
        seq = invent(ghost_id, ghost, [_DIVISION_EXTENSIONS])
        registry.claim(seq, ghost_id)
        identities.append(EmployerIdentity(key=" ".join(seq), parent_display=_display(seq)))

    return EmployerStock(identities=tuple(identities))


def plantable_jsts(taxonomy: Taxonomy) -> dict[JobFunction, list[Jst]]:
    """Terms safe to plant: none of their phrases contains another term."""
    expanded = {jst: expand_hyphens(jst.tokens) for jst in taxonomy.jsts}

    def contains(haystack: tuple[str, ...], needle: tuple[str, ...]) -> bool:
        n = len(needle)
        return any(haystack[i : i + n] == needle for i in range(len(haystack) - n + 1))

    pools: dict[JobFunction, list[Jst]] = {f: [] for f in JobFunction}
    for jst, tokens in expanded.items():
        nested = any(
            other is not jst and contains(tokens, other_tokens)
            for other, other_tokens in expanded.items()
        )
        if not nested:
            pools[jst.family.function].append(jst)
    return pools


def _safe_fillers(taxonomy: Taxonomy, industry_token: str) -> list[str]:
    forbidden = {t for jst in taxonomy.jsts for t in expand_hyphens(jst.tokens)}
    forbidden.update(DEFAULT_ROLE_WORDS)
    forbidden.add(industry_token)
    fillers = [w for w in _FILLER_CANDIDATES if w not in forbidden]
    if len(fillers) < 10:
        raise InputError("taxonomy tokens overlap the filler vocabulary too heavily")
    return fillers


class _Generator:
    def __init__(self, config: SynthConfig, taxonomy: Taxonomy) -> None:
        self.config = config
        self.taxonomy = taxonomy
        self.rng = random.Random(config.seed)
        tokens = normalize_text(config.industry_token)
        if len(tokens) != 1:
            raise InputError(f"industry token must be one token, got {config.industry_token!r}")
        self.industry_token = tokens[0]
        self.fillers = _safe_fillers(taxonomy, self.industry_token)
        self.neutral_words = list(_NEUTRAL_TITLE_WORDS)
        self.pools = plantable_jsts(taxonomy)
        # A term containing the industry token would leak it into postings
        # that must stay off-industry.
        self.pools_off = {
            f: [j for j in pool if self.industry_token not in expand_hyphens(j.tokens)]
            for f, pool in self.pools.items()
        }
        self.index = MatchIndex(taxonomy)
        if self.index.scan(expand_hyphens(tokens)):
            raise InputError(
                f"industry token {config.industry_token!r} is itself a taxonomy term; "
                "generated postings could not stay off-industry"
            )

    def _filler(self, low: int, high: int) -> list[str]:
        return [self.rng.choice(self.fillers) for _ in range(self.rng.randint(low, high))]

    def _description(self, jsts: list[Jst], with_token: bool) -> str:
        words = self._filler(2, 4)
        for jst in jsts:
            words.extend(jst.tokens)
            words.extend(self._filler(1, 3))
        if with_token:
            words.append(self.industry_token)
            words.extend(self._filler(1, 2))
        return " ".join(words)

    def _employer_description(self, with_token: bool) -> str:
        words = self._filler(4, 6)
        if with_token:
            words.append(self.industry_token)
            words.extend(self._filler(1, 2))
        return " ".join(words)

    def _neutral_title(self) -> str:
        words = self.rng.sample(self.neutral_words, self.rng.randint(2, 3))
        return " ".join(w.capitalize() for w in words)

    def _retrieved_at(self) -> dt.date:
        span = (DEFAULT_WINDOW_END - DEFAULT_WINDOW_START).days
        return DEFAULT_WINDOW_START + dt.timedelta(days=self.rng.randrange(span + 1))

    def _build_slots(self) -> list[tuple[JobFunction, int, bool, Region]]:
        config = self.config
        slots: list[tuple[JobFunction, int, bool, Region]] = []
        function_counts = apportion(config.n_postings, config.function_mix)
        for function, n_f in function_counts.items():
            if not n_f:
                continue
            if not self.pools[function]:
                raise InputError(f"no plantable terms for function {function}")
            k_counts = apportion(n_f, config.multi_jst_rate_by_k)
            split = apportion(
                n_f, {False: 1 - config.off_industry_rate, True: config.off_industry_rate}
            )
            for off in (False, True):
                m = split[off]
                if not m:
                    continue
                if off and not self.pools_off[function]:
                    raise InputError(
                        f"every plantable term for {function} contains the industry token; "
                        "cannot generate off-industry postings"
                    )
                k_quota = apportion(m, {k: Fraction(c) for k, c in k_counts.items() if c})
                region_counts = apportion(m, config.region_mix)
                region_deck = [r for r, c in region_counts.items() for _ in range(c)]
                self.rng.shuffle(region_deck)
                pos = 0
                for k, cnt in sorted(k_quota.items()):
                    for _ in range(cnt):
                        slots.append((function, k, off, region_deck[pos]))
                        pos += 1
        self.rng.shuffle(slots)
        return slots

    def run(self) -> tuple[list[Posting], GroundTruth]:
        config = self.config
        rng = self.rng
        slots = self._build_slots()

        # Sized so on-industry demand lands near 3.6 units per employer.
        n_names = max(1, _round_half_up(Fraction(config.n_postings * 10, 54)))
        stock = build_employer_stock(
            rng, n_names, config.division_rate, config.onomastic_collision_rate
        )
        draw_counts: dict[str, int] = {}

        def draw_employer() -> tuple[str, str]:
            ident = stock.identities[rng.randrange(len(stock.identities))]
            seen = draw_counts.get(ident.key, 0)
            draw_counts[ident.key] = seen + 1
            if seen == 0 or not ident.division_displays:
                display = ident.parent_display
            else:
                display = rng.choice(ident.all_displays())
            if rng.random() < _SUFFIX_VARIANT_RATE:
                display = f"{display} Inc"
            return display, ident.key

        postings: list[Posting] = []
        rows: list[TruthRow] = []
        next_id = 1

        def job_id() -> str:
            nonlocal next_id
            value = f"J{next_id:07d}"
            next_id += 1
            return value

        for function, k, off, region in slots:
            pool = self.pools_off[function] if off else self.pools[function]
            jsts = sorted(rng.sample(pool, min(k, len(pool))), key=lambda j: j.phrase)
            placement = -1 if off else rng.randrange(3)  # 0 job desc, 1 employer desc, 2 both
            employer_name, identity = draw_employer()
            title = (
                jsts[0].phrase.title()
                if rng.random() < _TITLED_FROM_TERM_RATE
                else self._neutral_title()
            )
            posting = Posting(
                job_id=job_id(),
                title=title,
                job_description=self._description(jsts, with_token=placement in (0, 2)),
                employer_name=employer_name,
                employer_description=self._employer_description(with_token=placement in (1, 2)),
                region=region,
                retrieved_at=self._retrieved_at(),
            )
            postings.append(posting)
            rows.append(
                TruthRow(
                    job_id=posting.job_id,
                    region=region,
                    off_industry=off,
                    jsts=tuple(j.phrase for j in jsts),
                    employer_name=employer_name,
                    employer_identity=identity,
                )
            )

        for phrase, count in config.unknown_title_plants:
            tokens = normalize_text(phrase)
            if self.index.scan(expand_hyphens(tokens)):
                raise InputError(
                    f"unknown title plant {phrase!r} contains an existing taxonomy term"
                )
            for region, cnt in apportion(count, config.region_mix).items():
                for _ in range(cnt):
                    employer_name, identity = draw_employer()
                    posting = Posting(
                        job_id=job_id(),
                        title=" ".join(t.capitalize() for t in tokens),
                        job_description=self._description([], with_token=True),
                        employer_name=employer_name,
                        employer_description=self._employer_description(with_token=False),
                        region=region,
                        retrieved_at=self._retrieved_at(),
                    )
                    postings.append(posting)
                    rows.append(
                        TruthRow(
                            job_id=posting.job_id,
                            region=region,
                            off_industry=False,
                            jsts=(),
                            employer_name=employer_name,
                            employer_identity=identity,
                        )
                    )

        if config.cross_region_repeat_count:
            eligible = [i for i, row in enumerate(rows) if row.jsts and not row.off_industry]
            if len(eligible) < config.cross_region_repeat_count:
                raise InputError(
                    f"cannot plant {config.cross_region_repeat_count} cross-region repeats: "
                    f"only {len(eligible)} eligible postings"
                )
            region_cycle = list(Region)
            for group_no, source_idx in enumerate(
                sorted(rng.sample(eligible, config.cross_region_repeat_count)), start=1
            ):
                source = postings[source_idx]
                source_row = rows[source_idx]
                target = region_cycle[(region_cycle.index(source.region) + 1) % len(region_cycle)]
                copy = Posting(
                    job_id=job_id(),
                    title=source.title,
                    job_description=source.job_description,
                    employer_name=source.employer_name,
                    employer_description=source.employer_description,
                    region=target,
                    retrieved_at=source.retrieved_at,
                )
                postings.append(copy)
                rows[source_idx] = TruthRow(
                    job_id=source_row.job_id,
                    region=source_row.region,
                    off_industry=source_row.off_industry,
                    jsts=source_row.jsts,
                    employer_name=source_row.employer_name,
                    employer_identity=source_row.employer_identity,
                    cross_region_group=group_no,
                )
                rows.append(
                    TruthRow(
                        job_id=copy.job_id,
                        region=target,
                        off_industry=source_row.off_industry,
                        jsts=source_row.jsts,
                        employer_name=source_row.employer_name,
                        employer_identity=source_row.employer_identity,
                        cross_region_group=group_no,
                    )
                )

        self._self_check(postings, rows)
        return postings, GroundTruth(rows=tuple(rows))

    def _self_check(self, postings: list[Posting], rows: list[TruthRow]) -> None:
        """Planted truth must agree with exact matching semantics by construction."""
        token = self.industry_token
        for posting, row in zip(postings, rows):
            hits = self.index.scan(normalize_text(posting.title)) | self.index.scan(
                normalize_text(posting.job_description)
            )
            if sorted(j.phrase for j in hits) != sorted(row.jsts):
                raise ContractError(
                    f"generator self-check failed for {posting.job_id}: planted "
                    f"{sorted(row.jsts)} but matching sees {sorted(j.phrase for j in hits)}"
                )
            on_industry = token in expand_hyphens(
                normalize_text(posting.job_description)
            ) or token in expand_hyphens(normalize_text(posting.employer_description))
            if on_industry == row.off_industry:
                raise ContractError(
                    f"generator self-check failed for {posting.job_id}: industry token "
                    f"presence contradicts the off_industry flag"
                )


def build_corpus(config: SynthConfig, taxonomy: Taxonomy) -> tuple[list[Posting], GroundTruth]:
    """Generate postings and their ground truth in memory."""
    return _Generator(config, taxonomy).run()


def render_truth_csv(truth: GroundTruth) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRUTH_HEADER)
    for row in truth.rows:
        writer.writerow(
            [
                row.job_id,
                row.region.value,
                "1" if row.off_industry else "0",
                "|".join(row.jsts),
                row.employer_name,
                row.employer_identity,
                row.cross_region_group if row.cross_region_group is not None else "",
            ]
        )
    return buf.getvalue()


def load_ground_truth(path: str | Path) -> GroundTruth:
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot read truth file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != TRUTH_HEADER:
            raise InputError(f"{path}: bad truth header {header!r}")
        rows = []
        for record in reader:
            job_id, region, off, jsts, employer, identity, group = record
            rows.append(
                TruthRow(
                    job_id=job_id,
                    region=Region(region),
                    off_industry=off == "1",
                    jsts=tuple(jsts.split("|")) if jsts else (),
                    employer_name=employer,
                    employer_identity=identity,
                    cross_region_group=int(group) if group else None,
                )
            )
    return GroundTruth(rows=tuple(rows))


@dataclass(frozen=True)
class GenerateResult:
    posting_paths: dict[Region, Path]
    truth_path: Path


def generate(config: SynthConfig, taxonomy: Taxonomy, out_dir: str | Path) -> GenerateResult:
    """Generate the corpus and write one posting file per region plus truth.csv."""
    from .report import write_text_atomic

    postings, truth = build_corpus(config, taxonomy)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[Region, Path] = {}
    for region in Region:
        lines = [posting_to_json(p) for p in postings if p.region is region]
        path = out / f"{region.value.lower()}.jsonl"
        write_text_atomic(path, "\n".join(lines) + ("\n" if lines else ""))
        paths[region] = path
    truth_path = out / "truth.csv"
    write_text_atomic(truth_path, render_truth_csv(truth))
    return GenerateResult(posting_paths=paths, truth_path=truth_path)
