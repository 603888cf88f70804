"""Command-line pipeline: ingest -> filter -> match -> dedup -> report.

One executable with subcommands; every run writes its artifacts plus a
machine-readable manifest (inputs, effective config, content hashes,
counts) to the output directory. Stage outputs are files so each step of
the funnel can be inspected on its own.

Exit codes: 0 success; 1 invalid configuration or input files; 2 a data
contract was violated (for example a duplicate (job_id, region) record).
Errors print as single-line diagnostics on standard error.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import hashlib
import io
import logging
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from . import corpus as corpus_mod
from . import dedup as dedup_mod
from . import employers as employers_mod
from . import matcher as matcher_mod
from . import report as report_mod
from . import synth as synth_mod
from .corpus import CollectionWindow, Corpus, Posting, Region
from .errors import ContractError, InputError, JobPulseError
from .taxonomy import JobFunction, Taxonomy, load_taxonomy

logger = logging.getLogger(__name__)

ENV_CONFIG = "JOBPULSE_CONFIG"
MANIFEST_NAME = "manifest.txt"

_DATA_DIR = Path(__file__).parent / "data"
DEFAULT_TAXONOMY = _DATA_DIR / "taxonomy.csv"
DEFAULT_DICTIONARY = _DATA_DIR / "name_dictionary.txt"

_FUNCTION_SLUGS = {
    JobFunction.SCIENTIST: "scientist",
    JobFunction.ENGINEER: "engineer",
    JobFunction.TECHNICIAN: "technician",
    JobFunction.OPERATIONAL_SUPPORT: "operational_support",
}


@dataclass(frozen=True)
class PipelineConfig:
    """Effective run configuration after merging defaults, file, and flags."""

    taxonomy_path: str = str(DEFAULT_TAXONOMY)
    dictionary_path: str = str(DEFAULT_DICTIONARY)
    industry_token: str = "semiconductor"
    filter_mode: str = matcher_mod.FILTER_ANY_FIELD
    regions: tuple[Region, ...] = tuple(Region)
    window_start: dt.date = corpus_mod.DEFAULT_WINDOW_START
    window_end: dt.date = corpus_mod.DEFAULT_WINDOW_END
    out_dir: str = "out"
    format: str = "csv"
    min_count: int = matcher_mod.DEFAULT_MIN_COUNT
    top_k: int = 3

    def validate(self) -> None:
        if not Path(self.taxonomy_path).is_file():
            raise InputError(f"taxonomy file not found: {self.taxonomy_path}")
        if not Path(self.dictionary_path).is_file():
            raise InputError(f"dictionary file not found: {self.dictionary_path}")
        if self.filter_mode not in matcher_mod.FILTER_MODES:
            raise InputError(f"filter_mode must be one of {matcher_mod.FILTER_MODES}")
        if not self.regions:
            raise InputError("regions must name at least one of LA, SB, SD")
        if self.format not in ("csv", "text"):
            raise InputError(f"format must be csv or text, got {self.format!r}")
        if self.min_count < 1:
            raise InputError(f"min_count must be positive, got {self.min_count}")
        if self.top_k < 1:
            raise InputError(f"top_k must be positive, got {self.top_k}")
        if self.window_start > self.window_end:
            raise InputError("window_start is after window_end")
        matcher_mod.validate_industry_token(self.industry_token)

    def as_manifest_items(self) -> list[tuple[str, str]]:
        return [
            ("config.taxonomy", self.taxonomy_path),
            ("config.dictionary", self.dictionary_path),
            ("config.industry_token", self.industry_token),
            ("config.filter_mode", self.filter_mode),
            ("config.regions", ",".join(r.value for r in self.regions)),
            ("config.window_start", self.window_start.isoformat()),
            ("config.window_end", self.window_end.isoformat()),
            ("config.format", self.format),
            ("config.min_count", str(self.min_count)),
            ("config.top_k", str(self.top_k)),
        ]


CONFIG_FILE_KEYS = (
    "taxonomy",
    "dictionary",
    "industry_token",
    "filter_mode",
    "regions",
    "window_start",
    "window_end",
    "out_dir",
    "format",
    "min_count",
    "top_k",
)


def parse_config_file(path: str) -> dict[str, str]:
    """Parse the line-oriented ``key = value`` config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise InputError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in CONFIG_FILE_KEYS:
            raise InputError(f"{path}:{line_no}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _parse_regions(text: str) -> tuple[Region, ...]:
    regions = []
    for part in text.split(","):
        part = part.strip()
        if part:
            regions.append(corpus_mod.parse_region(part))
    if not regions:
        raise InputError("regions must name at least one of LA, SB, SD")
    return tuple(dict.fromkeys(regions))


def _parse_date(text: str, label: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise InputError(f"{label} must be YYYY-MM-DD, got {text!r}") from None


def _parse_int(text: str, label: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InputError(f"{label} must be an integer, got {text!r}") from None


def build_config(args: argparse.Namespace) -> PipelineConfig:
    """Merge defaults, the config file, and command-line flags."""
    config = PipelineConfig()
    config_path = args.config or os.environ.get(ENV_CONFIG)
    if config_path:
        values = parse_config_file(config_path)
        if "taxonomy" in values:
            config = replace(config, taxonomy_path=values["taxonomy"])
        if "dictionary" in values:
            config = replace(config, dictionary_path=values["dictionary"])
        if "industry_token" in values:
            config = replace(config, industry_token=values["industry_token"])
        if "filter_mode" in values:
            config = replace(config, filter_mode=values["filter_mode"])
        if "regions" in values:
            config = replace(config, regions=_parse_regions(values["regions"]))
        if "window_start" in values:
            config = replace(config, window_start=_parse_date(values["window_start"], "window_start"))
        if "window_end" in values:
            config = replace(config, window_end=_parse_date(values["window_end"], "window_end"))
        if "out_dir" in values:
            config = replace(config, out_dir=values["out_dir"])
        if "format" in values:
            config = replace(config, format=values["format"])
        if "min_count" in values:
            config = replace(config, min_count=_parse_int(values["min_count"], "min_count"))
        if "top_k" in values:
            config = replace(config, top_k=_parse_int(values["top_k"], "top_k"))
    if getattr(args, "taxonomy", None):
        config = replace(config, taxonomy_path=args.taxonomy)
    if getattr(args, "dictionary", None):
        config = replace(config, dictionary_path=args.dictionary)
    if getattr(args, "industry_token", None):
        config = replace(config, industry_token=args.industry_token)
    if getattr(args, "filter_mode", None):
        config = replace(config, filter_mode=args.filter_mode)
    if getattr(args, "regions", None):
        config = replace(config, regions=_parse_regions(args.regions))
    if getattr(args, "window_start", None):
        config = replace(config, window_start=_parse_date(args.window_start, "window_start"))
    if getattr(args, "window_end", None):
        config = replace(config, window_end=_parse_date(args.window_end, "window_end"))
    if getattr(args, "out", None):
        config = replace(config, out_dir=args.out)
    if getattr(args, "format", None):
        config = replace(config, format=args.format)
    if getattr(args, "min_count", None) is not None:
        config = replace(config, min_count=args.min_count)
    if getattr(args, "top_k", None) is not None:
        config = replace(config, top_k=args.top_k)
    config.validate()
    return config


class _Run:
    """Accumulates artifacts, counts, and inputs for one subcommand run."""

    def __init__(self, subcommand: str, config: PipelineConfig) -> None:
        self.subcommand = subcommand
        self.config = config
        self.out_dir = Path(config.out_dir)
        self.items: list[tuple[str, str]] = [("subcommand", subcommand)]
        self.items.extend(config.as_manifest_items())
        self._artifact_names: list[str] = []

    def record_inputs(self, paths: list[str]) -> None:
        for i, path in enumerate(paths):
            self.items.append((f"input.{i}.path", str(path)))
            self.items.append((f"input.{i}.sha256", _sha256_file(path)))

    def count(self, name: str, value) -> None:
        self.items.append((f"count.{name}", str(value)))

    def note(self, name: str, value) -> None:
        self.items.append((name, str(value)))

    def write_artifact(self, name: str, content: str) -> Path:
        path = self.out_dir / name
        report_mod.write_text_atomic(path, content)
        self.items.append((f"artifact.{name}.sha256", _sha256_text(content)))
        self._artifact_names.append(name)
        return path

    def finish(self) -> Path:
        config_block = "".join(f"{k} = {v}\n" for k, v in sorted(self.config.as_manifest_items()))
        self.items.append(("config_hash", hashlib.sha256(config_block.encode("utf-8")).hexdigest()))
        body = "".join(f"{key} = {value}\n" for key, value in sorted(self.items))
        path = self.out_dir / MANIFEST_NAME
        report_mod.write_text_atomic(path, body)
        return path


def _sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                digest.update(chunk)
    except OSError as exc:
        raise InputError(f"cannot read input file {path}: {exc}") from exc
    return digest.hexdigest()


def _sha256_text(content: str) -> str:
    return hashlib.sha256(content.encode("utf-8")).hexdigest()


def _load_corpus(config: PipelineConfig, inputs: list[str], run: _Run):
    corpus, diagnostics = corpus_mod.load_postings(
        inputs, CollectionWindow(config.window_start, config.window_end)
    )
    wanted = set(config.regions)
    kept = [p for p in corpus.postings if p.region in wanted]
    out_of_scope = len(corpus.postings) - len(kept)
    run.count("postings_ingested", len(kept))
    run.count("records_rejected", len(diagnostics))
    run.count("postings_out_of_scope", out_of_scope)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "line", "reason"])
    writer.writerows([d.source, d.line_no, d.reason] for d in diagnostics)
    run.write_artifact("diagnostics.csv", buf.getvalue())
    return Corpus(postings=tuple(kept), sources=corpus.sources), diagnostics


def _csv_table(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


@dataclass
class _PipelineData:
    corpus: Corpus
    taxonomy: Taxonomy
    records_all: list[matcher_mod.MatchRecord]
    filtered_postings: list[Posting]
    records_filtered: list[matcher_mod.MatchRecord]
    raw_observations: int
    filtered_observations: int


def _run_match_stages(config: PipelineConfig, corpus: Corpus, run: _Run) -> _PipelineData:
    taxonomy = load_taxonomy(config.taxonomy_path)
    records_all = matcher_mod.match_corpus(corpus, taxonomy)
    filtered_postings = matcher_mod.filter_corpus(corpus, config.industry_token, config.filter_mode)
    filtered_keys = {(p.job_id, p.region) for p in filtered_postings}
    records_filtered = [r for r in records_all if (r.job_id, r.region) in filtered_keys]
    raw_obs = sum(len(r.matched_jsts) for r in records_all)
    filtered_obs = sum(len(r.matched_jsts) for r in records_filtered)
    run.count("raw_observations", raw_obs)
    run.count("filtered_observations", filtered_obs)
    return _PipelineData(
        corpus=corpus,
        taxonomy=taxonomy,
        records_all=records_all,
        filtered_postings=filtered_postings,
        records_filtered=records_filtered,
        raw_observations=raw_obs,
        filtered_observations=filtered_obs,
    )


def _render_matches_csv(records: list[matcher_mod.MatchRecord]) -> str:
    entries = []
    for record in records:
        for jst in record.matched_jsts:
            entries.append(
                (
                    record.job_id,
                    record.region.value,
                    jst.phrase,
                    jst.level.value,
                    "1" if jst in record.matched_in_title else "0",
                )
            )
    entries.sort()
    return _csv_table(["job_id", "region", "phrase", "level", "in_title"], entries)


def _render_cross_region_csv(report: dedup_mod.CrossRegionReport) -> str:
    rows = []
    for group_no, group in enumerate(report.groups, start=1):
        for job_id, region in group.members:
            rows.append([group_no, job_id, region.value, group.title, group.employer_name])
    return _csv_table(["group", "job_id", "region", "title", "employer_name"], rows)


def _ext(config: PipelineConfig) -> str:
    return "csv" if config.format == "csv" else "txt"


def _demand_content(table, config: PipelineConfig) -> str:
    if config.format == "csv":
        return report_mod.render_demand_csv(table)
    return report_mod.render_demand_text(table)


def cmd_ingest(config: PipelineConfig, args: argparse.Namespace) -> int:
    run = _Run("ingest", config)
    run.record_inputs(args.input)
    corpus, diagnostics = _load_corpus(config, args.input, run)
    run.finish()
    print(f"ingested {len(corpus.postings)} postings, rejected {len(diagnostics)} records")
    return 2 if diagnostics else 0


def cmd_match(config: PipelineConfig, args: argparse.Namespace) -> int:
    run = _Run("match", config)
    run.record_inputs(args.input)
    corpus, diagnostics = _load_corpus(config, args.input, run)
    data = _run_match_stages(config, corpus, run)
    run.count("matched_postings", len(data.records_all))
    run.write_artifact("matches.csv", _render_matches_csv(data.records_all))
    run.finish()
    print(f"matched {len(data.records_all)} of {len(corpus.postings)} postings")
    return 2 if diagnostics else 0


def cmd_dedup(config: PipelineConfig, args: argparse.Namespace) -> int:
    run = _Run("dedup", config)
    run.record_inputs(args.input)
    corpus, diagnostics = _load_corpus(config, args.input, run)
    data = _run_match_stages(config, corpus, run)
    ledger = dedup_mod.weight_assignments(data.records_filtered)
    cross = dedup_mod.cross_region_report(data.filtered_postings)
    run.count("demand_units", ledger.unit_count)
    run.count("cross_region_groups", len(cross))
    run.write_artifact("ledger.csv", dedup_mod.render_ledger_csv(ledger))
    run.write_artifact("cross_region.csv", _render_cross_region_csv(cross))
    run.finish()
    print(f"{ledger.unit_count} demand units from {data.filtered_observations} observations")
    return 2 if diagnostics else 0


def cmd_disambiguate(config: PipelineConfig, args: argparse.Namespace) -> int:
    run = _Run("disambiguate", config)
    run.record_inputs(args.input)
    corpus, diagnostics = _load_corpus(config, args.input, run)
    filtered = matcher_mod.filter_corpus(corpus, config.industry_token, config.filter_mode)
    dictionary = employers_mod.load_dictionary(config.dictionary_path)
    names = [p.employer_name for p in filtered]
    mapping, rejected = employers_mod.canonicalize(names, dictionary)
    raw_count = len({p.employer_name for p in filtered} - set(rejected))
    canonical_count = len({e.canonical_name for e in mapping.values()})
    run.count("employers_raw", raw_count)
    run.count("employers_canonical", canonical_count)
    run.count("employer_names_rejected", len(rejected))
    run.write_artifact("employer_mapping.csv", employers_mod.render_mapping_csv(mapping))
    run.finish()
    print(f"disambiguated {raw_count} raw employer names into {canonical_count}")
    return 2 if diagnostics else 0


def cmd_discover(config: PipelineConfig, args: argparse.Namespace) -> int:
    run = _Run("discover", config)
    run.record_inputs(args.input)
    corpus, diagnostics = _load_corpus(config, args.input, run)
    taxonomy = load_taxonomy(config.taxonomy_path)
    filtered = matcher_mod.filter_corpus(corpus, config.industry_token, config.filter_mode)
    candidates = matcher_mod.discover_candidate_titles(filtered, taxonomy, config.min_count)
    run.count("discovery_candidates", len(candidates))
    run.write_artifact("discovery.csv", _csv_table(["phrase", "count"], candidates))
    run.finish()
    print(f"{len(candidates)} candidate titles at min_count={config.min_count}")
    return 2 if diagnostics else 0


def cmd_report(config: PipelineConfig, args: argparse.Namespace) -> int:
    run = _Run("report", config)
    run.record_inputs(args.input)
    corpus, diagnostics = _load_corpus(config, args.input, run)
    data = _run_match_stages(config, corpus, run)
    ledger = dedup_mod.weight_assignments(data.records_filtered)
    cross = dedup_mod.cross_region_report(data.filtered_postings)
    run.count("demand_units", ledger.unit_count)
    run.count("cross_region_groups", len(cross))

    funnel = report_mod.build_funnel(
        [data.raw_observations, data.filtered_observations, ledger.unit_count]
    )
    ext = _ext(config)
    if config.format == "csv":
        run.write_artifact(f"funnel.{ext}", report_mod.render_funnel_csv(funnel))
    else:
        run.write_artifact(f"funnel.{ext}", report_mod.render_funnel_text(funnel))

    function_table = report_mod.demand_by("function", ledger, data.taxonomy)
    run.write_artifact(f"demand_function.{ext}", _demand_content(function_table, config))
    family_table = report_mod.demand_by("family", ledger, data.taxonomy)
    run.write_artifact(f"demand_family.{ext}", _demand_content(family_table, config))
    region_table = report_mod.demand_by("region", ledger, data.taxonomy)
    run.write_artifact(f"demand_region.{ext}", _demand_content(region_table, config))
    for function, slug in _FUNCTION_SLUGS.items():
        table = report_mod.demand_by("title", ledger, data.taxonomy, function=function)
        run.write_artifact(f"demand_{slug}.{ext}", _demand_content(table, config))

    totals = {row.label: row.total for row in function_table.rows}
    tech = totals.get(JobFunction.TECHNICIAN.value, Fraction(0))
    eng = totals.get(JobFunction.ENGINEER.value, Fraction(0))
    if tech > 0 and eng > 0:
        r = report_mod.ratio(tech, eng)
        run.note("ratio.technician_engineer.decimal", r.decimal_label)
        run.note("ratio.technician_engineer.display", r.ratio_label)
        ratio_line = f"technician:engineer = {r.decimal_label} ({r.ratio_label})"
    else:
        ratio_line = "technician:engineer ratio unavailable (a total is zero)"

    dictionary = employers_mod.load_dictionary(config.dictionary_path)
    mapping, rejected = employers_mod.canonicalize(
        [p.employer_name for p in data.filtered_postings], dictionary
    )
    unit_employers = {(p.job_id, p.region): p.employer_name for p in data.filtered_postings}
    stats = employers_mod.employer_stats(ledger, mapping, unit_employers, config.top_k)
    run.count("employers_raw", stats.raw_name_count)
    run.count("employers_canonical", stats.employer_count)
    run.count("employer_names_rejected", len(rejected))
    run.note("employers.mean_units", stats.mean_label)
    run.note("employers.top_share", stats.top_share_label)
    if config.format == "csv":
        run.write_artifact("employers.csv", employers_mod.render_employers_csv(stats))
    else:
        run.write_artifact("employers.txt", employers_mod.render_employers_text(stats))
    run.write_artifact("employer_mapping.csv", employers_mod.render_mapping_csv(mapping))
    run.write_artifact("ledger.csv", dedup_mod.render_ledger_csv(ledger))
    run.write_artifact("cross_region.csv", _render_cross_region_csv(cross))
    run.finish()

    print(report_mod.render_funnel_text(funnel), end="")
    print(ratio_line)
    print(
        f"{stats.employer_count} employers, mean {stats.mean_label} units each, "
        f"top {stats.top_k} hold {stats.top_share_label}"
    )
    print(f"artifacts written to {run.out_dir}")
    return 2 if diagnostics else 0


def _parse_fraction(text: str, label: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{label} must be a fraction like 1/3, got {text!r}") from None


def cmd_synth(config: PipelineConfig, args: argparse.Namespace) -> int:
    run = _Run("synth", config)
    plants = []
    for plant_arg in args.plant or []:
        phrase, sep, count = plant_arg.rpartition("=")
        if not sep:
            raise InputError(f"--plant expects 'phrase=count', got {plant_arg!r}")
        plants.append((phrase, _parse_int(count, "plant count")))
    overrides: dict = {
        "seed": args.seed,
        "n_postings": args.n_postings,
        "cross_region_repeat_count": args.cross_region_repeats,
        "unknown_title_plants": tuple(plants),
        "industry_token": config.industry_token,
    }
    if args.off_industry_rate:
        overrides["off_industry_rate"] = _parse_fraction(args.off_industry_rate, "off-industry rate")
    if args.division_rate:
        overrides["division_rate"] = _parse_fraction(args.division_rate, "division rate")
    synth_config = synth_mod.SynthConfig(**overrides)
    taxonomy = load_taxonomy(config.taxonomy_path)
    result = synth_mod.generate(synth_config, taxonomy, config.out_dir)
    run.note("synth.seed", synth_config.seed)
    run.count("postings_generated", _count_lines(result.posting_paths.values()))
    for path in result.posting_paths.values():
        run.items.append((f"artifact.{path.name}.sha256", _sha256_file(str(path))))
    run.items.append((f"artifact.{result.truth_path.name}.sha256", _sha256_file(str(result.truth_path))))
    run.finish()
    print(f"synthetic corpus written to {config.out_dir} (seed {synth_config.seed})")
    return 0


def _count_lines(paths) -> int:
    total = 0
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            total += sum(1 for line in fh if line.strip())
    return total


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        raise InputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="jobpulse", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"config file path (or ${ENV_CONFIG})")
    common.add_argument("--taxonomy", help="taxonomy CSV path")
    common.add_argument("--dictionary", help="name dictionary path")
    common.add_argument("--industry-token", dest="industry_token", help="industry filter token")
    common.add_argument(
        "--filter-mode", dest="filter_mode", choices=matcher_mod.FILTER_MODES, help="industry filter semantics"
    )
    common.add_argument("--regions", help="comma-separated subset of LA,SB,SD")
    common.add_argument("--window-start", dest="window_start", help="collection window start (YYYY-MM-DD)")
    common.add_argument("--window-end", dest="window_end", help="collection window end (YYYY-MM-DD)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("csv", "text"), help="table output format")
    common.add_argument("-v", "--verbose", action="store_true", help="verbose logging")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, help_text: str, with_input: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        if with_input:
            p.add_argument("--input", nargs="+", required=True, help="posting files (JSONL)")
        return p

    add("ingest", "validate posting files and emit diagnostics")
    add("match", "match postings against the taxonomy")
    add("dedup", "build the fractional demand ledger")
    add("disambiguate", "canonicalize employer names")
    discover = add("discover", "report out-of-taxonomy title candidates")
    discover.add_argument("--min-count", dest="min_count", type=int, help="minimum occurrences")
    report = add("report", "full pipeline: funnel, demand tables, employer stats")
    report.add_argument("--top-k", dest="top_k", type=int, help="top employers to summarize")
    synth = add("synth", "generate a synthetic corpus with ground truth", with_input=False)
    synth.add_argument("--seed", type=int, default=42, help="generator seed")
    synth.add_argument("--n-postings", dest="n_postings", type=int, default=5300)
    synth.add_argument("--cross-region-repeats", dest="cross_region_repeats", type=int, default=0)
    synth.add_argument("--off-industry-rate", dest="off_industry_rate", help="fraction, e.g. 1/3")
    synth.add_argument("--division-rate", dest="division_rate", help="fraction, e.g. 3/20")
    synth.add_argument(
        "--plant",
        action="append",
        help="plant an out-of-taxonomy title, 'phrase=count' (repeatable)",
    )
    return parser


_COMMANDS = {
    "ingest": cmd_ingest,
    "match": cmd_match,
    "dedup": cmd_dedup,
    "disambiguate": cmd_disambiguate,
    "discover": cmd_discover,
    "report": cmd_report,
    "synth": cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
        config = build_config(args)
        return _COMMANDS[args.subcommand](config, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except JobPulseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
