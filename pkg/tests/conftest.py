import datetime as dt
import json

import pytest

from jobpulse.cli import DEFAULT_TAXONOMY
from jobpulse.corpus import Posting, Region
from jobpulse.taxonomy import Taxonomy, load_taxonomy


@pytest.fixture(scope="session")
def shipped_taxonomy() -> Taxonomy:
    return load_taxonomy(str(DEFAULT_TAXONOMY))


def make_posting(
    job_id: str = "J1",
    title: str = "",
    job_description: str = "",
    employer_name: str = "Acme Devices",
    employer_description: str = "",
    region: Region = Region.LA,
    retrieved_at: dt.date = dt.date(2025, 4, 1),
) -> Posting:
    return Posting(
        job_id=job_id,
        title=title,
        job_description=job_description,
        employer_name=employer_name,
        employer_description=employer_description,
        region=region,
        retrieved_at=retrieved_at,
    )


def make_record(
    job_id: str = "J1",
    title: str = "",
    job_description: str = "",
    employer_name: str = "Acme Devices",
    employer_description: str = "",
    region: str = "LA",
    retrieved_at: str = "2025-04-01",
    **overrides,
) -> dict:
    record = {
        "job_id": job_id,
        "title": title,
        "job_description": job_description,
        "employer_name": employer_name,
        "employer_description": employer_description,
        "region": region,
        "retrieved_at": retrieved_at,
    }
    record.update(overrides)
    return record


def write_jsonl(path, records) -> None:
    lines = []
    for record in records:
        lines.append(record if isinstance(record, str) else json.dumps(record))
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def write_taxonomy_csv(path, rows) -> str:
    """rows: iterable of (function, family, title) tuples; title may be ''. """
    lines = ["function,family,title"]
    lines.extend(f"{fn},{fam},{title}" for fn, fam, title in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)
