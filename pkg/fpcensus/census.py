"""Census pipeline: classify the index-n subgroups of every presentation in a directory."""

import asyncio
import csv
import io
import json
import time
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

from .abelian import abelianization, count_order4_quotients
from .config import get_settings
from .coset import (
    CosetTable,
    SubgroupSpec,
    coset_enumerate,
    is_normal,
    normalizer_index,
    quotient_type,
)
from .errors import EmbeddingError
from .lowindex import conjugacy_classes, low_index_subgroups
from .models import (
    AggregateSummary,
    AmbientNormalizer,
    CensusOptions,
    CensusOutcome,
    CensusReport,
    FileDiagnostic,
    QuotientType,
    SubgroupRecord,
)
from .presentation import Presentation, Word, free_reduce, parse_presentation, parse_words
from .rewriting import has_finite_abelianization, subgroup_abelianization, subgroup_generators
from .utils import format_processing_time, log_structured

settings = get_settings()

CSV_VERSION = 1
CSV_COLUMNS = [
    "source",
    "h1",
    "n0_subgroups",
    "n0_classes",
    "n_normal",
    "n1",
    "c4",
    "v4",
    "lemma11_consistent",
]


class SupergroupEmbedding:
    """A supergroup presentation plus one word per generator of the base group."""

    def __init__(self, supergroup: Presentation, images: Sequence[Word]):
        self.supergroup = supergroup
        self.images = list(images)

    @classmethod
    def parse(cls, supergroup: Presentation, embed: str) -> "SupergroupEmbedding":
        try:
            images = parse_words(embed, supergroup.generator_names)
        except ValueError as exc:
            raise EmbeddingError(f"cannot read embedding words: {exc}") from exc
        return cls(supergroup, images)

    def substitute(self, w: Word) -> Word:
        letters: List[int] = []
        for x in w.letters:
            image = self.images[abs(x) - 1]
            letters.extend(image.letters if x > 0 else (~image).letters)
        return free_reduce(Word(tuple(letters)))


def ambient_normalizer(
    embedding: SupergroupEmbedding,
    presentation: Presentation,
    table: CosetTable,
    max_cosets: Optional[int] = None,
) -> AmbientNormalizer:
    """Normalizer index of the subgroup with table ``table`` inside the supergroup.

    Raises:
        EmbeddingError: if the words do not match the generators or the
            base relators do not act trivially in the supergroup
    """
    if len(embedding.images) != presentation.generator_count:
        raise EmbeddingError(
            f"expected {presentation.generator_count} embedding words, got {len(embedding.images)}"
        )
    generators = SubgroupSpec(tuple(
        embedding.substitute(h) for h in subgroup_generators(table).generators
    ))
    ambient_table = coset_enumerate(embedding.supergroup, generators, max_cosets=max_cosets)
    for relator in presentation.relators:
        image = embedding.substitute(relator)
        if any(ambient_table.trace(c, image) != c for c in range(ambient_table.index)):
            raise EmbeddingError("embedding words do not satisfy the base relators")

    normalizer = normalizer_index(ambient_table, generators)
    return AmbientNormalizer(
        normalizer_index=normalizer,
        ambient_index=ambient_table.index,
        over_base=normalizer // table.index if is_normal(table) else None,
    )


def analyse_presentation(
    presentation: Presentation,
    source: str,
    index: int = 4,
    max_nodes: Optional[int] = None,
    max_cosets: Optional[int] = None,
    embedding: Optional[SupergroupEmbedding] = None,
) -> CensusReport:
    """Classify the index-``index`` subgroups of one presentation."""
    h1 = abelianization(presentation)
    tables = [
        t for t in low_index_subgroups(presentation, index, max_nodes=max_nodes)
        if t.index == index
    ]
    classes = conjugacy_classes(tables)

    records: List[SubgroupRecord] = []
    histogram: Dict[QuotientType, int] = {QuotientType.C4: 0, QuotientType.V4: 0}
    n1 = 0
    for table in tables:
        normal = is_normal(table)
        kind = quotient_type(table) if normal and index == 4 else None
        if kind is not None:
            histogram[kind] += 1
        invariants = subgroup_abelianization(presentation, table)
        if normal and has_finite_abelianization(invariants):
            n1 += 1

        ambient = None
        normalizer = normalizer_index(table)
        if embedding is not None:
            ambient = ambient_normalizer(embedding, presentation, table, max_cosets)
            normalizer = ambient.normalizer_index

        records.append(SubgroupRecord(
            table=table.to_data(),
            normal=normal,
            quotient_type=kind,
            abelian_invariants=invariants,
            abelian_invariants_text=str(invariants),
            b1=invariants.free_rank,
            normalizer_index=normalizer,
            ambient_index=ambient.ambient_index if ambient else None,
        ))

    n_normal = sum(1 for r in records if r.normal)
    expected = count_order4_quotients(h1) if index == 4 else None
    return CensusReport(
        source=source,
        index=index,
        h1=h1,
        h1_text=str(h1),
        n_subgroups=len(tables),
        n_conjugacy_classes=len(classes),
        n_normal=n_normal,
        n1=n1,
        quotient_type_histogram=histogram,
        lemma11_expected=expected,
        lemma11_consistent=(expected == n_normal) if expected is not None else None,
        per_subgroup=records,
    )


def _process_file(
    path: Path,
    options: CensusOptions,
    embedding: Optional[SupergroupEmbedding],
) -> CensusReport:
    start = time.monotonic()
    presentation = parse_presentation(path.read_text(encoding="utf-8"))
    report = analyse_presentation(
        presentation,
        path.name,
        index=options.index,
        max_nodes=options.max_nodes,
        max_cosets=options.max_cosets,
        embedding=embedding,
    )
    log_structured("census_file_complete", {
        "source": path.name,
        "subgroups": report.n_subgroups,
        "normal": report.n_normal,
        "n1": report.n1,
        "elapsed": format_processing_time(time.monotonic() - start),
    })
    return report


def discover_presentations(directory: Path, pattern: Optional[str] = None) -> List[Path]:
    """Presentation files in ``directory``, sorted by file name."""
    pattern = pattern or settings.presentation_glob
    return sorted((p for p in directory.glob(pattern) if p.is_file()), key=lambda p: p.name)


def load_embedding(options: CensusOptions) -> Optional[SupergroupEmbedding]:
    if options.supergroup_path is None:
        return None
    supergroup = parse_presentation(options.supergroup_path.read_text(encoding="utf-8"))
    return SupergroupEmbedding.parse(supergroup, options.embed)


async def run_census_async(
    directory: Union[str, Path],
    options: Optional[CensusOptions] = None,
) -> CensusOutcome:
    """
    Run the census over every presentation file in a directory.

    Args:
        directory: Directory holding presentation files
        options: Index, budgets, worker count, file pattern and supergroup

    Returns:
        Reports in file-name order plus per-file diagnostics
    """
    options = options or CensusOptions(index=settings.census_index)
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"{directory} is not a directory")
    embedding = load_embedding(options)
    paths = discover_presentations(directory, options.pattern)
    semaphore = asyncio.Semaphore(options.workers or settings.census_workers)

    async def census_single_file(path: Path) -> Union[CensusReport, FileDiagnostic]:
        async with semaphore:
            try:
                return await asyncio.to_thread(_process_file, path, options, embedding)
            except Exception as e:
                log_structured("census_file_failed", {
                    "source": path.name,
                    "error_type": type(e).__name__,
                    "error": str(e),
                })
                return FileDiagnostic(source=path.name, kind=type(e).__name__, message=str(e))

    results = await asyncio.gather(*(census_single_file(path) for path in paths))

    reports = [r for r in results if isinstance(r, CensusReport)]
    diagnostics = [r for r in results if isinstance(r, FileDiagnostic)]
    outcome = CensusOutcome(
        index=options.index,
        reports=reports,
        diagnostics=diagnostics,
        summary=aggregate(reports),
    )
    log_structured("census_complete", {
        "files": len(paths),
        "reports": len(reports),
        "diagnostics": len(diagnostics),
        "n1_total": outcome.summary.total,
    })
    return outcome


def run_census(directory: Union[str, Path], options: Optional[CensusOptions] = None) -> CensusOutcome:
    """Synchronous wrapper around :func:`run_census_async`."""
    return asyncio.run(run_census_async(directory, options))


def aggregate(reports: Iterable[CensusReport]) -> AggregateSummary:
    """Sum the N1 column; each lattice contributes two complex-conjugate surfaces."""
    values = [r.n1 for r in reports]
    total = sum(values)
    return AggregateSummary(rows=len(values), total=total, doubled=2 * total, missing=0)


def render_json_report(outcome: CensusOutcome) -> str:
    return json.dumps(outcome.model_dump(mode="json"), indent=settings.json_indent) + "\n"


def csv_row(report: CensusReport) -> Dict[str, str]:
    consistent = report.lemma11_consistent
    return {
        "source": report.source,
        "h1": report.h1_text,
        "n0_subgroups": str(report.n_subgroups),
        "n0_classes": str(report.n_conjugacy_classes),
        "n_normal": str(report.n_normal),
        "n1": str(report.n1),
        "c4": str(report.quotient_type_histogram.get(QuotientType.C4, 0)),
        "v4": str(report.quotient_type_histogram.get(QuotientType.V4, 0)),
        "lemma11_consistent": "" if consistent is None else str(consistent).lower(),
    }


def render_csv_report(outcome: CensusOutcome) -> str:
    buffer = io.StringIO()
    buffer.write(f"# fpcensus census csv v{CSV_VERSION}\n")
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for report in outcome.reports:
        writer.writerow(csv_row(report))
    return buffer.getvalue()


def write_json_report(outcome: CensusOutcome, path: Union[str, Path]) -> None:
    Path(path).write_text(render_json_report(outcome), encoding="utf-8")


def write_csv_report(outcome: CensusOutcome, path: Union[str, Path]) -> None:
    Path(path).write_text(render_csv_report(outcome), encoding="utf-8")
