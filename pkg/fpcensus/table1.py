"""Published census table as fixture data, checked against the order-four quotient count."""

import csv
from pathlib import Path
from typing import Iterable, List, Optional, Union

from .abelian import count_order4_quotients
from .models import AggregateSummary, Table1Check, Table1Row, parse_invariants

DEFAULT_TABLE1_PATH = Path(__file__).resolve().parent.parent / "fixtures" / "table1.csv"

# Total of the N1 column as stated alongside the table
PUBLISHED_N1_TOTAL = 835


def load_table1(path: Optional[Union[str, Path]] = None) -> List[Table1Row]:
    """Read the table; an empty N1 cell stays missing."""
    path = Path(path) if path is not None else DEFAULT_TABLE1_PATH
    with path.open(newline="", encoding="utf-8") as handle:
        return [
            Table1Row(
                lattice=row["lattice"],
                aut=row["aut"],
                h1=row["h1"],
                n0=int(row["n0"]),
                n1=int(row["n1"]) if row["n1"].strip() else None,
            )
            for row in csv.DictReader(handle)
        ]


def check_row(row: Table1Row) -> Table1Check:
    """Compare a row's N1 with the number of order-four quotients of its H1.

    Every normal index-four subgroup is the kernel of an order-four quotient
    of H1, so N1 can never exceed that count; it falls short when some
    kernels have infinite abelianization.
    """
    expected = count_order4_quotients(parse_invariants(row.h1))
    if row.n1 is None:
        status = "missing"
    elif row.n1 > expected or row.n0 < expected:
        status = "impossible"
    elif row.n1 < expected:
        status = "filtered"
    else:
        status = "consistent"
    return Table1Check(
        lattice=row.lattice,
        h1=row.h1,
        n0=row.n0,
        n1=row.n1,
        order4_quotients=expected,
        status=status,
    )


def check_table1(rows: Iterable[Table1Row]) -> List[Table1Check]:
    return [check_row(row) for row in rows]


def summarize_table1(rows: Iterable[Table1Row]) -> AggregateSummary:
    """N1 totals of the table; missing cells are counted, not guessed."""
    rows = list(rows)
    total = sum(row.n1 for row in rows if row.n1 is not None)
    return AggregateSummary(
        rows=len(rows),
        total=total,
        doubled=2 * total,
        missing=sum(1 for row in rows if row.n1 is None),
    )
