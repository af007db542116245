"""Low-index subgroup search.

Partial coset tables are extended one entry at a time in row-major order,
so every table reached is already numbered breadth-first from coset 0.
Branches whose table is not the least member of its conjugacy class are
pruned; each surviving class is expanded to all of its members by
re-basing the table at every coset.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .config import get_settings
from .coset import CosetTable, relator_conjugates, standardize, validate_table
from .errors import SearchBudgetExceeded
from .presentation import Presentation
from .utils import log_structured

_Table = List[List[Optional[int]]]


class SearchMode(str, Enum):
    ALL = "all"
    NORMAL_ONLY = "normal_only"


@dataclass(frozen=True)
class ConjugacyClass:
    """A conjugacy class of subgroups, by its least table."""

    representative: CosetTable
    size: int

    @property
    def normal(self) -> bool:
        return self.size == 1


class _LowIndexSearch:
    def __init__(self, presentation: Presentation, max_index: int, max_nodes: int):
        self.presentation = presentation
        self.max_index = max_index
        self.max_nodes = max_nodes
        self.ncols = 2 * presentation.generator_count
        self.conjugates = relator_conjugates(presentation)
        self.nodes = 0
        self.class_representatives: List[CosetTable] = []

    def run(self) -> List[CosetTable]:
        table: _Table = [[None] * self.ncols for _ in range(self.max_index)]
        self._extend(table, 1)
        return self.class_representatives

    def _extend(self, table: _Table, num: int) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            log_structured("low_index_budget_exceeded", {"max_nodes": self.max_nodes})
            raise SearchBudgetExceeded(self.max_nodes)

        gap = self._first_gap(table, num)
        if gap is None:
            self._record(table, num)
            return
        coset, col = gap
        candidates = [d for d in range(num) if table[d][col ^ 1] is None]
        if num < self.max_index:
            candidates.append(num)
        for target in candidates:
            child = [row[:] for row in table]
            child[coset][col] = target
            child[target][col ^ 1] = coset
            child_num = max(num, target + 1)
            if self._deduce(child, coset, col) and self._least_in_class(child, child_num):
                self._extend(child, child_num)

    def _first_gap(self, table: _Table, num: int) -> Optional[Tuple[int, int]]:
        for c in range(num):
            for col in range(self.ncols):
                if table[c][col] is None:
                    return c, col
        return None

    def _deduce(self, table: _Table, coset: int, col: int) -> bool:
        """Apply forced entries; False when a relator cannot close."""
        stack = [(coset, col)]
        while stack:
            alpha, col = stack.pop()
            for start, words in ((alpha, self.conjugates[col]), (table[alpha][col], self.conjugates[col ^ 1])):
                for word in words:
                    if not self._scan(table, start, word, stack):
                        return False
        return True

    @staticmethod
    def _scan(table: _Table, alpha: int, word: Tuple[int, ...], stack: list) -> bool:
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while i <= j and table[f][word[i]] is not None:
            f = table[f][word[i]]
            i += 1
        if i > j:
            return f == b
        while j >= i and table[b][word[j] ^ 1] is not None:
            b = table[b][word[j] ^ 1]
            j -= 1
        if j < i:
            return f == b
        if j == i:
            table[f][word[i]] = b
            table[b][word[i] ^ 1] = f
            stack.append((f, word[i]))
        return True

    def _least_in_class(self, table: _Table, num: int) -> bool:
        """False when re-basing at some coset gives a definitely smaller table."""
        for base in range(1, num):
            if self._rebased_is_smaller(table, num, base):
                return False
        return True

    def _rebased_is_smaller(self, table: _Table, num: int, base: int) -> bool:
        numbering: Dict[int, int] = {base: 0}
        order = [base]
        for row in range(num):
            if row >= len(order):
                return False
            old = order[row]
            for col in range(self.ncols):
                image = table[old][col]
                current = table[row][col]
                if image is None or current is None:
                    return False
                if image not in numbering:
                    numbering[image] = len(order)
                    order.append(image)
                renumbered = numbering[image]
                if renumbered != current:
                    return renumbered < current
        return False

    def _record(self, table: _Table, num: int) -> None:
        action = tuple(
            tuple(table[c][2 * g] for c in range(num))
            for g in range(self.presentation.generator_count)
        )
        self.class_representatives.append(CosetTable(self.presentation.generator_names, action))


def class_members(table: CosetTable) -> List[CosetTable]:
    """All distinct tables conjugate to ``table`` (one per subgroup)."""
    return sorted({standardize(table, base) for base in range(table.index)}, key=CosetTable.sort_key)


def low_index_subgroups(
    presentation: Presentation,
    max_index: int,
    mode: SearchMode = SearchMode.ALL,
    max_nodes: Optional[int] = None,
) -> List[CosetTable]:
    """All subgroups of index at most ``max_index``, as canonical coset tables.

    Args:
        presentation: The finitely presented group
        max_index: Largest index to search
        mode: ``all`` for every subgroup, ``normal_only`` for normal ones
        max_nodes: Cap on partial-table extensions; settings default when omitted

    Returns:
        Tables sorted by (index, flattened table)

    Raises:
        SearchBudgetExceeded: if the search visits more than ``max_nodes`` tables
    """
    if max_index < 1:
        raise ValueError("max_index must be at least 1")
    mode = SearchMode(mode)
    if max_nodes is None:
        max_nodes = get_settings().max_nodes

    search = _LowIndexSearch(presentation, max_index, max_nodes)
    representatives = search.run()

    subgroups: List[CosetTable] = []
    for representative in representatives:
        members = class_members(representative)
        if mode is SearchMode.NORMAL_ONLY and len(members) != 1:
            continue
        subgroups.extend(members)
    subgroups.sort(key=CosetTable.sort_key)
    for table in subgroups:
        validate_table(table, presentation)

    log_structured("low_index_complete", {
        "max_index": max_index,
        "mode": mode.value,
        "classes": len(representatives),
        "subgroups": len(subgroups),
        "nodes": search.nodes,
    })
    return subgroups


def conjugacy_classes(subgroups: List[CosetTable]) -> List[ConjugacyClass]:
    """Partition tables of one presentation into conjugacy classes."""
    classes: Dict[CosetTable, int] = {}
    for table in subgroups:
        least = class_members(table)[0]
        classes[least] = classes.get(least, 0) + 1
    return [
        ConjugacyClass(representative, size)
        for representative, size in sorted(classes.items(), key=lambda item: item[0].sort_key())
    ]
