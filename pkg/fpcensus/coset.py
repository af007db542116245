"""Todd-Coxeter coset enumeration and coset-table utilities.

Tables use one column per generator letter: generator ``i`` (1-based)
occupies column ``2*(i-1)`` and its inverse column ``2*(i-1) + 1``, so the
inverse of column ``c`` is ``c ^ 1``.
"""

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation

from .config import get_settings
from .errors import CosetBudgetExceeded, InvalidCosetTable, QuotientTypeError
from .models import CosetTableData, QuotientType
from .presentation import Presentation, Word, invert, parse_words
from .utils import log_structured


def letter_column(letter: int) -> int:
    """Table column of a signed generator letter."""
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def word_columns(w: Word) -> Tuple[int, ...]:
    return tuple(letter_column(x) for x in w.letters)


def relator_conjugates(p: Presentation) -> Dict[int, List[Tuple[int, ...]]]:
    """Cyclic conjugates of every relator and its inverse, keyed by first column."""
    by_column: Dict[int, List[Tuple[int, ...]]] = {c: [] for c in range(2 * p.generator_count)}
    seen = set()
    for r in p.relators:
        for word in (r, invert(r)):
            cols = word_columns(word)
            for shift in range(len(cols)):
                rotated = cols[shift:] + cols[:shift]
                if rotated not in seen:
                    seen.add(rotated)
                    by_column[rotated[0]].append(rotated)
    return by_column


@dataclass(frozen=True)
class SubgroupSpec:
    """Subgroup of a presented group, given by generating words."""

    generators: Tuple[Word, ...] = ()

    def __post_init__(self):
        if not isinstance(self.generators, tuple):
            object.__setattr__(self, "generators", tuple(self.generators))

    @classmethod
    def trivial(cls) -> "SubgroupSpec":
        return cls(())

    @classmethod
    def parse(cls, text: str, generator_names: Sequence[str]) -> "SubgroupSpec":
        return cls(tuple(parse_words(text, generator_names)))


@dataclass(frozen=True)
class CosetTable:
    """Right action of the generators on the cosets of a subgroup.

    ``action[i][c]`` is the coset reached from ``c`` by generator ``i``;
    coset 0 is the subgroup itself.
    """

    generator_names: Tuple[str, ...]
    action: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "generator_names", tuple(self.generator_names))
        object.__setattr__(self, "action", tuple(tuple(perm) for perm in self.action))
        if len(self.action) != len(self.generator_names):
            raise InvalidCosetTable("one permutation per generator is required")
        sizes = {len(perm) for perm in self.action}
        if len(sizes) > 1:
            raise InvalidCosetTable("permutations act on different numbers of cosets")

    @property
    def index(self) -> int:
        return len(self.action[0]) if self.action else 1

    @cached_property
    def inverse_action(self) -> Tuple[Tuple[int, ...], ...]:
        inverses = []
        for perm in self.action:
            inverse = [0] * len(perm)
            for c, image in enumerate(perm):
                inverse[image] = c
            inverses.append(tuple(inverse))
        return tuple(inverses)

    @cached_property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        """Full table rows, columns ordered g1, g1^-1, g2, g2^-1, ..."""
        return tuple(
            tuple(
                value
                for perm, inverse in zip(self.action, self.inverse_action)
                for value in (perm[c], inverse[c])
            )
            for c in range(self.index)
        )

    @cached_property
    def flat(self) -> Tuple[int, ...]:
        return tuple(value for row in self.rows for value in row)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return self.index, self.flat

    def image(self, coset: int, letter: int) -> int:
        if letter > 0:
            return self.action[letter - 1][coset]
        return self.inverse_action[-letter - 1][coset]

    def trace(self, coset: int, w: Word) -> int:
        for letter in w.letters:
            coset = self.image(coset, letter)
        return coset

    def to_data(self) -> CosetTableData:
        return CosetTableData(
            index=self.index,
            action={name: list(perm) for name, perm in zip(self.generator_names, self.action)},
        )

    def to_json(self) -> dict:
        return self.to_data().model_dump()

    @classmethod
    def from_json(cls, data: dict, generator_names: Optional[Sequence[str]] = None) -> "CosetTable":
        """Build a table from ``{"index": n, "action": {name: [...]}}``."""
        try:
            parsed = CosetTableData.model_validate(data)
        except ValueError as exc:
            raise InvalidCosetTable(f"malformed coset table: {exc}") from exc
        names = tuple(generator_names) if generator_names is not None else tuple(parsed.action)
        if set(names) != set(parsed.action):
            raise InvalidCosetTable(
                f"table generators {sorted(parsed.action)} do not match {sorted(names)}"
            )
        action = []
        for name in names:
            perm = parsed.action[name]
            if len(perm) != parsed.index:
                raise InvalidCosetTable(f"action of '{name}' has {len(perm)} entries, expected {parsed.index}")
            if sorted(perm) != list(range(parsed.index)):
                raise InvalidCosetTable(f"action of '{name}' is not a permutation")
            action.append(tuple(perm))
        return cls(names, tuple(action))


def standardize(table: CosetTable, base: int = 0) -> CosetTable:
    """Renumber cosets breadth-first from ``base``.

    The result is the canonical table of the stabilizer of ``base``, i.e.
    of a conjugate of the subgroup.
    """
    n = table.index
    numbering = {base: 0}
    order = [base]
    queue = deque([base])
    while queue:
        c = queue.popleft()
        for image in table.rows[c]:
            if image not in numbering:
                numbering[image] = len(order)
                order.append(image)
                queue.append(image)
    if len(order) != n:
        raise InvalidCosetTable("coset table is not transitive")
    action = tuple(
        tuple(numbering[perm[old]] for old in order) for perm in table.action
    )
    return CosetTable(table.generator_names, action)


def validate_table(table: CosetTable, presentation: Presentation) -> None:
    """Check bijectivity, transitivity and that every relator acts trivially."""
    n = table.index
    if tuple(presentation.generator_names) != table.generator_names:
        raise InvalidCosetTable("table and presentation have different generators")
    for name, perm in zip(table.generator_names, table.action):
        if sorted(perm) != list(range(n)):
            raise InvalidCosetTable(f"action of '{name}' is not a bijection")
    reached = {0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for image in table.rows[c]:
            if image not in reached:
                reached.add(image)
                queue.append(image)
    if len(reached) != n:
        raise InvalidCosetTable("coset table is not transitive")
    for relator in presentation.relators:
        for c in range(n):
            if table.trace(c, relator) != c:
                raise InvalidCosetTable(f"relator does not close at coset {c}")


def permutation_image(table: CosetTable, w: Word) -> Tuple[int, ...]:
    """Permutation of the cosets induced by right multiplication with ``w``."""
    return tuple(table.trace(c, w) for c in range(table.index))


def normalizer_index(table: CosetTable, subgroup: Optional[SubgroupSpec] = None) -> int:
    """|N(H) : H|, the number of cosets fixed by the whole subgroup.

    Without subgroup generators, counts base points whose stabilizer
    yields the same canonical table.
    """
    if subgroup is not None:
        return sum(
            1 for c in range(table.index)
            if all(table.trace(c, h) == c for h in subgroup.generators)
        )
    canonical = standardize(table, 0)
    return sum(1 for base in range(table.index) if standardize(table, base) == canonical)


def is_normal(
    table: CosetTable,
    subgroup: Optional[SubgroupSpec] = None,
    presentation: Optional[Presentation] = None,
) -> bool:
    """True iff every coset stabilizer coincides with the subgroup."""
    if presentation is not None:
        validate_table(table, presentation)
    return normalizer_index(table, subgroup) == table.index


def quotient_type(table: CosetTable) -> QuotientType:
    """C4 or V4 for the quotient by a normal subgroup of index four."""
    if table.index != 4:
        raise QuotientTypeError(f"quotient type needs index 4, got {table.index}")
    if not is_normal(table):
        raise QuotientTypeError("quotient type needs a normal subgroup")
    if any(Permutation(list(perm)).order() == 4 for perm in table.action):
        return QuotientType.C4
    return QuotientType.V4


class _CosetEnumerator:
    """Felsch-style enumeration with union-find coincidence processing."""

    def __init__(
        self,
        presentation: Presentation,
        subgroup: SubgroupSpec,
        max_cosets: int,
        seed: Optional[int] = None,
    ):
        self.presentation = presentation
        self.ncols = 2 * presentation.generator_count
        self.max_cosets = max_cosets
        self.table: List[List[Optional[int]]] = [[None] * self.ncols]
        self.parent: List[int] = [0]
        self.deductions: List[Tuple[int, int]] = []
        self.changes = 0

        relators = [word_columns(r) for r in presentation.relators]
        subgroup_words = [word_columns(h) for h in subgroup.generators]
        column_order = list(range(self.ncols))
        conjugates = relator_conjugates(presentation)
        if seed is not None:
            rng = random.Random(seed)
            rng.shuffle(relators)
            rng.shuffle(subgroup_words)
            rng.shuffle(column_order)
            for words in conjugates.values():
                rng.shuffle(words)
        self.relators = relators
        self.subgroup_words = subgroup_words
        self.column_order = column_order
        self.conjugates = conjugates

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, alpha: int, col: int) -> None:
        if len(self.table) >= self.max_cosets:
            log_structured("coset_budget_exceeded", {"max_cosets": self.max_cosets})
            raise CosetBudgetExceeded(self.max_cosets)
        beta = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(beta)
        self.table[alpha][col] = beta
        self.table[beta][col ^ 1] = alpha
        self.deductions.append((alpha, col))
        self.changes += 1

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def merge(self, a: int, b: int, queue: deque) -> None:
        a, b = self.rep(a), self.rep(b)
        if a != b:
            low, high = min(a, b), max(a, b)
            self.parent[high] = low
            queue.append(high)
            self.changes += 1

    def coincidence(self, a: int, b: int) -> None:
        queue: deque = deque()
        self.merge(a, b, queue)
        while queue:
            gamma = queue.popleft()
            for col in range(self.ncols):
                delta = self.table[gamma][col]
                if delta is None:
                    continue
                self.table[delta][col ^ 1] = None
                self.deductions.append((delta, col ^ 1))
                mu, nu = self.rep(gamma), self.rep(delta)
                if self.table[mu][col] is not None:
                    self.merge(nu, self.table[mu][col], queue)
                elif self.table[nu][col ^ 1] is not None:
                    self.merge(mu, self.table[nu][col ^ 1], queue)
                else:
                    self.table[mu][col] = nu
                    self.table[nu][col ^ 1] = mu
                    self.deductions.append((mu, col))
                    self.deductions.append((nu, col ^ 1))

    def scan(self, alpha: int, word: Tuple[int, ...], fill: bool = False) -> None:
        """Trace ``word`` from both ends at ``alpha``; deduce, merge or (optionally) define."""
        table = self.table
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                self.deductions.append((f, word[i]))
                self.changes += 1
                return
            if not fill:
                return
            self.define(f, word[i])

    def process_deductions(self) -> None:
        while self.deductions:
            alpha, col = self.deductions.pop()
            if self.alive(alpha):
                for word in self.conjugates[col]:
                    self.scan(alpha, word)
                    if not self.alive(alpha):
                        break
            beta = self.table[alpha][col]
            if beta is not None and self.alive(beta):
                for word in self.conjugates[col ^ 1]:
                    self.scan(beta, word)
                    if not self.alive(beta):
                        break

    def fill_table(self) -> None:
        alpha = 0
        while alpha < len(self.table):
            # relators that already close at alpha are deduced before any new coset
            for word in self.relators:
                if not self.alive(alpha):
                    break
                self.scan(alpha, word)
                self.process_deductions()
            if self.alive(alpha):
                for col in self.column_order:
                    if not self.alive(alpha):
                        break
                    if self.table[alpha][col] is None:
                        self.define(alpha, col)
                        self.process_deductions()
            alpha += 1

    def sweep(self) -> bool:
        """Scan every relator at every live coset; True when anything changed."""
        before = self.changes
        for word in self.subgroup_words:
            self.scan(0, word, fill=True)
            self.process_deductions()
        for alpha in range(len(self.table)):
            for word in self.relators:
                if not self.alive(alpha):
                    break
                self.scan(alpha, word, fill=True)
                self.process_deductions()
        return self.changes != before

    def run(self) -> CosetTable:
        for word in self.subgroup_words:
            self.scan(0, word, fill=True)
        self.process_deductions()
        while True:
            self.fill_table()
            if not self.sweep():
                break
        return self.canonical_table()

    def canonical_table(self) -> CosetTable:
        numbering = {0: 0}
        order = [0]
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for col in range(self.ncols):
                image = self.rep(self.table[c][col])
                if image not in numbering:
                    numbering[image] = len(order)
                    order.append(image)
                    queue.append(image)
        action = tuple(
            tuple(numbering[self.rep(self.table[c][2 * g])] for c in order)
            for g in range(self.presentation.generator_count)
        )
        return CosetTable(self.presentation.generator_names, action)


def coset_enumerate(
    presentation: Presentation,
    subgroup: Optional[SubgroupSpec] = None,
    max_cosets: Optional[int] = None,
    seed: Optional[int] = None,
) -> CosetTable:
    """Enumerate the cosets of ``subgroup`` and return the canonical table.

    Args:
        presentation: The ambient finitely presented group
        subgroup: Subgroup generators (trivial subgroup when omitted)
        max_cosets: Budget on cosets defined; settings default when omitted
        seed: Shuffle internal processing order (result is unchanged)

    Returns:
        Closed coset table, renumbered breadth-first from coset 0

    Raises:
        CosetBudgetExceeded: if the enumeration does not close within budget
    """
    if max_cosets is None:
        max_cosets = get_settings().max_cosets
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    subgroup = subgroup or SubgroupSpec.trivial()
    for h in subgroup.generators:
        if h.max_generator() > presentation.generator_count:
            raise ValueError(f"subgroup generator mentions generator {h.max_generator()}")

    enumerator = _CosetEnumerator(presentation, subgroup, max_cosets, seed)
    table = enumerator.run()
    validate_table(table, presentation)
    log_structured("coset_enumeration_complete", {
        "index": table.index,
        "cosets_defined": len(enumerator.table),
        "seed": seed,
    })
    return table
