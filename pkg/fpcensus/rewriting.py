"""Reidemeister-Schreier rewriting over the breadth-first spanning tree."""

from collections import deque
from typing import Dict, List, Optional, Tuple

from .abelian import abelianization
from .coset import CosetTable, SubgroupSpec
from .models import AbelianInvariants
from .presentation import EMPTY_WORD, Presentation, Word, cyclic_reduce, free_reduce


def _spanning_tree(table: CosetTable) -> Tuple[List[Word], set]:
    """Transversal words and the set of positive tree edges ``(coset, generator)``."""
    n, k = table.index, len(table.generator_names)
    transversal: List[Optional[Word]] = [None] * n
    transversal[0] = EMPTY_WORD
    tree_edges = set()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for g in range(1, k + 1):
            for letter in (g, -g):
                d = table.image(c, letter)
                if transversal[d] is None:
                    transversal[d] = transversal[c] * Word((letter,))
                    tree_edges.add((c, g) if letter > 0 else (d, g))
                    queue.append(d)
    return transversal, tree_edges


def schreier_transversal(table: CosetTable) -> List[Word]:
    """Prefix-closed coset representatives; entry ``c`` maps coset 0 to ``c``."""
    transversal, _ = _spanning_tree(table)
    return transversal


def _schreier_generators(table: CosetTable) -> Dict[Tuple[int, int], int]:
    _, tree_edges = _spanning_tree(table)
    numbering: Dict[Tuple[int, int], int] = {}
    for c in range(table.index):
        for g in range(1, len(table.generator_names) + 1):
            if (c, g) not in tree_edges:
                numbering[(c, g)] = len(numbering) + 1
    return numbering


def subgroup_generators(table: CosetTable) -> SubgroupSpec:
    """Schreier generators ``u_c * g * u_d^-1`` as words in the ambient group."""
    transversal, _ = _spanning_tree(table)
    words = []
    for c, g in _schreier_generators(table):
        d = table.image(c, g)
        words.append(transversal[c] * Word((g,)) * ~transversal[d])
    return SubgroupSpec(tuple(words))


def rewrite(table: CosetTable, generators: Dict[Tuple[int, int], int], coset: int, w: Word) -> Word:
    """Rewrite ``w`` read from ``coset`` as a word in the Schreier generators."""
    letters = []
    for x in w.letters:
        if x > 0:
            symbol = generators.get((coset, x))
            if symbol is not None:
                letters.append(symbol)
            coset = table.image(coset, x)
        else:
            previous = table.image(coset, x)
            symbol = generators.get((previous, -x))
            if symbol is not None:
                letters.append(-symbol)
            coset = previous
    return free_reduce(Word(tuple(letters)))


def schreier_presentation(presentation: Presentation, table: CosetTable) -> Presentation:
    """Presentation of the subgroup with coset table ``table``.

    Generators are named ``<generator>_<coset>`` after their edge; no
    simplification beyond free and cyclic reduction is attempted.
    """
    generators = _schreier_generators(table)
    names = tuple(
        f"{table.generator_names[g - 1]}_{c}" for (c, g) in generators
    )
    relators: List[Word] = []
    seen = set()
    for relator in presentation.relators:
        for c in range(table.index):
            rewritten = cyclic_reduce(rewrite(table, generators, c, relator))
            if rewritten.is_empty() or rewritten in seen:
                continue
            seen.add(rewritten)
            relators.append(rewritten)
    return Presentation(names, tuple(relators))


def subgroup_abelianization(presentation: Presentation, table: CosetTable) -> AbelianInvariants:
    """Abelianization of the subgroup; its free rank is b1 of the cover."""
    return abelianization(schreier_presentation(presentation, table))


def has_finite_abelianization(invariants: AbelianInvariants) -> bool:
    return invariants.is_finite
