"""Integer matrices, Smith normal form and finitely generated abelian groups.

All arithmetic is on Python integers, so intermediate growth during
reduction never overflows.
"""

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Dict, List, Sequence, Tuple

from .models import AbelianInvariants, QuotientType
from .presentation import Presentation, exponent_sums


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(self.entries))
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> "IntMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries: List[int] = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged matrix rows")
            entries.extend(int(x) for x in row)
        return cls(len(rows), cols, tuple(entries))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, position: Tuple[int, int]) -> int:
        i, j = position
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix dimensions do not match")
        a, b = self.to_rows(), other.to_rows()
        result = [
            [sum(a[i][t] * b[t][j] for t in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(result, other.cols)

    def diagonal(self) -> List[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(
            self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j
        )

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign, previous = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // previous
            previous = m[k][k]
        return sign * m[n - 1][n - 1]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def smith_normal_form(a: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (D, U, V) with D = U*A*V diagonal, d_i | d_(i+1), U and V unimodular.

    The pivot is always the nonzero entry of least absolute value in the
    remaining block.
    """
    m, n = a.rows, a.cols
    d = a.to_rows()
    u = IntMatrix.identity(m).to_rows()
    v = IntMatrix.identity(n).to_rows()

    def swap_rows(i: int, j: int):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int):
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, q: int):
        d[target] = [x + q * y for x, y in zip(d[target], d[source])]
        u[target] = [x + q * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, q: int):
        for row in d:
            row[target] += q * row[source]
        for row in v:
            row[target] += q * row[source]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    value = d[i][j]
                    if value and (best is None or abs(value) < best[0]):
                        best = (abs(value), i, j)
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            pivot = d[t][t]

            clean = True
            for i in range(t + 1, m):
                q = d[i][t] // pivot
                if q:
                    add_row(i, t, -q)
                if d[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = d[t][j] // pivot
                if q:
                    add_col(j, t, -q)
                if d[t][j]:
                    clean = False
            if not clean:
                continue

            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % pivot),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)

        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    return (
        IntMatrix.from_rows(d, n),
        IntMatrix.from_rows(u, m),
        IntMatrix.from_rows(v, n),
    )


def hermite_normal_form(rows: Sequence[Sequence[int]], cols: int) -> List[List[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: echelon form, positive pivots, entries above
    each pivot reduced into [0, pivot).
    """
    h = [list(r) for r in rows]
    m = len(h)
    pivot_row = 0
    for col in range(cols):
        if pivot_row >= m:
            break
        for i in range(pivot_row + 1, m):
            a, b = h[pivot_row][col], h[i][col]
            if b == 0:
                continue
            x, y, g = xgcd(a, b)
            top, other = h[pivot_row], h[i]
            h[pivot_row] = [x * s + y * t for s, t in zip(top, other)]
            h[i] = [(-b // g) * s + (a // g) * t for s, t in zip(top, other)]
        pivot = h[pivot_row][col]
        if pivot == 0:
            continue
        if pivot < 0:
            h[pivot_row] = [-s for s in h[pivot_row]]
            pivot = -pivot
        for i in range(pivot_row):
            q = h[i][col] // pivot
            if q:
                h[i] = [s - q * t for s, t in zip(h[i], h[pivot_row])]
        pivot_row += 1
    return h[:pivot_row]


def relation_matrix(p: Presentation) -> IntMatrix:
    """Exponent-sum matrix: one row per relator, one column per generator."""
    k = p.generator_count
    return IntMatrix.from_rows([exponent_sums(r, k) for r in p.relators], k)


def invariants_from_matrix(a: IntMatrix) -> AbelianInvariants:
    """Invariants of the cokernel of ``a`` (relations as rows)."""
    d, _, _ = smith_normal_form(a)
    diagonal = d.diagonal()
    torsion = tuple(x for x in diagonal if x > 1)
    free_rank = sum(1 for x in diagonal if x == 0) + max(0, a.cols - a.rows)
    return AbelianInvariants(torsion=torsion, free_rank=free_rank)


def abelianization(p: Presentation) -> AbelianInvariants:
    """Abelian invariants of G/[G,G] for the presented group."""
    return invariants_from_matrix(relation_matrix(p))


def _two_primary_type(g: AbelianInvariants) -> Tuple[int, int]:
    """(x, y): number of cyclic summands of G/4G of order 2 and of order 4."""
    x = sum(1 for d in g.torsion if d % 4 == 2)
    y = sum(1 for d in g.torsion if d % 4 == 0) + g.free_rank
    return x, y


def order4_quotient_counts(g: AbelianInvariants) -> Dict[QuotientType, int]:
    """Number of index-four subgroups of G with cyclic and with Klein quotient.

    Every such subgroup contains 4G, so only G/4G = (Z/2)^x + (Z/4)^y
    matters; by duality the counts equal those of cyclic and Klein
    subgroups of order four in G/4G.
    """
    x, y = _two_primary_type(g)
    rank = x + y
    cyclic = (2 ** (x + 2 * y) - 2 ** (x + y)) // 2
    klein = (2 ** rank - 1) * (2 ** rank - 2) // 6
    return {QuotientType.C4: cyclic, QuotientType.V4: klein}


def count_order4_quotients(g: AbelianInvariants) -> int:
    """Number of subgroups K of G with |G/K| = 4."""
    return sum(order4_quotient_counts(g).values())


@dataclass(frozen=True)
class QuotientDescriptor:
    """Kernel of an order-four quotient of G, as a sublattice of Z^n.

    Coordinates follow the cyclic summands of G (torsion factors first,
    then free generators); rows of ``kernel_basis`` are the Hermite basis
    of the preimage of the kernel.
    """

    kernel_basis: IntMatrix
    quotient_type: QuotientType

    def sort_key(self) -> Tuple[int, ...]:
        return self.kernel_basis.entries


def _summand_moduli(g: AbelianInvariants) -> List[int]:
    """Order of each summand of G/4G, in coordinate order."""
    return [gcd(d, 4) for d in g.torsion] + [4] * g.free_rank


def _cyclic_kernel(images: Sequence[int]) -> List[List[int]]:
    n = len(images)
    p = next(i for i, a in enumerate(images) if a % 2)
    inverse = images[p] % 4  # 1 and 3 are their own inverses mod 4
    rows = []
    for j in range(n):
        row = [0] * n
        if j == p:
            row[p] = 4
        else:
            row[j] = 1
            row[p] = -((images[j] * inverse) % 4)
        rows.append(row)
    return rows


def _klein_kernel(images: Sequence[Tuple[int, int]]) -> List[List[int]]:
    n = len(images)
    p = next(i for i, v in enumerate(images) if v != (0, 0))
    q = next(i for i, v in enumerate(images) if v not in ((0, 0), images[p]))
    vp, vq = images[p], images[q]
    rows = []
    for j in range(n):
        row = [0] * n
        if j in (p, q):
            row[j] = 2
        else:
            row[j] = 1
            for alpha, beta in product((0, 1), repeat=2):
                combo = ((alpha * vp[0] + beta * vq[0]) % 2, (alpha * vp[1] + beta * vq[1]) % 2)
                if combo == images[j]:
                    row[p] += alpha
                    row[q] += beta
                    break
        rows.append(row)
    return rows


def _spans_klein(images: Sequence[Tuple[int, int]]) -> bool:
    nonzero = {v for v in images if v != (0, 0)}
    return len(nonzero) >= 2


def enumerate_order4_quotients(g: AbelianInvariants) -> List[QuotientDescriptor]:
    """One descriptor per index-four subgroup, ordered by kernel Hermite basis."""
    moduli = _summand_moduli(g)
    n = len(moduli)
    relevant = [i for i, m in enumerate(moduli) if m > 1]
    kernels: Dict[Tuple[int, ...], QuotientType] = {}

    cyclic_choices = [range(4) if moduli[i] == 4 else (0, 2) for i in relevant]
    for choice in product(*cyclic_choices):
        images = [0] * n
        for i, a in zip(relevant, choice):
            images[i] = a
        if not any(a % 2 for a in images):
            continue
        basis = hermite_normal_form(_cyclic_kernel(images), n)
        kernels[tuple(x for row in basis for x in row)] = QuotientType.C4

    klein_values = [(0, 0), (0, 1), (1, 0), (1, 1)]
    for choice in product(klein_values, repeat=len(relevant)):
        images = [(0, 0)] * n
        for i, v in zip(relevant, choice):
            images[i] = v
        if not _spans_klein(images):
            continue
        basis = hermite_normal_form(_klein_kernel(images), n)
        kernels[tuple(x for row in basis for x in row)] = QuotientType.V4

    descriptors = [
        QuotientDescriptor(IntMatrix(n, n, key), quotient_type)
        for key, quotient_type in kernels.items()
    ]
    descriptors.sort(key=QuotientDescriptor.sort_key)
    return descriptors
