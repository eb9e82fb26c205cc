"""Coset enumeration and low-index subgroups of finitely presented groups.

Coset tables act on the right: coset ``c`` times generator ``x`` is
``table[c][col(x)]`` where ``col(i) = 2(i-1)`` and ``col(-i) = 2(i-1) + 1``.
Cosets are 0-based, coset 0 being the subgroup itself, and every table is
returned in standard form (cosets numbered in order of first appearance
when the table is read row by row).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fundamental_group import FpPresentation, SimplifiedPresentation
from .words import inverse, multiply, reduce_word


class Overflow(RuntimeError):
    def __init__(self, max_cosets: int):
        super().__init__(f"coset enumeration exceeded {max_cosets} cosets")
        self.max_cosets = max_cosets


def col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


@dataclass
class CosetTable:
    """Complete coset table of a finite-index subgroup."""

    table: list[list[int]]
    generator_count: int
    subgroup_generators: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def index(self) -> int:
        return len(self.table)

    @property
    def action(self) -> list[list[int]]:
        """Per generator, the permutation ``c -> c * x`` of the 0-based cosets."""
        return [[row[2 * i] for row in self.table] for i in range(self.generator_count)]

    def act(self, c: int, w) -> int:
        t = self.table
        for x in w:
            c = t[c][col(x)]
        return c

    def is_valid(self, P: FpPresentation) -> bool:
        """Relators act trivially, the action is transitive and subgroup words fix coset 0."""
        n = self.index
        for r in P.relators:
            if any(self.act(c, r) != c for c in range(n)):
                return False
        for c, row in enumerate(self.table):
            for i in range(self.generator_count):
                if self.table[row[2 * i]][2 * i + 1] != c:
                    return False
        seen = {0}
        stack = [0]
        while stack:
            c = stack.pop()
            for d in self.table[c]:
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        if len(seen) != n:
            return False
        return all(self.act(0, w) == 0 for w in self.subgroup_generators)

    def coset_representatives(self) -> list[tuple[int, ...]]:
        """A word carrying coset 0 to each coset, from a breadth-first spanning tree."""
        reps: list[tuple[int, ...] | None] = [None] * self.index
        reps[0] = ()
        queue = [0]
        for c in queue:
            for j, d in enumerate(self.table[c]):
                if reps[d] is None:
                    x = j // 2 + 1
                    reps[d] = reps[c] + ((x if j % 2 == 0 else -x),)
                    queue.append(d)
        return reps

    def schreier_generators(self) -> list[tuple[int, ...]]:
        reps = self.coset_representatives()
        gens = []
        for c in range(self.index):
            for i in range(self.generator_count):
                d = self.table[c][2 * i]
                w = reduce_word(reps[c] + (i + 1,) + inverse(reps[d]))
                if w:
                    gens.append(w)
        return gens

    def pullback(self, images, generator_count: int) -> "CosetTable":
        """Table for a presentation whose generator ``i`` acts as the word ``images[i-1]``."""
        n = self.index
        rows = [[0] * (2 * generator_count) for _ in range(n)]
        for i, w in enumerate(images):
            for c in range(n):
                d = self.act(c, w)
                rows[c][2 * i] = d
                rows[d][2 * i + 1] = c
        return CosetTable(rows, generator_count, [])

    def canonical_form(self) -> tuple:
        """Least standardized table over all choices of base coset (a conjugacy-class key)."""
        return min(_standardize(self.table, b)[1] for b in range(self.index))

    def to_json(self) -> dict:
        return {"index": self.index, "action": [[c + 1 for c in perm] for perm in self.action]}


def word_action(T: CosetTable, w) -> list[int]:
    """Permutation ``c -> c * w`` of the cosets of ``T`` (0-based)."""
    return [T.act(c, w) for c in range(T.index)]


def _standardize(table, base=0):
    """Renumber cosets by first appearance starting from ``base``; returns (order, flat key)."""
    order = [base]
    number = {base: 0}
    for c in order:
        for d in table[c]:
            if d not in number:
                number[d] = len(order)
                order.append(d)
    key = tuple(number[d] for c in order for d in table[c])
    return order, key


def _standard_table(table, gcount, subgens) -> CosetTable:
    order, key = _standardize(table, 0)
    w = 2 * gcount
    rows = [list(key[i * w:(i + 1) * w]) for i in range(len(order))]
    return CosetTable(rows, gcount, list(subgens))


class _Enumerator:
    """Hazelgrove-Leech-Trotter coset enumeration with coincidence processing."""

    def __init__(self, ncols: int, max_cosets: int):
        self.ncols = ncols
        self.max = max_cosets
        self.table: list[list[int]] = [[-1] * ncols]
        self.parent = [0]
        self.live = 1

    def rep(self, c):
        p = self.parent
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def alive(self, c):
        return self.parent[c] == c

    def define(self, c, x):
        if self.live >= self.max:
            raise Overflow(self.max)
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return d

    def _merge(self, a, b, queue):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.live -= 1
        queue.append(b)

    def coincidence(self, a, b):
        queue: list[int] = []
        self._merge(a, b, queue)
        t = self.table
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = t[e][x]
                if f < 0:
                    continue
                if t[f][x ^ 1] == e:
                    t[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if t[e1][x] >= 0:
                    self._merge(f1, t[e1][x], queue)
                elif t[f1][x ^ 1] >= 0:
                    self._merge(e1, t[f1][x ^ 1], queue)
                else:
                    t[e1][x] = f1
                    t[f1][x ^ 1] = e1

    def scan_and_fill(self, c, cols, define=True):
        t = self.table
        f = b = c
        i, j = 0, len(cols) - 1
        while True:
            while i <= j and t[f][cols[i]] >= 0:
                f = t[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][cols[j] ^ 1] >= 0:
                b = t[b][cols[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][cols[i]] = b
                t[b][cols[i] ^ 1] = f
                return
            if not define:
                return
            self.define(f, cols[i])


def todd_coxeter(P: FpPresentation, gens=(), max_cosets: int = 10**6) -> CosetTable:
    """Coset table of the subgroup generated by the words ``gens``.

    Raises :class:`Overflow` when more than ``max_cosets`` cosets are alive
    at once, after a lookahead pass failed to free space.
    """
    ncols = 2 * P.generator_count
    rels = [[col(x) for x in r] for r in P.relators if r]
    E = _Enumerator(ncols, max_cosets)
    for w in gens:
        E.scan_and_fill(0, [col(x) for x in reduce_word(w)])
    c = 0
    while c < len(E.table):
        if E.alive(c):
            try:
                for r in rels:
                    E.scan_and_fill(c, r)
                    if not E.alive(c):
                        break
                if E.alive(c):
                    for x in range(ncols):
                        if E.table[c][x] < 0:
                            E.define(c, x)
            except Overflow:
                _lookahead(E, rels)
                if E.live >= max_cosets:
                    raise
                continue
        c += 1
    live = [d for d in range(len(E.table)) if E.alive(d)]
    pos = {d: i for i, d in enumerate(live)}
    rows = [[pos[E.rep(x)] for x in E.table[d]] for d in live]
    return _standard_table(rows, P.generator_count, [reduce_word(w) for w in gens])


def _lookahead(E: _Enumerator, rels):
    for c in range(len(E.table)):
        if E.alive(c):
            for r in rels:
                E.scan_and_fill(c, r, define=False)
                if not E.alive(c):
                    break


def subgroup_index(P: FpPresentation, gens=(), max_cosets: int = 10**6) -> int:
    return todd_coxeter(P, gens, max_cosets).index


# -- low-index subgroups ------------------------------------------------------

def low_index_subgroups(P: FpPresentation | SimplifiedPresentation, n: int, exact: bool = False) -> list[CosetTable]:
    """One coset table per conjugacy class of subgroups of index at most ``n``.

    Tables are enumerated in standard form by backtracking over the first
    undefined entry, with relator scans forcing deductions and detecting
    contradictions.  Conjugacy classes are then merged by comparing each
    table's least standardized form over all base cosets.  Passing a
    :class:`SimplifiedPresentation` runs the search on the smaller
    presentation and pulls the tables back to the original generators.
    """
    if n < 1:
        raise ValueError("index bound must be positive")
    if isinstance(P, SimplifiedPresentation):
        found = low_index_subgroups(P.presentation, n, exact)
        return [T.pullback(P.images, P.original.generator_count) for T in found]
    g = P.generator_count
    ncols = 2 * g
    rels = [[col(x) for x in r] for r in P.relators if r]
    out: list[CosetTable] = []
    seen: set = set()

    table = [[-1] * ncols for _ in range(n)]
    if g == 0:
        return [CosetTable([[]], 0, [])] if not exact or n == 1 else []

    def deduce(table, count, queue):
        # scan every relator at every coset until nothing changes
        changed = True
        while changed:
            changed = False
            for c in range(count):
                for r in rels:
                    res = _scan_partial(table, c, r)
                    if res is False:
                        return False
                    if res:
                        changed = True
        return True

    def search(table, count):
        slot = None
        for c in range(count):
            row = table[c]
            for x in range(ncols):
                if row[x] < 0:
                    slot = (c, x)
                    break
            if slot:
                break
        if slot is None:
            if exact and count != n:
                return
            T = CosetTable([row[:] for row in table[:count]], g, [])
            key = T.canonical_form()
            if key not in seen:
                seen.add(key)
                out.append(T)
            return
        c, x = slot
        options = [d for d in range(count) if table[d][x ^ 1] < 0]
        if count < n:
            options.append(count)
        for d in options:
            new = [row[:] for row in table]
            new[c][x] = d
            new[d][x ^ 1] = c
            if deduce(new, max(count, d + 1), None):
                search(new, max(count, d + 1))

    search(table, 1)
    out.sort(key=lambda T: (T.index, T.canonical_form()))
    return out


def _scan_partial(table, c, r):
    """Scan relator ``r`` from coset ``c``; fill a single gap.

    Returns False on a contradiction, True if an entry was deduced and None
    otherwise.
    """
    f = c
    i = 0
    m = len(r)
    while i < m and table[f][r[i]] >= 0:
        f = table[f][r[i]]
        i += 1
    if i == m:
        return False if f != c else None
    b = c
    j = m - 1
    while j >= i and table[b][r[j] ^ 1] >= 0:
        b = table[b][r[j] ^ 1]
        j -= 1
    if j < i:
        return False if f != b else None
    if i == j:
        x = r[i]
        if table[b][x ^ 1] >= 0 and table[b][x ^ 1] != f:
            return False
        table[f][x] = b
        table[b][x ^ 1] = f
        return True
    return None
