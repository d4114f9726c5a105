"""Golden triple-intersection data for N = 14, f = 3, a = 3 and its checker."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diffsets import DiffSetSpec, FXParams, build_fx_diffset, paley_diffset
from .finite_field import FieldCtx, FieldParams, build_field
from .invariants import _TSetCache, _transform_for
from .ntheory import odd_primes_up_to

A = 3
F = 3
PRIMES = (11, 23, 67, 79, 107)
INDEX_SETS = (
    (0, 1, 2, 3, 4, 5, 6),
    (0, 1, 2, 3, 4, 6, 12),
    (0, 1, 6, 9, 10, 11, 12),
    (0, 1, 2, 4, 6, 10, 12),
)


@dataclass(frozen=True)
class Row:
    """One table line: ``exceptions`` pins n_t exactly; every other odd prime
    t satisfies n_t >= ``rest`` (or n_t == ``rest`` when ``rest_exact``)."""

    p: int
    index_set: tuple[int, ...] | None  # None marks the Paley row
    T_set: tuple[int, ...]
    exceptions: dict[int, int] = field(default_factory=dict)
    rest: int = 3
    rest_exact: bool = False

    @property
    def N(self) -> int:
        return 2 if self.index_set is None else 14

    @property
    def label(self) -> str:
        I = "Paley" if self.index_set is None else "{" + ",".join(map(str, self.index_set)) + "}"
        return f"({self.p},{F},{self.N}) I={I}"


def _fx(p, k, T, exc=None):
    return Row(p, INDEX_SETS[k], tuple(T), dict(exc or {}))


def _paley(p, T, exc=None, rest=2):
    return Row(p, None, tuple(T), dict(exc or {}), rest, True)


ROWS: tuple[Row, ...] = (
    _fx(11, 0, (159, 162, 164, 167, 169, 172), {5: 2}),
    _fx(11, 1, (157, 160, 165, 166, 171, 174), {3: 2}),
    _fx(11, 2, (147, 158, 164, 167, 173, 184)),
    _fx(11, 3, (163, 164, 167, 168)),
    _paley(11, (157, 174), {17: 1}),
    _fx(23, 0, (1497, 1498, 1503, 1515, 1525, 1537, 1542, 1543), {3: 2}),
    _fx(23, 1, (1498, 1503, 1508, 1514, 1526, 1532, 1537, 1542)),
    _fx(23, 2, (1481, 1509, 1514, 1526, 1531, 1559), {5: 2}),
    _fx(23, 3, (1508, 1514, 1526, 1532), {3: 1}),
    _paley(23, (1520,), rest=1),
    _fx(67, 0, (37457, 37519, 37525, 37587, 37602, 37664, 37670, 37732)),
    _fx(67, 1, (37453, 37523, 37587, 37591, 37598, 37602, 37666, 37736)),
    _fx(67, 2, (37526, 37587, 37594, 37595, 37602, 37663)),
    _fx(67, 3, (37543, 37559, 37630, 37646), {3: 2, 29: 2}),
    _paley(67, (37502, 37687)),
    _fx(79, 0, (61470, 61575, 61607, 61623, 61636, 61652, 61684, 61789)),
    _fx(79, 1, (61398, 61535, 61549, 61552, 61707, 61710, 61724, 61861)),
    _fx(79, 2, (61513, 61533, 61546, 61713, 61726, 61746), {3: 2, 5: 2}),
    _fx(79, 3, (61434, 61511, 61748, 61825), {7: 2, 11: 2, 157: 2}),
    _paley(79, (61519, 61740)),
    _fx(107, 0, (152751, 152895, 152976, 153021, 153238, 153283, 153364, 153508), {3: 2}),
    _fx(107, 1, (152969, 153065, 153092, 153167, 153194, 153290), {3: 1}),
    _fx(107, 2, (152643, 153040, 153102, 153157, 153219, 153616), {3: 2}),
    _fx(107, 3, (153028, 153103, 153156, 153231), {3: 2, 5: 2}),
    _paley(107, (152977, 153282)),
)


@dataclass
class Cell:
    """One checked claim.  ``implied`` is what the printed T-set alone forces
    for an n_t claim; a printed claim that contradicts it is an erratum."""

    row: str
    column: str
    expected: object
    computed: object
    implied: object = None

    @property
    def ok(self) -> bool:
        return self.expected == self.computed

    @property
    def status(self) -> str:
        if self.ok:
            return "ok"
        if self.implied is not None and self.implied == self.computed:
            return "erratum"
        return "mismatch"

    def to_dict(self) -> dict:
        return {"row": self.row, "column": self.column, "expected": self.expected,
                "computed": self.computed, "status": self.status}


def build_row_diffset(ctx: FieldCtx, row: Row) -> DiffSetSpec:
    if row.index_set is None:
        return paley_diffset(ctx)
    return build_fx_diffset(ctx, FXParams(7), row.index_set)


def n_t_profile(D: DiffSetSpec, cache: _TSetCache, bound: int) -> dict[int, int]:
    """n_t over odd primes t <= bound, from the T-values of D^(t^-1 mod N)."""
    return {t: len({v % t for v in cache.values(_transform_for(t, D.N))})
            for t in odd_primes_up_to(bound)}


def check_row(ctx: FieldCtx, row: Row) -> list[Cell]:
    D = build_row_diffset(ctx, row)
    cache = _TSetCache(D, A)
    cells = [Cell(row.label, "T_set", list(row.T_set), sorted(set(cache.get(D))))]
    units = sorted({tuple(sorted(set(cache.values(s)))) for s in range(1, D.N, 2)
                    if s % 7 or D.N == 2})
    cells.append(Cell(row.label, "T_set independent of t", True, len(units) == 1))
    T = sorted(set(cache.get(D)))
    bound = max([T[-1] - T[0] + 1, 3] + list(row.exceptions))
    profile = n_t_profile(D, cache, bound)
    printed = {t: len({v % t for v in row.T_set}) for t in profile}
    for t, n in sorted(row.exceptions.items()):
        cells.append(Cell(row.label, f"n_{t}", n, profile.get(t), printed.get(t)))
    rule = f"n_t {'=' if row.rest_exact else '>='} {row.rest} otherwise"
    cells.append(Cell(row.label, rule, [], _violations(row, profile), _violations(row, printed)))
    return cells


def _violations(row: Row, profile: dict[int, int]) -> list[int]:
    others = {t: n for t, n in profile.items() if t not in row.exceptions}
    if row.rest_exact:
        return sorted(t for t, n in others.items() if n != row.rest)
    return sorted(t for t, n in others.items() if n < row.rest)


def run_table1(primes=PRIMES) -> list[Cell]:
    cells: list[Cell] = []
    for p in primes:
        ctx = build_field(FieldParams(p, F))
        for row in ROWS:
            if row.p == p:
                cells.extend(check_row(ctx, row))
    return cells
