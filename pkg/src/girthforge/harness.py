"""Girth bounds and the (R, p) survey."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .exact2 import ETA
from .forge import GeneratorSet, build_genset, margulis_genset
from .girth import (
    DEFAULT_BUDGET,
    MemoryBudgetExceeded,
    cayley_spec,
    check_injective,
    closure_bytes,
    component_size,
    even_girth_bfs,
    evaluate_witness,
    girth_bfs,
    is_cyclically_reduced,
)
from .lattice import is_prime

# Margulis' asymptotic constant 2 ln 3 / (3 ln(1 + sqrt 2)) for the operator norm.
MARGULIS_C = 2 * math.log(3) / (3 * math.log(1 + math.sqrt(2)))
# operator-norm data for the Margulis generators: eta = 1, M = 1 + sqrt 2
MARGULIS_OPERATOR_NORM = {"eta": 1, "M": 1 + math.sqrt(2)}

MARGULIS = "margulis"
CSV_COLUMNS = ["R", "p", "d", "max_norm", "n_p", "girth", "even_girth", "lemma_bound", "moore_bound", "ratio_C", "flags"]

Radius = Union[int, str]


def lemma_bound(p: int, M: int, eta: int = ETA) -> int:
    """Least k >= 1 with (eta*M)^ceil(k/2) >= eta*p/2, in integers."""
    if M < 2 or eta < 1:
        raise ValueError("need M >= 2 and eta >= 1")
    half = 1
    while 2 * (eta * M) ** half < eta * p:
        half += 1
    # smallest k with ceil(k/2) == half
    return 2 * half - 1


def moore_bound(n: int, d: int) -> float:
    if d < 3:
        raise ValueError("need d >= 3")
    return 1 + 2 * math.log(n) / math.log(d - 1)


def half_girth_bound_holds(girth: int, p: int, M: int) -> bool:
    return (2 * M) ** (-(-girth // 2)) >= p


@dataclass
class SurveyCell:
    R: Radius
    p: int
    d: int
    max_norm: int
    n_p: Optional[int] = None
    girth: Optional[int] = None
    even_girth: Optional[int] = None
    lemma_bound: Optional[int] = None
    moore_bound: Optional[float] = None
    ratio_C: Optional[float] = None
    flags: list[str] = field(default_factory=list)
    witness: tuple[int, ...] = ()

    @property
    def computed(self) -> bool:
        return self.girth is not None

    @property
    def passed(self) -> bool:
        return self.computed and self.girth >= self.lemma_bound and theorem_check(self)

    def row(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return f"{x:.6f}"
            return str(x)

        return [fmt(getattr(self, c)) if c != "flags" else "|".join(self.flags) for c in CSV_COLUMNS]


def theorem_check(cell: SurveyCell) -> bool:
    """(2M)^ceil(g/2) >= p, which with n_p <= p^3 gives ceil(g/2) >= ln(n_p) / (3 ln 2M)."""
    if cell.girth is None:
        return False
    return half_girth_bound_holds(cell.girth, cell.p, cell.max_norm)


def genset_for(R: Radius) -> GeneratorSet:
    return margulis_genset() if R == MARGULIS else build_genset(int(R))


def survey_cell(R: Radius, p: int, budget: int = DEFAULT_BUDGET, even: bool = True, W: Optional[GeneratorSet] = None) -> SurveyCell:
    if W is None:
        W = genset_for(R)
    cell = SurveyCell(R, p, W.size, W.max_norm)
    if not is_prime(p):
        cell.flags.append("skipped:not_prime")
        return cell
    if not check_injective(W, p):
        cell.flags.append("skipped:noninjective")
        return cell
    if closure_bytes(p) > budget:
        cell.flags.append("skipped:budget")
        return cell
    spec = cayley_spec(W, p)
    try:
        cell.n_p = component_size(spec, budget)
    except MemoryBudgetExceeded:
        cell.flags.append("skipped:budget")
        return cell
    res = girth_bfs(spec)
    cell.girth = res.girth
    cell.witness = res.witness
    if not (evaluate_witness(spec, res.witness).is_identity() and is_cyclically_reduced(spec, res.witness)):
        cell.flags.append("bad_witness")
    if even:
        cell.even_girth = even_girth_bfs(spec).girth
    cell.lemma_bound = lemma_bound(p, W.max_norm, W.eta)
    if cell.n_p > cell.d:
        cell.moore_bound = moore_bound(cell.n_p, cell.d)
        cell.ratio_C = cell.girth * math.log(cell.d - 1) / math.log(cell.n_p)
    if res.degenerate:
        cell.flags.append("degenerate")
    cell.flags.append("pass" if cell.passed else "FAIL")
    if cell.moore_bound is not None and cell.girth > cell.moore_bound + 1:
        cell.flags.append("moore_violation")
    return cell


def _sort_key(R: Radius) -> tuple[int, int]:
    return (0, 0) if R == MARGULIS else (1, int(R))


def _cell_task(args):
    R, p, budget, even = args
    return survey_cell(R, p, budget, even)


def survey(
    radii: Sequence[Radius],
    primes: Union[Sequence[int], Mapping[Radius, Sequence[int]]],
    budget: int = DEFAULT_BUDGET,
    even: bool = True,
    jobs: int = 1,
) -> list[SurveyCell]:
    """One cell per (R, p), ordered by R (Margulis first) then p.

    ``primes`` is either one list used for every radius or a per-radius map.
    Cells that cannot be computed are kept, with a ``skipped:<reason>`` flag.
    """
    tasks = []
    for R in sorted(set(radii), key=_sort_key):
        ps = primes[R] if isinstance(primes, Mapping) else primes
        tasks += [(R, p, budget, even) for p in sorted(set(ps))]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_cell_task, tasks))
    gensets = {R: genset_for(R) for R, *_ in tasks}
    return [survey_cell(R, p, b, e, gensets[R]) for R, p, b, e in tasks]


def admissible_primes(R: Radius, count: int) -> list[int]:
    """The first ``count`` primes above 36 R^2 (above 2 for Margulis)."""
    out = []
    q = 2 if R == MARGULIS else 36 * int(R) ** 2
    while len(out) < count:
        q += 1
        if is_prime(q):
            out.append(q)
    return out


def cells_to_csv(cells: Sequence[SurveyCell]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in cells:
        writer.writerow(cell.row())
    return buf.getvalue()
