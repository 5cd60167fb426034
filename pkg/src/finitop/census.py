"""Exhaustive enumeration of labelled topologies and per-space census rows."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional

from . import frame, stone
from .codensity import DEFAULT_BOUNDS, FINSET, SIERPINSKI, check_bound, GeneratorSpec
from .monad import verify_laws
from .topology import FiniteSpace, classify, validate_topology

DEFAULT_CENSUS_CAP = 4


class CapExceeded(ValueError):
    pass


def enumerate_topologies(n: int, cap: int = DEFAULT_CENSUS_CAP) -> list[FiniteSpace]:
    """Every topology on points 0..n-1.

    Each family of proper nonempty subsets is tried in ascending order of
    its bitmask over those subsets; the family is kept when, together with
    the empty and the full set, it is closed under union and intersection.
    """
    if n > cap:
        raise CapExceeded(f"census size {n} exceeds cap {cap}")
    full = (1 << n) - 1
    proper = list(range(1, full))
    out = []
    for choice in range(1 << len(proper)):
        family = {0, full}
        for i, a in enumerate(proper):
            if choice >> i & 1:
                family.add(a)
        if _closed(family):
            out.append(validate_topology(n, family))
    return out


def _closed(family: set[int]) -> bool:
    members = list(family)
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if a | b not in family or a & b not in family:
                return False
    return True


@dataclass
class CensusRow:
    space: str
    points: int
    opens: int
    is_t0: bool
    is_discrete: bool
    is_sober: bool
    is_stone: bool
    sc_size: int
    fpo_size: int
    sc_unit_iso: bool
    fpo_unit_iso: bool
    monad_laws: bool
    limit_finset: Optional[bool] = None
    limit_sierpinski: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.monad_laws and self.limit_finset is not False and self.limit_sierpinski is not False


def census_row(x: FiniteSpace, limits: bool = False) -> CensusRow:
    c = classify(x)
    laws = all(verify_laws(m, x, [x]).passed for m in (stone.STONE, frame.SOBER))
    row = CensusRow(
        space=x.canonical_string(),
        points=x.n,
        opens=len(x.opens),
        is_t0=c.is_t0,
        is_discrete=c.is_discrete,
        is_sober=c.is_sober,
        is_stone=c.is_stone,
        sc_size=stone.sc_carrier(x).n,
        fpo_size=frame.fpo_carrier(x).n,
        sc_unit_iso=stone.eta(x).is_homeomorphism(),
        fpo_unit_iso=frame.unit_eta_sober(x).is_homeomorphism(),
        monad_laws=laws,
    )
    if limits:
        row.limit_finset = check_bound(x, GeneratorSpec(FINSET, DEFAULT_BOUNDS[FINSET])).iso
        row.limit_sierpinski = check_bound(
            x, GeneratorSpec(SIERPINSKI, DEFAULT_BOUNDS[SIERPINSKI])
        ).iso
    return row


def _row_plain(x: FiniteSpace) -> CensusRow:
    return census_row(x, False)


def _row_limits(x: FiniteSpace) -> CensusRow:
    return census_row(x, True)


def run_census(
    n: int, cap: int = DEFAULT_CENSUS_CAP, jobs: int = 1, limits: bool = False
) -> list[CensusRow]:
    spaces = enumerate_topologies(n, cap)
    work = _row_limits if limits else _row_plain
    if jobs <= 1:
        return [work(x) for x in spaces]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, spaces, chunksize=8))


def rows_to_csv(rows: Iterable[CensusRow], limits: bool = False) -> str:
    names = [f.name for f in fields(CensusRow)]
    if not limits:
        names = [n for n in names if not n.startswith("limit_")]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in asdict(row).items()})
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)
