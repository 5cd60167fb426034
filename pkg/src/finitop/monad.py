"""Law checking shared by the Stone and sober monads."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .topology import ContinuousMap, FiniteSpace, continuous_maps, identity


class UnitNotIso(RuntimeError):
    """The unit at a carrier failed to be a homeomorphism."""


@dataclass(frozen=True)
class Monad:
    name: str
    carrier: Callable[[FiniteSpace], FiniteSpace]
    unit: Callable[[FiniteSpace], ContinuousMap]
    fmap: Callable[[ContinuousMap], ContinuousMap]
    mult: Callable[[FiniteSpace], ContinuousMap]


@dataclass
class LawReport:
    monad: str
    space: FiniteSpace
    checked: dict[str, int] = field(default_factory=dict)
    failures: dict[str, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def record(self, law: str, ok: bool, witness: str = "") -> None:
        self.checked[law] = self.checked.get(law, 0) + 1
        self.failures.setdefault(law, [])
        if not ok:
            self.failures[law].append(witness)

    def to_dict(self) -> dict:
        return {
            "monad": self.monad,
            "space": self.space.canonical_string(),
            "passed": self.passed,
            "laws": {
                law: {"checked": self.checked[law], "failures": self.failures[law]}
                for law in self.checked
            },
        }


def _diff(f: ContinuousMap, g: ContinuousMap) -> str:
    bad = [p for p in f.domain.points if f.mapping[p] != g.mapping[p]]
    return f"points {bad}: {[f.mapping[p] for p in bad]} vs {[g.mapping[p] for p in bad]}"


def _agree(report: LawReport, law: str, f: ContinuousMap, g: ContinuousMap, where: str) -> None:
    ok = f.mapping == g.mapping
    report.record(law, ok, "" if ok else f"{where}: {_diff(f, g)}")


def verify_laws(
    monad: Monad, x: FiniteSpace, test_spaces: Iterable[FiniteSpace] = ()
) -> LawReport:
    """Unit, associativity, idempotence and naturality checks at ``x``.

    Naturality is checked against every continuous map from ``x`` into each
    space of ``test_spaces``.
    """
    report = LawReport(monad.name, x)
    tx = monad.carrier(x)
    ttx = monad.carrier(tx)
    mu = monad.mult(x)
    eta_t = monad.unit(tx)
    id_t = identity(tx)

    _agree(report, "left_unit", mu @ eta_t, id_t, "mu . eta_T")
    _agree(report, "right_unit", mu @ monad.fmap(monad.unit(x)), id_t, "mu . T(eta)")
    _agree(report, "associativity", mu @ monad.mult(tx), mu @ monad.fmap(mu), "mu . mu_T vs mu . T(mu)")
    _agree(report, "mu_inverts_eta", eta_t @ mu, identity(ttx), "eta_T . mu")
    report.record("mu_iso", mu.is_homeomorphism(), "mu is not a homeomorphism")

    for y in test_spaces:
        eta_x, eta_y = monad.unit(x), monad.unit(y)
        mu_y = monad.mult(y)
        for f in continuous_maps(x, y):
            tf = monad.fmap(f)
            where = f"f={list(f.mapping)} into {y.canonical_string()}"
            _agree(report, "eta_naturality", tf @ eta_x, eta_y @ f, where)
            _agree(report, "mu_naturality", mu_y @ monad.fmap(tf), tf @ mu, where)
    return report
