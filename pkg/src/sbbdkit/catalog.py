"""Bundled catalog of BIBDs whose number of blocks is a prime power."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .algebra import prime_power
from .errors import StructureError
from .incidence import develop_difference_set
from .sbbd import SbbdParams


@dataclass(frozen=True)
class CatalogEntry:
    v: int
    b: int
    r: int
    k: int
    lam: int
    remark: str = ""
    difference_set: tuple[int, ...] | None = None

    def relations(self) -> dict[str, bool]:
        return {
            "bk=vr": self.b * self.k == self.v * self.r,
            "lambda(v-1)=r(k-1)": self.lam * (self.v - 1) == self.r * (self.k - 1),
            "b prime power": prime_power(self.b) is not None,
        }

    def predicted_lambda(self) -> SbbdParams:
        """Parameters from pasting onto a (b, b; 1) difference matrix."""
        return SbbdParams(self.b * self.r, self.b * self.lam, self.r**2, self.r**2)

    def incidence(self):
        if self.difference_set is None:
            raise StructureError(f"no generator bundled for ({self.v},{self.b},{self.r},{self.k},{self.lam})")
        return develop_difference_set(self.difference_set, self.v)

    def key(self) -> str:
        return f"{self.v}-{self.b}-{self.r}-{self.k}-{self.lam}"


def load_catalog() -> list[CatalogEntry]:
    text = resources.files("sbbdkit").joinpath("data/table1.json").read_text()
    raw = json.loads(text)
    return [
        CatalogEntry(
            e["v"], e["b"], e["r"], e["k"], e["lambda"], e.get("remark", ""),
            tuple(e["difference_set"]) if "difference_set" in e else None,
        )
        for e in raw["entries"]
    ]


def find_entry(ref) -> CatalogEntry:
    """Look up by position, by "v-b-r-k-lambda" key, or by remark such as "PG(2,3)"."""
    entries = load_catalog()
    if isinstance(ref, int):
        return entries[ref]
    for e in entries:
        if ref in (e.key(), e.remark):
            return e
    raise StructureError(f"no catalog entry matches {ref!r}")
