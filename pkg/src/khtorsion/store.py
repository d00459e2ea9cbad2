"""
Result records and the on-disk store used by ``khtorsion batch``.

Layout of a store directory::

    records/<diagram_hash>.json   one ResultRecord per diagram
    names.json                    census name -> diagram_hash
    index.csv                     one summary row per name

Every file is written to a temporary name and moved into place, so a
crashed run never leaves half a record behind.
"""

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .diagram import LinkDiagram, LinkMetadata
from .homology import HomologyTable
from .invariants import (ThinnessReport, determinant, graded_euler, jones_reduced,
                         khovanov_polynomial, torsion_polynomial)
from .linalg import AbelianGroup

log = logging.getLogger(__name__)

__all__ = ["diagram_hash", "ResultRecord", "make_record", "table_from_record",
           "Store", "INDEX_FIELDS"]

INDEX_FIELDS = ["name", "crossings", "h_class", "t_class", "total_rank",
                "torsion_orders", "determinant", "diagram_hash"]


def diagram_hash(d: LinkDiagram) -> str:
    """sha256 of the PD relabeled by first appearance.

    A base point, when set, is relabeled the same way and included, since
    it can change reduced homology of links.
    """
    pd, loops = d.normalized_pd()
    text = ";".join(",".join(map(str, x)) for x in pd) + f"|{loops}"
    if d.base_point is not None:
        order = {}
        for x in d.pd:
            for v in x:
                order.setdefault(v, len(order) + 1)
        text += f"|bp={order.get(d.base_point, d.base_point)}"
    return hashlib.sha256(text.encode()).hexdigest()


def _groups_json(groups):
    if groups is None:
        return None
    return [{"i": i, "j": j, "rank": g.rank, "torsion": [list(t) for t in g.torsion]}
            for (i, j), g in sorted(groups.items())]


def _groups_from_json(rows):
    if rows is None:
        return None
    return {(r["i"], r["j"]): AbelianGroup.make(r["rank"], dict(map(tuple, r["torsion"])))
            for r in rows}


def _meta_json(meta):
    return {k: v for k, v in asdict(meta).items() if v is not None}


@dataclass
class ResultRecord:
    name: str
    pd: str
    diagram_hash: str
    meta: dict
    n_crossings: int
    m_components: int
    linking: list
    groups: list
    reduced: list
    betti: dict
    polys: dict
    classification: dict
    determinant: int = None
    generators: int = 0
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    @property
    def reduced_present(self):
        return self.reduced is not None

    def index_row(self):
        orders = sorted({q for g in self.groups for q, _ in g["torsion"]})
        return {
            "name": self.name,
            "crossings": self.n_crossings,
            "h_class": self.classification.get("h_class", ""),
            "t_class": self.classification.get("t_class", ""),
            "total_rank": sum(g["rank"] for g in self.groups),
            "torsion_orders": " ".join(map(str, orders)),
            "determinant": "" if self.determinant is None else self.determinant,
            "diagram_hash": self.diagram_hash,
        }


def make_record(d: LinkDiagram, table: HomologyTable, report: ThinnessReport) -> ResultRecord:
    K = graded_euler(table)
    try:
        J = jones_reduced(table)
        det = determinant(J)
        Jl = J.to_list()
    except ArithmeticError:
        J, det, Jl = None, None, None
    km = report.knight
    cls = {
        "h_class": report.h_class,
        "t_class": report.t_class,
        "verdict": report.verdict(),
        "s": report.s_value,
        "kh_prime": None if report.knight_poly is None else report.knight_poly.to_list(),
        "upper_diagonal": report.upper_diagonal,
        "diagonals": sorted(report.diagonal_support),
        "mod_p_thin": {str(p): v for p, v in report.mod_p_thin.items()},
        "reason": report.reason,
        "excess": [list(x) for x in report.excess],
        "scope_note": report.scope_note,
        "knight_candidates": list(km.candidates) if km else [],
    }
    return ResultRecord(
        name=d.name or "",
        pd=d.to_text(),
        diagram_hash=diagram_hash(d),
        meta=_meta_json(d.meta),
        n_crossings=d.n_crossings,
        m_components=d.m_components,
        linking=[list(r) for r in (table.linking or ())],
        groups=_groups_json(table.groups),
        reduced=_groups_json(table.reduced),
        betti={str(p): [[i, j, n] for (i, j), n in sorted(b.items())]
               for p, b in table.betti.items()},
        polys={
            "kh": khovanov_polynomial(table).to_list(),
            "kT": torsion_polynomial(table).to_list(),
            "K": K.to_list(),
            "J": Jl,
        },
        classification=cls,
        determinant=det,
        generators=table.generators,
        seconds=round(table.seconds, 4),
    )


def table_from_record(rec: ResultRecord) -> HomologyTable:
    return HomologyTable(
        groups=_groups_from_json(rec.groups),
        reduced=_groups_from_json(rec.reduced),
        meta=LinkMetadata(**rec.meta),
        name=rec.name,
        m_components=rec.m_components,
        n_crossings=rec.n_crossings,
        linking=tuple(tuple(r) for r in rec.linking),
        betti={int(p): {(i, j): n for i, j, n in rows} for p, rows in rec.betti.items()},
        generators=rec.generators,
        seconds=rec.seconds,
    )


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Store:
    def __init__(self, root):
        self.root = Path(root)
        self.records = self.root / "records"
        self.names_path = self.root / "names.json"

    def _names(self):
        if self.names_path.exists():
            return json.loads(self.names_path.read_text(encoding="utf-8"))
        return {}

    def path_for(self, h):
        return self.records / f"{h}.json"

    def get(self, h) -> ResultRecord:
        p = self.path_for(h)
        if not p.exists():
            return None
        return ResultRecord.from_json(p.read_text(encoding="utf-8"))

    def lookup(self, name) -> ResultRecord:
        h = self._names().get(name)
        return None if h is None else self.get(h)

    def has(self, h, reduced=True, primes=()):
        rec = self.get(h)
        if rec is None:
            return False
        if reduced and rec.reduced is None:
            return False
        return all(str(p) in rec.betti for p in primes)

    def put(self, rec: ResultRecord):
        _atomic_write(self.path_for(rec.diagram_hash), rec.to_json())
        self.bind([(rec.name, rec.diagram_hash)])

    def bind(self, pairs):
        names = self._names()
        for name, h in pairs:
            if name:
                names[name] = h
        _atomic_write(self.names_path, json.dumps(names, indent=1, sort_keys=True))

    def write_index(self):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=INDEX_FIELDS, lineterminator="\n")
        w.writeheader()
        for name, h in sorted(self._names().items()):
            rec = self.get(h)
            if rec is None:
                continue
            row = rec.index_row()
            row["name"] = name
            w.writerow(row)
        _atomic_write(self.root / "index.csv", buf.getvalue())
