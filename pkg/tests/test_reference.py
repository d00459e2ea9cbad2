"""Census homology against the Khovanov polynomials published by
KnotInfo (integral, knots) and LinkInfo (ranks, links)."""

from helpers import DATA
from refparse import parse_reference


def _references():
    for line in (DATA / "khovanov_reference.tsv").read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        name, kind, poly = line.split("\t")
        yield name, kind, poly


def test_reference_file_parses():
    refs = list(_references())
    assert len(refs) > 290
    ref = dict((n, p) for n, _, p in refs)
    assert parse_reference(ref["3_1"]) == {(0, 1): (1, {}), (0, 3): (1, {}), (2, 5): (1, {}),
                                           (3, 9): (1, {}), (3, 7): (0, {2: 1})}


def test_census_matches_published_tables(census):
    bad, seen = [], 0
    for name, kind, poly in _references():
        if name not in census:
            continue
        seen += 1
        ref = parse_reference(poly)
        groups = census[name].table.groups
        if kind == "integral":
            got = {k: (g.rank, g.torsion_dict) for k, g in groups.items()}
        else:
            got = {k: g.rank for k, g in groups.items() if g.rank}
            ref = {k: r for k, (r, _) in ref.items() if r}
        if got != ref:
            bad.append(name)
    assert seen > 290
    assert not bad, bad[:10]
