#!/usr/bin/env python3
"""Regenerate the bundled census and the reference Khovanov tables.

Needs the ``database_knotinfo`` package (KnotInfo/LinkInfo tables), which
is not a runtime dependency:

    pip install database_knotinfo
    python tools/make_census.py

Writes
  src/khtorsion/data/census.tsv    prime knots <= 10, links <= 7, TL_k, braid twins
  src/khtorsion/data/stretch.tsv   13n_3663 and the (4,5)-torus knot
  tests/data/khovanov_reference.tsv  KnotInfo/LinkInfo Khovanov polynomials
"""

import argparse
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from khtorsion.diagram import braid_closure_pd as braid_pd, torus_link_pd  # noqa: E402


def pd_text(pd):
    return "[" + ",".join("[" + ",".join(str(v) for v in x) + "]" for x in pd) + "]"


def _int(x):
    try:
        return int(x)
    except (TypeError, ValueError):
        return None


def line(name, pd, **meta):
    keys = "".join(f"\t{k}={v}" for k, v in meta.items() if v is not None)
    return f"{name}\t{pd}{keys}\n"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--knots-max", type=int, default=10)
    ap.add_argument("--links-max", type=int, default=7)
    args = ap.parse_args(argv)

    import database_knotinfo as dk

    census, refs = [], []
    census.append(line("0_1", "[]", signature=0, alternating="true", split="false",
                       exceptional="true"))
    for r in dk.link_list()[1:]:
        n = _int(r["crossing_number"])
        if n is None or n == 0 or n > args.knots_max:
            continue
        pd = re.sub(r"\s+", "", r["pd_notation"])
        census.append(line(r["name"], pd, signature=_int(r["signature"]),
                           alternating="true" if r["alternating"] == "Y" else "false",
                           split="false"))
        refs.append(f"{r['name']}\tintegral\t{r['khovanov_unreduced_integral_polynomial']}\n")

    for r in dk.link_list(proper_links=True)[1:]:
        n = _int(r["crossing_number"])
        if n is None or n > args.links_max:
            continue
        pd = re.sub(r"\s+", "", r["pd_notation_vector"]).replace("{", "[").replace("}", "]")
        name = r["name"]
        exc = "true" if name.startswith("L2a1") else None
        census.append(line(name, pd, signature=_int(r["signature"]),
                           alternating="true" if r["alternating"] == "Y" else "false",
                           split="false", exceptional=exc))
        refs.append(f"{name}\trational\t{r['khovanov_polynomial']}\n")

    twins = {3: "3_1", 5: "5_1", 7: "7_1", 9: "9_1"}
    for k in range(2, 10):
        census.append(line(f"TL_{k}", pd_text(torus_link_pd(k)), signature=-(k - 1),
                           alternating="true", split="false",
                           exceptional="true" if k == 2 else None,
                           same_as=twins.get(k)))
    census.append(line("T(3,4)", pd_text(braid_pd([1, 2] * 4, 3)), signature=-6,
                       alternating="false", split="false", same_as="8_19"))
    census.append(line("T(3,5)", pd_text(braid_pd([1, 2] * 5, 3)), signature=-8,
                       alternating="false", split="false", same_as="10_124"))
    census.append(line("4_1'", pd_text(braid_pd([1, -2, 1, -2], 3)), signature=0,
                       alternating="true", split="false", same_as="4_1"))

    data = ROOT / "src" / "khtorsion" / "data"
    data.mkdir(parents=True, exist_ok=True)
    head = "# name\tpd\tkey=value metadata (generated by tools/make_census.py)\n"
    (data / "census.tsv").write_text(head + "".join(census))

    stretch = []
    for r in dk.link_list()[1:]:
        if r["name"] == "13n_3663":
            stretch.append(line("13n_3663", re.sub(r"\s+", "", r["pd_notation"]),
                                signature=_int(r["signature"]), alternating="false",
                                split="false"))
            refs.append(f"13n_3663\tintegral\t{r['khovanov_unreduced_integral_polynomial']}\n")
    stretch.append(line("T(4,5)", pd_text(braid_pd([1, 2, 3] * 5, 4)), signature=-8,
                        alternating="false", split="false"))
    (data / "stretch.tsv").write_text(head + "".join(stretch))

    tdata = ROOT / "tests" / "data"
    tdata.mkdir(parents=True, exist_ok=True)
    (tdata / "khovanov_reference.tsv").write_text(
        "# name\tkind\tKhovanov polynomial as published by KnotInfo/LinkInfo\n" + "".join(refs))
    print(f"{len(census)} census entries, {len(stretch)} stretch entries, {len(refs)} references")


if __name__ == "__main__":
    main()
