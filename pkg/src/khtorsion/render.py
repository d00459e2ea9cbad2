"""
ASCII homology tables in the ``a[b,c]`` convention.

A cell ``a[b,c]`` is Z^a + Z_2^b + Z_4^c.  Bracket positions are the powers
of two 2, 4, 8, ... up to the largest one present; a missing factor leaves
its slot empty (``[,1]`` is Z_4).  Our extension for odd torsion: entries
after a ``;`` of the form ``q:m`` mean Z_q^m, and the cell ends in ``!`` so
it cannot be missed.  A rank-0 group prints as the bracket alone, a
torsion-free one as the bare rank.
"""

import re

from .linalg import AbelianGroup, factorize

__all__ = ["render_group", "parse_group", "render_table", "parse_table"]


def _is_two_power(q):
    return q & (q - 1) == 0


def render_group(g: AbelianGroup) -> str:
    if g.is_zero:
        return ""
    tors = g.torsion_dict
    twos = sorted(q for q in tors if _is_two_power(q))
    odd = sorted(q for q in tors if not _is_two_power(q))
    head = str(g.rank) if g.rank else ""
    if not tors:
        return head
    slots = []
    if twos:
        top = twos[-1].bit_length() - 1
        slots = [str(tors[2 ** k]) if 2 ** k in tors else "" for k in range(1, top + 1)]
    body = ",".join(slots)
    if odd:
        body += ";" + ",".join(f"{q}:{tors[q]}" for q in odd)
        return f"{head}[{body}]!"
    return f"{head}[{body}]"


_CELL = re.compile(r"^(\d*)(?:\[([^\]]*)\](!?))?$")


def parse_group(text: str) -> AbelianGroup:
    """Inverse of :func:`render_group`."""
    text = text.strip()
    if not text or text == ".":
        return AbelianGroup()
    m = _CELL.match(text)
    if not m:
        raise ValueError(f"bad table cell {text!r}")
    rank = int(m.group(1)) if m.group(1) else 0
    tors = {}
    if m.group(2) is not None:
        twos, _, odd = m.group(2).partition(";")
        for k, s in enumerate(twos.split(","), 1):
            if s.strip():
                tors[2 ** k] = int(s)
        for item in filter(None, (x.strip() for x in odd.split(","))):
            q, mult = item.split(":")
            if len(factorize(int(q))) != 1 or _is_two_power(int(q)):
                raise ValueError(f"{q} is not an odd prime power")
            tors[int(q)] = int(mult)
        if odd and not m.group(3):
            raise ValueError(f"odd torsion without the '!' flag in {text!r}")
    elif rank == 0:
        raise ValueError(f"bad table cell {text!r}")
    return AbelianGroup.make(rank, tors)


def render_table(groups: dict, reduced: dict = None) -> str:
    """Columns are i, rows are j from top (largest) to bottom.

    Reduced rows carry the label ``~j`` and sit between the main rows.
    """
    keys = set(groups) | set(reduced or {})
    if not keys:
        return "(zero homology)\n"
    cols = list(range(min(i for i, _ in keys), max(i for i, _ in keys) + 1))
    rows = [(j, False) for j in {j for _, j in groups}]
    rows += [(j, True) for j in {j for _, j in (reduced or {})}]
    rows.sort(key=lambda r: (-r[0], r[1]))
    cells = {}
    for (i, j), g in groups.items():
        cells[(j, False, i)] = render_group(g)
    for (i, j), g in (reduced or {}).items():
        cells[(j, True, i)] = render_group(g)
    labels = [f"~{j}" if red else str(j) for j, red in rows]
    width = max([len(c) for c in cells.values()] + [len(str(i)) for i in cols] + [1])
    lw = max(len(x) for x in labels + ["j\\i"])
    out = ["j\\i".rjust(lw) + " |" + "".join(f" {str(i).rjust(width)}" for i in cols)]
    out.append("-" * len(out[0]))
    for (j, red), label in zip(rows, labels):
        line = label.rjust(lw) + " |"
        for i in cols:
            line += " " + (cells.get((j, red, i)) or ".").rjust(width)
        out.append(line.rstrip())
    return "\n".join(out) + "\n"


def parse_table(text: str):
    """Read a table printed by :func:`render_table` back into
    (groups, reduced) dictionaries."""
    lines = [l for l in text.splitlines() if l.strip() and not set(l.strip()) <= {"-"}]
    if not lines or lines[0].strip() == "(zero homology)":
        return {}, {}
    cols = [int(x) for x in lines[0].split("|", 1)[1].split()]
    groups, reduced = {}, {}
    for line in lines[1:]:
        label, _, rest = line.partition("|")
        label = label.strip()
        red = label.startswith("~")
        j = int(label.lstrip("~"))
        for i, cell in zip(cols, rest.split()):
            g = parse_group(cell)
            if not g.is_zero:
                (reduced if red else groups)[(i, j)] = g
    return groups, reduced
