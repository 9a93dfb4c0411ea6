"""Text formats for fans and piecewise linear functions.

Fan files::

    # comment
    dim 2
    ray 0 1 0
    ray 1 0 1
    ray 2 -1 -1
    cone 0 0 1
    cone 1 1 2

``ray i a1 .. an`` declares ray i; ``cone j i1 .. ik`` declares a generating
cone with label j.  PLF files start with a ``plf`` line followed by
``value <ray index> <integer>`` lines.
"""

from __future__ import annotations

from .fan import Fan, FanError


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FanError(f"line {lineno}: expected an integer, got {tok!r}") from None


def parse_fan(text: str) -> Fan:
    dim = None
    rays: dict[int, tuple[int, ...]] = {}
    cones: dict[int, list[int]] = {}
    for lineno, tok in _lines(text):
        key = tok[0]
        if key == "dim":
            if dim is not None or len(tok) != 2:
                raise FanError(f"line {lineno}: malformed or repeated dim line")
            dim = _int(tok[1], lineno)
        elif key == "ray":
            if dim is None:
                raise FanError(f"line {lineno}: ray before dim")
            if len(tok) != dim + 2:
                raise FanError(f"line {lineno}: ray needs an index and {dim} coordinates")
            i = _int(tok[1], lineno)
            if i in rays:
                raise FanError(f"line {lineno}: ray {i} declared twice")
            rays[i] = tuple(_int(t, lineno) for t in tok[2:])
        elif key == "cone":
            if len(tok) < 2:
                raise FanError(f"line {lineno}: cone needs a label")
            j = _int(tok[1], lineno)
            if j in cones:
                raise FanError(f"line {lineno}: cone {j} declared twice")
            cones[j] = [_int(t, lineno) for t in tok[2:]]
        else:
            raise FanError(f"line {lineno}: unknown keyword {key!r}")
    if dim is None:
        raise FanError("missing dim line")
    if sorted(rays) != list(range(len(rays))):
        raise FanError("rays must be numbered 0..k-1")
    for j, ids in cones.items():
        for i in ids:
            if i not in rays:
                raise FanError(f"cone {j} refers to undeclared ray {i}")
    labels = sorted(cones)
    return Fan(dim, [rays[i] for i in range(len(rays))], [cones[j] for j in labels], labels=labels)


def serialize_fan(f: Fan) -> str:
    """Canonical text: rays sorted lexicographically, maximal cones by ray lists."""
    order = sorted(range(len(f.rays)), key=lambda i: f.rays[i])
    new = {old: k for k, old in enumerate(order)}
    lines = [f"dim {f.ambient_dim}"]
    for k, old in enumerate(order):
        lines.append(f"ray {k} " + " ".join(str(x) for x in f.rays[old]))
    cones = sorted(sorted(new[r] for r in f.cones[c].ray_ids) for c in f.maximal if c != 0)
    for j, ids in enumerate(cones):
        lines.append(f"cone {j} " + " ".join(str(i) for i in ids))
    return "\n".join(lines) + "\n"


def parse_plf(text: str) -> dict[int, int]:
    """Ray values of a piecewise linear function, keyed by ray index."""
    values: dict[int, int] = {}
    seen_header = False
    for lineno, tok in _lines(text):
        if not seen_header:
            if tok != ["plf"]:
                raise FanError(f"line {lineno}: PLF file must start with 'plf'")
            seen_header = True
            continue
        if tok[0] != "value" or len(tok) != 3:
            raise FanError(f"line {lineno}: expected 'value <ray> <integer>'")
        i = _int(tok[1], lineno)
        if i in values:
            raise FanError(f"line {lineno}: value for ray {i} given twice")
        values[i] = _int(tok[2], lineno)
    if not seen_header:
        raise FanError("empty PLF file")
    return values


def serialize_plf(values: dict[int, int]) -> str:
    return "plf\n" + "".join(f"value {i} {v}\n" for i, v in sorted(values.items()))
