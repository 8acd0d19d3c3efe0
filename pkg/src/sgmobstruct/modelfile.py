"""Line-oriented model files: parse, build, and validate a ManifoldModel.

A file carries three header lines (dimension, orientable, simply_connected),
then one block per coefficient ring, integral first:

    [coefficients 0]
    H 2 = 0,0         # invariant factors, 0 meaning infinite cyclic
    gen 2 a,b
    cup a b = 2*a-b   # or "= 0", or "= ?" for unknown
    [coefficients 2]
    ...
    reduction 2: 1,0, 0,1   # row-major, one row per modular generator

'#' starts a comment.  Degree 0 is implicit in every block.  Generator
names are unique within a block; products not declared are unknown.  A
modular block must give a reduction matrix wherever both sides of the
degree are nontrivial.  Unrecognized directives are errors in strict mode
and recorded notices otherwise.
"""

from __future__ import annotations

import re

from .abelian import FgAbGroup
from .cohomology import (
    UNKNOWN,
    CohomologyModel,
    ManifoldModel,
    homs_from_matrices,
)
from .errors import ModelFileError, SgmError

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.^]*")
_BLOCK_RE = re.compile(r"\[\s*coefficients\s+([+-]?\d+)\s*\]")
_H_RE = re.compile(r"H\s+(\d+)\s*=\s*(.*)")
_GEN_RE = re.compile(r"gen\s+(\d+)\s+(.*)")
_CUP_RE = re.compile(r"cup\s+(\S+)\s+(\S+)\s*=\s*(.*)")
_RED_RE = re.compile(r"reduction\s+(\d+)\s*:\s*(.*)")

_HEADERS = ("dimension", "orientable", "simply_connected")


class _Block:
    def __init__(self, k: int, line: int):
        self.k = k
        self.line = line
        self.groups = {}
        self.group_lines = {}
        self.names = {}
        self.where = {}
        self.products = {}
        self.declared = set()
        self.reductions = {}
        self.reduction_lines = {}


def _fail(line: int, message: str):
    raise ModelFileError(f"line {line}: {message}")


def _parse_ints(rhs: str, line: int):
    out = []
    for part in rhs.split(","):
        part = part.strip()
        if not re.fullmatch(r"[+-]?\d+", part or ""):
            _fail(line, f"expected a comma-separated integer list, got {rhs.strip()!r}")
        out.append(int(part))
    return out

def _parse_combo(rhs: str, line: int):
    """A signed sum of optionally scaled generator names, as (coeff, name)
    pairs; the '*' between a coefficient and its name is mandatory."""
    s = rhs.replace(" ", "")
    terms = []
    pos = 0
    first = True
    while pos < len(s):
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        elif not first:
            _fail(line, "expected + or - between terms")
        first = False
        coeff = 1
        mc = re.match(r"(\d+)\*", s[pos:])
        if mc:
            coeff = int(mc.group(1))
            pos += mc.end()
        mn = _NAME_RE.match(s, pos)
        if not mn:
            _fail(line, f"expected a generator name at {s[pos:]!r}")
        terms.append((sign * coeff, mn.group(0)))
        pos = mn.end()
    if not terms:
        _fail(line, "empty product value")
    return terms


def parse_model_text(text: str, description="explicit model", strict=False) -> ManifoldModel:
    headers = {}
    header_lines = {}
    blocks = []
    current = None
    notices = []

    def note(line: int, message: str):
        if strict:
            _fail(line, message)
        notices.append(f"line {line}: {message}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            mb = _BLOCK_RE.fullmatch(line)
            if not mb:
                _fail(lineno, f"unrecognized block header {line!r}")
            k = int(mb.group(1))
            if k == 1 or k < 0:
                _fail(lineno, "coefficients must be 0 (integral) or a modulus >= 2")
            if not blocks:
                if k != 0:
                    _fail(lineno, "the [coefficients 0] block must come first")
                for h in _HEADERS:
                    if h not in headers:
                        _fail(lineno, f"missing header {h!r} before the first block")
            if any(b.k == k for b in blocks):
                _fail(lineno, f"duplicate block for coefficients {k}")
            current = _Block(k, lineno)
            blocks.append(current)
            continue

        key = line.split(None, 1)[0]
        if current is None:
            if key in _HEADERS:
                if key in headers:
                    _fail(lineno, f"duplicate header {key!r}")
                rest = line[len(key):].strip()
                if key == "dimension":
                    if not re.fullmatch(r"\d+", rest) or int(rest) < 1:
                        _fail(lineno, f"dimension wants a positive integer, got {rest!r}")
                    headers[key] = int(rest)
                else:
                    if rest.lower() not in ("true", "false"):
                        _fail(lineno, f"{key} wants true or false, got {rest!r}")
                    headers[key] = rest.lower() == "true"
                header_lines[key] = lineno
            elif key in ("H", "gen", "cup", "reduction"):
                _fail(lineno, f"{key!r} line before any [coefficients k] block")
            else:
                note(lineno, f"unrecognized directive {key!r}")
            continue

        if key in _HEADERS:
            _fail(lineno, f"header {key!r} inside a coefficients block")
        m = headers["dimension"]

        if key == "H":
            mh = _H_RE.fullmatch(line)
            if not mh:
                _fail(lineno, "malformed group line, expected 'H <j> = d1,d2,...'")
            j = int(mh.group(1))
            if j == 0:
                _fail(lineno, "degree 0 is implicit and cannot be declared")
            if j > m:
                _fail(lineno, f"degree {j} exceeds the dimension {m}")
            if j in current.groups:
                _fail(lineno, f"degree {j} declared twice")
            factors = _parse_ints(mh.group(2), lineno)
            try:
                current.groups[j] = FgAbGroup(tuple(factors))
            except SgmError as e:
                _fail(lineno, str(e))
            current.group_lines[j] = lineno
        elif key == "gen":
            mg = _GEN_RE.fullmatch(line)
            if not mg:
                _fail(lineno, "malformed generator line, expected 'gen <j> a,b,...'")
            j = int(mg.group(1))
            if j not in current.groups:
                _fail(lineno, f"generator names for degree {j} before its H line")
            if j in current.names:
                _fail(lineno, f"generator names for degree {j} declared twice")
            names = [s.strip() for s in mg.group(2).split(",")]
            if len(names) != len(current.groups[j].factors):
                _fail(
                    lineno,
                    f"degree {j} has {len(current.groups[j].factors)} factors "
                    f"but {len(names)} names",
                )
            for idx, n in enumerate(names):
                if not _NAME_RE.fullmatch(n):
                    _fail(lineno, f"invalid generator name {n!r}")
                if n in current.where:
                    _fail(lineno, f"generator name {n!r} reused within the block")
                current.where[n] = (j, idx)
            current.names[j] = tuple(names)
        elif key == "cup":
            mc = _CUP_RE.fullmatch(line)
            if not mc:
                _fail(lineno, "malformed product line, expected 'cup <x> <y> = ...'")
            xn, yn, rhs = mc.group(1), mc.group(2), mc.group(3).strip()
            for n in (xn, yn):
                if n not in current.where:
                    _fail(lineno, f"unknown generator {n!r}")
            (i, a), (j, b) = current.where[xn], current.where[yn]
            if (xn, yn) in current.declared:
                _fail(lineno, f"product of {xn!r} and {yn!r} declared twice")
            current.declared.add((xn, yn))
            td = i + j
            target = current.groups.get(td) if td <= m else None
            if target is None:
                if rhs == "?":
                    note(lineno, f"unknown product {xn}*{yn} in a trivial degree dropped")
                    continue
                elif rhs != "0" and any(c for c, _ in _parse_combo(rhs, lineno)):
                    _fail(lineno, f"product {xn}*{yn} declared in a trivial degree")
                continue
            if rhs == "?":
                current.products[(i, a, j, b)] = UNKNOWN
                continue
            coords = [0] * len(target.factors)
            if rhs != "0":
                if td not in current.names:
                    _fail(lineno, f"degree {td} has no generator names yet")
                for coeff, n in _parse_combo(rhs, lineno):
                    owner = current.where.get(n)
                    if owner is None or owner[0] != td:
                        _fail(lineno, f"{n!r} is not a degree-{td} generator")
                    coords[owner[1]] += coeff
            current.products[(i, a, j, b)] = tuple(coords)
        elif key == "reduction":
            mr = _RED_RE.fullmatch(line)
            if not mr:
                _fail(lineno, "malformed reduction line, expected 'reduction <j>: ...'")
            if current.k == 0:
                _fail(lineno, "reduction lines belong in modular blocks")
            j = int(mr.group(1))
            if j > m:
                _fail(lineno, f"degree {j} exceeds the dimension {m}")
            if j in current.reductions:
                _fail(lineno, f"reduction in degree {j} declared twice")
            current.reductions[j] = _parse_ints(mr.group(2), lineno)
            current.reduction_lines[j] = lineno
        else:
            note(lineno, f"unrecognized directive {key!r}")

    for h in _HEADERS:
        if h not in headers:
            raise ModelFileError(f"missing header {h!r}")
    if not blocks:
        raise ModelFileError("no [coefficients 0] block")
    m = headers["dimension"]

    def build(block: _Block) -> CohomologyModel:
        groups = dict(block.groups)
        names = dict(block.names)
        groups[0] = FgAbGroup((block.k,) if block.k else (0,))
        names[0] = ("1",)
        for j in sorted(block.groups):
            if j not in block.names:
                _fail(block.group_lines[j], f"degree {j} has no generator names")
        return CohomologyModel(
            dimension=m,
            coefficients=block.k,
            groups=groups,
            names=names,
            products=block.products,
            orientable=headers["orientable"],
        )

    integral = build(blocks[0])
    manifold = ManifoldModel(description, m, headers["orientable"], headers["simply_connected"])
    manifold.add_ring(integral)
    for block in blocks[1:]:
        modular = build(block)
        for j in range(1, m + 1):
            if (
                j not in block.reductions
                and not integral.group(j).is_trivial()
                and not modular.group(j).is_trivial()
            ):
                _fail(block.line, f"[coefficients {block.k}] lacks a reduction in degree {j}")
        matrices = {0: [[1]]}
        for j, flat in block.reductions.items():
            rows = len(modular.group(j).factors)
            cols = len(integral.group(j).factors)
            if len(flat) != rows * cols:
                _fail(
                    block.reduction_lines[j],
                    f"reduction in degree {j} needs {rows * cols} entries, got {len(flat)}",
                )
            matrices[j] = [flat[r * cols:(r + 1) * cols] for r in range(rows)]
        manifold.attach_reduction(modular, homs_from_matrices(integral, modular, matrices))
    for text_ in notices:
        manifold.add_notice(text_)
    manifold.validate()
    return manifold


def load_model(path, strict=False) -> ManifoldModel:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ModelFileError(f"cannot read model file {path}: {e.strerror or e}") from None
    return parse_model_text(text, description=f'load("{path}")', strict=strict)
