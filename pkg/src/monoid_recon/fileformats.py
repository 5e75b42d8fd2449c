"""Definition file parsers: monoids, M-sets and schemes.

Monoid file: a header line `monoid <name> <n> <identity-index>` followed by
n rows of n whitespace-separated decimal indices (row x lists x*y for each
y).  Lines starting with `#` are comments; a comment `# names a b c ...`
with exactly n tokens assigns element names.  LF and CRLF both accepted.

M-set file: `mset <name> over <monoid-name> <k>` followed by k rows of n
indices (row a lists a*m for each m).

Scheme file: `scheme <name>`, then `chart <i> <monoid-name>` lines, then
`glue <i> <j> <f_ij> <f_ji>` lines each followed by one row mapping the
fraction monoid of chart i at f_ij onto that of chart j at f_ji.

Monoid names are resolved against the built-in corpus plus any monoids
defined earlier on the same command line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .monoids import FiniteCommMonoid, validate_monoid
from .msets import MSet
from .schemes import Glue, GluingData, MonoidScheme, build_scheme


class ParseError(ValueError):
    def __init__(self, line: int, col: int, expected: str):
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(f"line {line}, column {col}: expected {expected}")


@dataclass
class _Tokens:
    rows: list[tuple[int, list[tuple[int, str]]]]  # (line no, [(col, token)])
    pos: int = 0

    def peek_line(self):
        return self.rows[self.pos] if self.pos < len(self.rows) else None

    def take_line(self, expected: str):
        row = self.peek_line()
        if row is None:
            last = self.rows[-1][0] if self.rows else 1
            raise ParseError(last + 1, 1, expected)
        self.pos += 1
        return row


def _tokenize(text: str):
    rows = []
    names_comment: list[str] | None = None
    for ln, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            parts = stripped[1:].split()
            if parts and parts[0] == "names":
                names_comment = parts[1:]
            continue
        toks = []
        col = 0
        for tok in raw.split():
            col = raw.index(tok, col)
            toks.append((col + 1, tok))
            col += len(tok)
        rows.append((ln, toks))
    return _Tokens(rows), names_comment


def _int_token(line: int, col: int, tok: str, what: str) -> int:
    if not tok.isdigit():
        raise ParseError(line, col, f"{what} (decimal integer), got {tok!r}")
    return int(tok)


def parse_monoid_text(text: str) -> FiniteCommMonoid:
    toks, names = _tokenize(text)
    ln, row = toks.take_line("header `monoid <name> <n> <identity>`")
    if len(row) != 4 or row[0][1] != "monoid":
        raise ParseError(ln, row[0][0] if row else 1, "`monoid <name> <n> <identity>`")
    name = row[1][1]
    n = _int_token(ln, row[2][0], row[2][1], "element count")
    ident = _int_token(ln, row[3][0], row[3][1], "identity index")
    table = []
    for x in range(n):
        ln, row = toks.take_line(f"multiplication row {x} with {n} entries")
        if len(row) != n:
            raise ParseError(ln, row[0][0] if row else 1, f"{n} entries in row {x}")
        table.append(
            [_int_token(ln, c, t, f"index in row {x}") for c, t in row]
        )
    extra = toks.peek_line()
    if extra is not None:
        raise ParseError(extra[0], extra[1][0][0], "end of file")
    if names is not None and len(names) != n:
        raise ParseError(1, 1, f"{n} element names in the names comment")
    return validate_monoid(table, ident, name=name, elem_names=tuple(names) if names else None)


def parse_mset_text(text: str, registry: dict[str, FiniteCommMonoid]) -> MSet:
    toks, _ = _tokenize(text)
    ln, row = toks.take_line("header `mset <name> over <monoid> <k>`")
    if len(row) != 5 or row[0][1] != "mset" or row[2][1] != "over":
        raise ParseError(ln, row[0][0] if row else 1, "`mset <name> over <monoid> <k>`")
    name = row[1][1]
    mname = row[3][1]
    if mname not in registry:
        raise ParseError(ln, row[3][0], f"known monoid name, got {mname!r}")
    M = registry[mname]
    k = _int_token(ln, row[4][0], row[4][1], "carrier size")
    act = []
    for a in range(k):
        ln, row = toks.take_line(f"action row {a} with {M.n} entries")
        if len(row) != M.n:
            raise ParseError(ln, row[0][0] if row else 1, f"{M.n} entries in row {a}")
        act.append(tuple(_int_token(ln, c, t, "carrier index") for c, t in row))
    extra = toks.peek_line()
    if extra is not None:
        raise ParseError(extra[0], extra[1][0][0], "end of file")
    return MSet(M, k, tuple(act), name=name)


def parse_scheme_text(
    text: str, registry: dict[str, FiniteCommMonoid]
) -> MonoidScheme:
    from .localization import localize_monoid
    from .monoids import submonoid_generated

    toks, _ = _tokenize(text)
    ln, row = toks.take_line("header `scheme <name>`")
    if len(row) != 2 or row[0][1] != "scheme":
        raise ParseError(ln, row[0][0] if row else 1, "`scheme <name>`")
    name = row[1][1]
    charts: list[FiniteCommMonoid] = []
    glues: list[Glue] = []
    while True:
        nxt = toks.peek_line()
        if nxt is None:
            break
        ln, row = toks.take_line("chart or glue line")
        kind = row[0][1]
        if kind == "chart":
            if len(row) != 3:
                raise ParseError(ln, row[0][0], "`chart <i> <monoid-name>`")
            i = _int_token(ln, row[1][0], row[1][1], "chart index")
            if i != len(charts):
                raise ParseError(ln, row[1][0], f"chart index {len(charts)} (in order)")
            mname = row[2][1]
            if mname not in registry:
                raise ParseError(ln, row[2][0], f"known monoid name, got {mname!r}")
            charts.append(registry[mname])
        elif kind == "glue":
            if len(row) != 5:
                raise ParseError(ln, row[0][0], "`glue <i> <j> <f_ij> <f_ji>`")
            i = _int_token(ln, row[1][0], row[1][1], "chart index")
            j = _int_token(ln, row[2][0], row[2][1], "chart index")
            if not (0 <= i < len(charts) and 0 <= j < len(charts)):
                raise ParseError(ln, row[1][0], "glue between declared charts")
            f_src = _int_token(ln, row[3][0], row[3][1], "overlap element index")
            f_dst = _int_token(ln, row[4][0], row[4][1], "overlap element index")
            L = localize_monoid(charts[i], submonoid_generated(charts[i], (f_src,)))
            ln2, row2 = toks.take_line(f"isomorphism row with {L.result.n} entries")
            if len(row2) != L.result.n:
                raise ParseError(
                    ln2, row2[0][0] if row2 else 1, f"{L.result.n} map entries"
                )
            iso = tuple(_int_token(ln2, c, t, "fraction index") for c, t in row2)
            glues.append(Glue(i, j, f_src, f_dst, iso))
        else:
            raise ParseError(ln, row[0][0], "`chart` or `glue`")
    return build_scheme(GluingData(tuple(charts), tuple(glues)), name=name)


def detect_kind(text: str) -> str:
    toks, _ = _tokenize(text)
    row = toks.peek_line()
    if row is None:
        raise ParseError(1, 1, "a `monoid`, `mset` or `scheme` header")
    kind = row[1][0][1]
    if kind not in ("monoid", "mset", "scheme"):
        raise ParseError(row[0], row[1][0][0], "`monoid`, `mset` or `scheme`")
    return kind


def format_monoid(M: FiniteCommMonoid) -> str:
    lines = [f"monoid {M.name} {M.n} {M.identity}"]
    if M.elem_names:
        lines.append("# names " + " ".join(M.elem_names))
    for x in range(M.n):
        lines.append(" ".join(str(v) for v in M.mul[x]))
    return "\n".join(lines) + "\n"
