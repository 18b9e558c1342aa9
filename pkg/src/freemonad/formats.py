"""The ``monad/1`` file format, table rendering and certificate JSON.

A monad file is JSON::

    {"format_version": "monad/1",
     "field": {"kind": "prime", "p": 32003},
     "n": 3,
     "kminus": [-1], "kzero": [0, 0, 0, 0], "kplus": [1],
     "dminus": [[[[[1,0,0,0], "1"]]], ...],
     "dzero": [[[[[0,1,0,0], "32002"]], ...]]}

Each entry is a list of ``[exponents, coefficient]`` pairs; an empty list is
the zero form. Twist arrays are non-increasing. :func:`serialize` writes the
unique canonical text for a monad, so its SHA-256 identifies the input.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .cohomology import CohomologyTable, EulerPolynomial
from .errors import FormatError, MonadError
from .field import FieldSpec, is_prime
from .monad import Monad
from .poly import HomogeneousForm

FORMAT_VERSION = "monad/1"


def _field_to_json(f: FieldSpec) -> dict:
    return {"kind": "prime", "p": f.p} if f.is_prime else {"kind": "rational"}


def _form_to_json(f: HomogeneousForm) -> list:
    return [[list(m), f.field.format(c)] for m, c in f.terms]


def to_json(m: Monad) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "field": _field_to_json(m.field),
        "n": m.n,
        "kminus": list(m.kminus.twists),
        "kzero": list(m.kzero.twists),
        "kplus": list(m.kplus.twists),
        "dminus": [[_form_to_json(e) for e in row] for row in m.dminus.entries],
        "dzero": [[_form_to_json(e) for e in row] for row in m.dzero.entries],
    }


def _compact(x) -> str:
    return json.dumps(x, separators=(",", ":"))


def serialize(m: Monad) -> bytes:
    """Canonical text: one key per line, one matrix row per line."""
    doc = to_json(m)
    lines = ["{"]
    keys = ["format_version", "field", "n", "kminus", "kzero", "kplus", "dminus", "dzero"]
    for k in keys:
        comma = "," if k != keys[-1] else ""
        if k in ("dminus", "dzero"):
            rows = doc[k]
            if not rows:
                lines.append(f' "{k}": []{comma}')
                continue
            lines.append(f' "{k}": [')
            for r, row in enumerate(rows):
                lines.append("  " + _compact(row) + ("," if r < len(rows) - 1 else ""))
            lines.append(f" ]{comma}")
        else:
            lines.append(f' "{k}": {_compact(doc[k])}{comma}')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def monad_hash(m: Monad) -> str:
    return hashlib.sha256(serialize(m)).hexdigest()


def _parse_field(obj) -> FieldSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise FormatError("malformed", "field must be an object with a 'kind'")
    if obj["kind"] == "prime":
        p = obj.get("p")
        if not isinstance(p, int) or not is_prime(p) or p >= 2**31:
            raise FormatError("non_prime", f"field modulus {p!r} is not a prime below 2^31")
        return FieldSpec.prime(p)
    if obj["kind"] == "rational":
        return FieldSpec.rational()
    raise FormatError("malformed", f"unknown field kind {obj['kind']!r}")


def _twists(doc, key) -> list[int]:
    tw = doc.get(key)
    if not isinstance(tw, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in tw):
        raise FormatError("malformed", f"{key} must be an array of integers")
    if any(x < y for x, y in zip(tw, tw[1:])):
        raise FormatError("malformed", f"{key} must be non-increasing")
    return tw


def _parse_map(doc, key, field, n, src, tgt, name) -> list[list[HomogeneousForm]]:
    rows = doc.get(key)
    if not isinstance(rows, list) or len(rows) != len(tgt):
        raise FormatError("malformed", f"{key} must have {len(tgt)} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(src):
            raise FormatError("malformed", f"{key} row {i} must have {len(src)} entries")
        out_row = []
        for j, entry in enumerate(row):
            deg = tgt[i] - src[j]
            coeffs: dict = {}
            if not isinstance(entry, list):
                raise FormatError("malformed", f"{key} entry ({i},{j}) must be a list of terms")
            for term in entry:
                try:
                    exps, cs = term
                    exps = tuple(int(e) for e in exps)
                    c = field.parse(str(cs))
                except (TypeError, ValueError, ZeroDivisionError) as exc:
                    raise FormatError("malformed", f"bad term in {key} ({i},{j}): {exc}") from None
                if len(exps) != n + 1 or min(exps) < 0:
                    raise FormatError("malformed", f"bad exponent vector in {key} ({i},{j})")
                if sum(exps) != deg:
                    raise FormatError(
                        "degree_mismatch", f"entry degree mismatch at ({i},{j}) of {name}"
                    )
                coeffs[exps] = coeffs.get(exps, 0) + c
            out_row.append(HomogeneousForm.from_dict(field, n + 1, deg, coeffs))
        out.append(out_row)
    return out


def loads(data: bytes | str) -> Monad:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError("malformed", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("malformed", "top level must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError("version", f"unsupported format_version {doc.get('format_version')!r}")
    field = _parse_field(doc.get("field"))
    n = doc.get("n")
    if not isinstance(n, int):
        raise FormatError("malformed", "n must be an integer")
    if n < 3:
        raise FormatError("dimension", f"n={n} < 3 is not supported")
    km, kz, kp = _twists(doc, "kminus"), _twists(doc, "kzero"), _twists(doc, "kplus")
    dm = _parse_map(doc, "dminus", field, n, km, kz, "d^-1")
    dz = _parse_map(doc, "dzero", field, n, kz, kp, "d^0")
    try:
        return Monad.assemble(field, n, km, kz, kp, dm, dz)
    except MonadError as exc:
        raise FormatError("malformed", str(exc)) from None


def parse(path) -> Monad:
    with open(path, "rb") as fh:
        return loads(fh.read())


def write(m: Monad, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(m))


# ---------------------------------------------------------------------------
# tables


def render_table(t: CohomologyTable) -> str:
    """Rows h^0 .. h^n top to bottom, degrees ascending; zero shows as '.'."""
    cells = [[str(v) if v else "." for v in t.rows[i]] for i in range(t.n + 1)]
    header = [str(d) for d in t.degrees]
    width = max([len(x) for x in header] + [len(x) for row in cells for x in row])
    label = max(len(f"h^{t.n}"), 3)
    lines = ["d".rjust(label) + " " + " ".join(h.rjust(width) for h in header)]
    for i, row in enumerate(cells):
        lines.append(f"h^{i}".rjust(label) + " " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines) + "\n"


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def table_to_tsv(t: CohomologyTable) -> str:
    meta = (
        f"# cohomology-table/1\tn={t.n}\tlo={t.lo}\thi={t.hi}"
        f"\tchi={','.join(_fmt_frac(c) for c in t.chi.coeffs)}"
        f"\tprovenance={','.join(t.provenance)}"
    )
    lines = [meta, "i\\d\t" + "\t".join(str(d) for d in t.degrees)]
    for i in range(t.n + 1):
        lines.append(f"{i}\t" + "\t".join(str(v) for v in t.rows[i]))
    return "\n".join(lines) + "\n"


def table_from_tsv(text: str) -> CohomologyTable:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# cohomology-table/1"):
        raise FormatError("malformed", "missing cohomology-table header")
    meta = dict(kv.split("=", 1) for kv in lines[0].split("\t")[1:])
    n, lo, hi = int(meta["n"]), int(meta["lo"]), int(meta["hi"])
    chi = EulerPolynomial(tuple(Fraction(c) for c in meta["chi"].split(",")))
    prov = tuple(meta["provenance"].split(",")) if meta.get("provenance") else ()
    header = lines[1].split("\t")[1:]
    if [int(d) for d in header] != list(range(lo, hi + 1)):
        raise FormatError("malformed", "degree header does not match the window")
    rows = []
    for i, ln in enumerate(lines[2:]):
        parts = ln.split("\t")
        if int(parts[0]) != i:
            raise FormatError("malformed", f"row {i} out of order")
        rows.append(tuple(int(x) for x in parts[1:]))
    if len(rows) != n + 1:
        raise FormatError("malformed", "wrong number of rows")
    return CohomologyTable(n, lo, hi, tuple(rows), chi, prov)


def table_to_json(t: CohomologyTable) -> dict:
    return {
        "n": t.n,
        "lo": t.lo,
        "hi": t.hi,
        "rows": [list(r) for r in t.rows],
        "chi": [_fmt_frac(c) for c in t.chi.coeffs],
    }


def certificate_to_json(cert) -> dict:
    return {
        "format_version": "certificate/1",
        "input_sha256": cert.base_hash,
        "n": cert.n,
        "steps": cert.steps,
        "levels": cert.levels,
        "added_summand": list(cert.summand.twists),
        "tables": {k: table_to_json(v) for k, v in sorted(cert.tables.items())},
        "chi_checks": cert.chi_checks,
        "rank_check": cert.rank_check,
        "verdict": cert.verdict,
        "mismatch": list(cert.mismatch) if cert.mismatch else None,
        "notes": cert.notes,
    }


def dumps_json(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=1) + "\n").encode()
