"""Reading and writing module description files (JSON)."""

from __future__ import annotations

import json
from pathlib import Path

from sympy import isprime

from .modules import ModulePresentation
from .poly import LambdaPolynomial

SAFE_INT = 2**53 - 1


class InputError(ValueError):
    """A module description that cannot be used; carries a location path."""


def _int(value, where: str) -> int:
    if isinstance(value, bool):
        raise InputError(f"{where}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise InputError(f"{where}: string {value!r} is not a decimal integer") from None
    raise InputError(f"{where}: expected an integer, got {type(value).__name__}")


def _encode_int(x: int):
    return x if abs(x) <= SAFE_INT else str(x)


def parse_polynomial(p: int, d: int, data, where: str) -> LambdaPolynomial:
    if not isinstance(data, list):
        raise InputError(f"{where}: a polynomial must be an array of [coefficient, exponents...] terms")
    terms: dict[tuple[int, ...], int] = {}
    for k, term in enumerate(data):
        loc = f"{where}[{k}]"
        if not isinstance(term, list):
            raise InputError(f"{loc}: a term must be an array [coefficient, e_1, ..., e_d]")
        if len(term) != d + 1:
            raise InputError(f"{loc}: term has {len(term) - 1} exponents, expected d = {d}")
        c = _int(term[0], f"{loc}[0]")
        exps = []
        for i, e in enumerate(term[1:], start=1):
            e = _int(e, f"{loc}[{i}]")
            if e < 0:
                raise InputError(f"{loc}[{i}]: exponents must be nonnegative")
            exps.append(e)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return LambdaPolynomial(p, d, terms)


def parse_module(data, source: str = "<input>") -> ModulePresentation:
    if not isinstance(data, dict):
        raise InputError(f"{source}: top level must be a JSON object")
    for key in ("p", "d", "presentation"):
        if key not in data:
            raise InputError(f"{source}: missing required field {key!r}")
    p = _int(data["p"], "p")
    d = _int(data["d"], "d")
    if p < 2 or not isprime(p):
        raise InputError(f"p: {p} is not prime")
    if d < 1:
        raise InputError(f"d: must be at least 1, got {d}")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError("name: must be a string")
    pres = data["presentation"]
    if not isinstance(pres, list):
        raise InputError("presentation: must be an array of rows")
    rows = []
    width = None
    for r, row in enumerate(pres):
        if not isinstance(row, list):
            raise InputError(f"presentation[{r}]: a row must be an array of polynomials")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputError(f"presentation[{r}]: row has {len(row)} entries, expected {width}")
        rows.append([parse_polynomial(p, d, f, f"presentation[{r}][{c}]") for c, f in enumerate(row)])
    relations = data.get("relationCount")
    if relations is not None:
        relations = _int(relations, "relationCount")
        if width is not None and relations != width:
            raise InputError(f"relationCount: {relations} does not match row length {width}")
    if relations is None:
        relations = width or 0
    return ModulePresentation.build(p, d, rows, relations=relations, name=name)


def load_module(path: str | Path) -> ModulePresentation:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    return parse_module(data, str(path))


def module_to_dict(M: ModulePresentation) -> dict:
    out = {
        "p": M.p,
        "d": M.d,
        "presentation": [
            [[[_encode_int(t[0]), *t[1:]] for t in f.to_tuples()] for f in row]
            for row in M.matrix
        ],
        "relationCount": M.relations,
    }
    if M.name is not None:
        out["name"] = M.name
    return out
