"""JSON documents for fans and pairs (V, X), plus computation reports.

Rationals are always strings "p/q" (or "p"); decimal notation is refused so a
round trip is exact.  Fans are canonicalised on load: rays primitive, each cone
sorted, cone list sorted.  Ray order is kept because pair coefficients refer
to ray indices.
"""
import json
import re
from fractions import Fraction

from .corpus import EXAMPLE_CLASSES, example_fan
from .divisors import DivisorClassOfX, ToricDivisor
from .errors import DocumentError, ToricError
from .fan import Fan
from .lattice import primitivize

RATIONAL = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(x, where="value"):
    if isinstance(x, bool) or isinstance(x, float):
        raise DocumentError(f"{where}: expected a rational string like \"3/2\", got {x!r}", where)
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise DocumentError(f"{where}: expected a rational string, got {type(x).__name__}", where)
    m = RATIONAL.match(x)
    if not m:
        raise DocumentError(f"{where}: {x!r} is not of the form p/q (decimals are not accepted)", where)
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise DocumentError(f"{where}: zero denominator", where)
    return Fraction(num, den)


def format_rational(q):
    return str(Fraction(q))


def _point(p):
    return [format_rational(x) for x in p]


def _expect(doc, key, kind, where):
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object", where)
    if key not in doc:
        raise DocumentError(f"{where}.{key}: missing field", f"{where}.{key}")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise DocumentError(f"{where}.{key}: expected {kind.__name__}", f"{where}.{key}")
    return val


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"{where}: expected an integer, got {x!r}", where)
    return x


# ---------------------------------------------------------------- fans

def fan_to_dict(fan):
    out = {
        "dimension": fan.dim,
        "rays": [list(r) for r in fan.rays],
        "maximal_cones": sorted(list(c) for c in fan.cones),
    }
    if fan.name:
        out["name"] = fan.name
    return out


def fan_from_dict(doc, where="fan"):
    n = _int(_expect(doc, "dimension", int, where), f"{where}.dimension")
    if n < 1:
        raise DocumentError(f"{where}.dimension: must be positive", f"{where}.dimension")
    rays = []
    for i, r in enumerate(_expect(doc, "rays", list, where)):
        w = f"{where}.rays[{i}]"
        if not isinstance(r, list) or len(r) != n:
            raise DocumentError(f"{w}: expected {n} integer coordinates", w)
        coords = [_int(x, f"{w}[{j}]") for j, x in enumerate(r)]
        if not any(coords):
            raise DocumentError(f"{w}: zero ray", w)
        rays.append(primitivize(coords))
    if len(set(rays)) != len(rays):
        raise DocumentError(f"{where}.rays: duplicate rays after normalisation", f"{where}.rays")
    cones = []
    for k, c in enumerate(_expect(doc, "maximal_cones", list, where)):
        w = f"{where}.maximal_cones[{k}]"
        if not isinstance(c, list) or not c:
            raise DocumentError(f"{w}: expected a non-empty list of ray indices", w)
        idx = [_int(x, f"{w}[{j}]") for j, x in enumerate(c)]
        for j, i in enumerate(idx):
            if not 0 <= i < len(rays):
                raise DocumentError(f"{w}[{j}]: ray index {i} out of range", f"{w}[{j}]")
        cones.append(idx)
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise DocumentError(f"{where}.name: expected a string", f"{where}.name")
    return Fan(rays, cones, name=name)


# ---------------------------------------------------------------- pairs

def pair_to_dict(fan, coefficients):
    """coefficients: X = sum c_i D_i, one per ray; zeros are omitted."""
    return {
        "fan": fan_to_dict(fan),
        "class_coefficients": {str(i): format_rational(c)
                               for i, c in enumerate(coefficients) if c != 0},
    }


def pair_from_dict(doc, where="pair"):
    """Returns (fan, coefficient tuple).  ``fan`` may be {"example": name}."""
    fdoc = _expect(doc, "fan", dict, where)
    if "example" in fdoc:
        name = fdoc["example"]
        if name not in EXAMPLE_CLASSES:
            raise DocumentError(f"{where}.fan.example: unknown example {name!r}", f"{where}.fan.example")
        fan = example_fan(name)
    else:
        fan = fan_from_dict(fdoc, f"{where}.fan")
    coeffs = [Fraction(0)] * len(fan.rays)
    for key, val in _expect(doc, "class_coefficients", dict, where).items():
        w = f"{where}.class_coefficients[{key!r}]"
        if not re.fullmatch(r"\d+", key) or int(key) >= len(fan.rays):
            raise DocumentError(f"{w}: not a ray index of the fan", w)
        coeffs[int(key)] = parse_rational(val, w)
    return fan, tuple(coeffs)


def pair_class(fan, coefficients, check=True):
    try:
        return DivisorClassOfX.from_divisor(ToricDivisor(fan, coefficients)) if check else \
            DivisorClassOfX(fan, [-c for c in coefficients], check=False)
    except ToricError as e:
        raise DocumentError(f"class_coefficients: {e}", "class_coefficients") from e


def example_document(name):
    return pair_to_dict(example_fan(name), EXAMPLE_CLASSES[name])


# ---------------------------------------------------------------- files

def dumps(doc):
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{source}: line {e.lineno} column {e.colno}: {e.msg}",
                            f"line {e.lineno}") from e


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), str(path))


def save(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def load_fan(path):
    doc = load(path)
    return fan_from_dict(doc["fan"] if isinstance(doc, dict) and "fan" in doc else doc)


def load_pair(path, check=True):
    fan, coeffs = pair_from_dict(load(path))
    return fan, pair_class(fan, coeffs, check=check)


def canonicalize(doc):
    """Reparse and reserialise a fan or pair document."""
    if "class_coefficients" in doc:
        fan, coeffs = pair_from_dict(doc)
        out = pair_to_dict(fan, coeffs)
        if "example" in doc["fan"]:
            out["fan"] = {"example": doc["fan"]["example"]}
        return out
    return fan_to_dict(fan_from_dict(doc))


# ---------------------------------------------------------------- reports

def support_to_dict(h):
    return {str(i): format_rational(h.values[i]) for i in h.fan.used_rays}


def polytope_to_dict(P):
    return {"dimension": P.dim, "vertices": [_point(v) for v in P.vertices]}


def kappa_to_json(k):
    return "-inf" if k == float("-inf") else k
