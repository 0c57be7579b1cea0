"""Case-file parsing.  Every parse error is a ``SchemaError`` carrying a
JSON-pointer-like location."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .bsd import GlobalArithmeticInput
from .characters import PsiSpec, irreducible_characters
from .cyclotomic import CycNumber
from .oracle import INF, AffineCover, GDivisor, build_cover
from .psi import LambdaSpec

VERSION = 1
COMMANDS = ("euler-char", "ra", "predict", "verify-cover", "suite", "check-assumptions")


class SchemaError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location or '/'}: {message}")
        self.location = location or "/"
        self.message = message


@dataclass(frozen=True)
class PsiDegree:
    """Stand-in for psi when only deg psi is needed."""

    degree: int


def _req(obj: dict, key: str, loc: str):
    if not isinstance(obj, dict):
        raise SchemaError(loc, "expected an object")
    if key not in obj:
        raise SchemaError(f"{loc}/{key}", "missing required field")
    return obj[key]


def _int(x, loc: str, minimum: int | None = None) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(loc, f"expected an integer, got {x!r}")
    if minimum is not None and x < minimum:
        raise SchemaError(loc, f"must be >= {minimum}")
    return x


def _list(x, loc: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(loc, "expected a list")
    return x


def load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise SchemaError("/", f"cannot read {path}: {exc.strerror}") from None
    if not isinstance(data, dict):
        raise SchemaError("/", "top level must be an object")
    return data


def shipped(name: str) -> dict:
    """A data file shipped with the package."""
    with resources.files("eqrr.data").joinpath(name).open(encoding="utf-8") as fh:
        return json.load(fh)


def shipped_path(name: str) -> str:
    return str(resources.files("eqrr.data").joinpath(name))


def check_version(data: dict) -> None:
    v = data.get("version", VERSION)
    if v != VERSION:
        raise SchemaError("/version", f"unsupported version {v!r}")


# ------------------------------------------------------------ pieces

def parse_cover(obj, loc: str = "/cover") -> AffineCover:
    q = _int(_req(obj, "q", loc), f"{loc}/q", 2)
    gens = _list(_req(obj, "generators", loc), f"{loc}/generators")
    out = []
    for i, g in enumerate(gens):
        gl = f"{loc}/generators/{i}"
        if not isinstance(g, list) or len(g) != 2:
            raise SchemaError(gl, "an affine map is a pair [a, b]")
        out.append((_int(g[0], f"{gl}/0", 1), _int(g[1], f"{gl}/1", 0)))
    try:
        return build_cover(q, out)
    except ValueError as exc:
        raise SchemaError(loc, str(exc)) from None


def parse_point(x, loc: str):
    if x == INF:
        return INF
    if isinstance(x, list) and x and all(isinstance(c, int) and not isinstance(c, bool) for c in x):
        return tuple(x)
    raise SchemaError(loc, "a point is \"inf\" or a monic polynomial [c0, ..., 1]")


def parse_divisor(cover: AffineCover, obj, loc: str) -> GDivisor:
    entries = []
    for i, ent in enumerate(_list(obj, loc)):
        el = f"{loc}/{i}"
        P = parse_point(_req(ent, "point", el), f"{el}/point")
        entries.append((P, _int(_req(ent, "n", el), f"{el}/n")))
    try:
        return GDivisor.from_orbits(cover, entries)
    except ValueError as exc:
        raise SchemaError(loc, str(exc)) from None


def parse_psi(G, obj, loc: str = "/psi") -> PsiSpec:
    if obj == "trivial":
        return PsiSpec.trivial(G)
    if obj == "regular":
        return PsiSpec.regular(G)
    if isinstance(obj, dict) and "irreducible" in obj:
        irr = irreducible_characters(G)
        i = _int(obj["irreducible"], f"{loc}/irreducible", 0)
        if i >= len(irr):
            raise SchemaError(f"{loc}/irreducible", f"index out of range (G has {len(irr)} irreducibles)")
        return irr[i]
    if isinstance(obj, dict) and "values" in obj:
        vals = _list(obj["values"], f"{loc}/values")
        try:
            return PsiSpec(G, [CycNumber.from_json(v) for v in vals], name=obj.get("name", "psi"))
        except (ValueError, KeyError, TypeError) as exc:
            raise SchemaError(f"{loc}/values", str(exc)) from None
    raise SchemaError(loc, "psi is \"trivial\", \"regular\", {\"irreducible\": i} or {\"values\": [...]}")


def parse_lambda(obj, p: int, loc: str = "/lambda") -> LambdaSpec:
    if obj is None:
        return LambdaSpec(p, 1)
    ell = _int(_req(obj, "ell", loc), f"{loc}/ell", 2)
    e = _int(obj.get("e", 1), f"{loc}/e", 1)
    return LambdaSpec(ell, e)


def _fraction_or_cyc(x, loc: str):
    if isinstance(x, dict):
        try:
            return CycNumber.from_json(x)
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(loc, str(exc)) from None
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise SchemaError(loc, f"not a rational number: {x!r}") from None


def parse_arithmetic(obj, loc: str = "/arithmetic") -> GlobalArithmeticInput:
    """The global input of the leading-term prediction."""
    p = _int(_req(obj, "p", loc), f"{loc}/p", 2)
    s = _int(obj.get("s", 1), f"{loc}/s", 1)
    cover = None
    psi = None
    if "cover" in obj:
        ac = parse_cover(obj["cover"], f"{loc}/cover")
        cover = ac.cover
        psi = parse_psi(cover.group, _req(obj, "psi", loc), f"{loc}/psi")
        G_order = cover.group.order
    else:
        G_order = _int(_req(obj, "G_order", loc), f"{loc}/G_order", 1)
        ps = obj.get("psi", {"degree": 1})
        if not isinstance(ps, dict) or "degree" not in ps:
            raise SchemaError(f"{loc}/psi", "without cover data psi is given by {\"degree\": d}")
        psi = PsiDegree(_int(ps["degree"], f"{loc}/psi/degree", 1))
    reg = obj.get("regulator")
    if reg is None:
        raise SchemaError(f"{loc}/regulator", "missing required field")
    r_alg = _int(_req(reg, "r_alg", f"{loc}/regulator"), f"{loc}/regulator/r_alg", 0)
    gram = []
    for i, row in enumerate(_list(_req(reg, "gram", f"{loc}/regulator"), f"{loc}/regulator/gram")):
        gram.append([_fraction_or_cyc(x, f"{loc}/regulator/gram/{i}/{j}")
                     for j, x in enumerate(_list(row, f"{loc}/regulator/gram/{i}"))])
    lie = obj.get("lie", {})
    degLie = lie.get("deg") if isinstance(lie, dict) else None
    degDelta = lie.get("deg_delta") if isinstance(lie, dict) else None
    if degLie is None and degDelta is None:
        raise SchemaError(f"{loc}/lie", "need deg or deg_delta")
    flags = obj.get("flags", {})
    coprime = obj.get("coprime", {})
    inp = GlobalArithmeticInput(
        p=p, s=s,
        dimA=_int(_req(obj, "dimA", loc), f"{loc}/dimA", 0),
        g_K=_int(obj.get("g_K", 0), f"{loc}/g_K", 0),
        degZ1=_int(_req(obj, "degZ1", loc), f"{loc}/degZ1", 0),
        psi=psi, lam=parse_lambda(obj.get("lambda"), p, f"{loc}/lambda"),
        G_order=G_order, gram=gram, r_alg=r_alg,
        sha_length=_int(obj.get("sha_length", 0), f"{loc}/sha_length", 0),
        degLieA=None if degLie is None else _int(degLie, f"{loc}/lie/deg"),
        degDelta=None if degDelta is None else _int(degDelta, f"{loc}/lie/deg_delta"),
        z2=_list(obj.get("z2", []), f"{loc}/z2"),
        lo=None if obj.get("lo") is None else _int(obj["lo"], f"{loc}/lo"),
        cover=cover,
        neron_r=obj.get("neron_r"),
        in_zprime=obj.get("in_zprime", False),
        weakly_ramified=flags.get("weakly_ramified"),
        tame_over_z2=flags.get("tame_over_z2"),
        tors_A=_int(coprime.get("torsion_A", 0), f"{loc}/coprime/torsion_A", 0),
        tors_At=_int(coprime.get("torsion_At", 0), f"{loc}/coprime/torsion_At", 0),
        local_lengths=[_int(x, f"{loc}/coprime/local/{i}", 0)
                       for i, x in enumerate(_list(coprime.get("local", []), f"{loc}/coprime/local"))],
    )
    for i, ent in enumerate(inp.z2):
        if not isinstance(ent, dict) or not ("order" in ent or ("r" in ent and "kv" in ent)):
            raise SchemaError(f"{loc}/z2/{i}", "entry needs 'order' or both 'r' and 'kv'")
    return inp
