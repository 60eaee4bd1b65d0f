"""File formats and canonical JSON serialization.

Cover file:    {"degree": d, "alpha": [..], "beta": [..],
                "branches": [{"label": str, "perm": [..]}, ...]}
H1 map file:   {"g": g, "target_rank": t, "matrix": [[..], [..]]}
Product file:  {"target_rank": t, "factors": [cover | {"h1": h1map} | "path", ...]}

Permutations are 0-based one-line arrays in files; cycle notation is a CLI
convenience only.  String factors in a product file are paths resolved
relative to the product file's directory.

canonical_json is the single serializer: sorted keys, two-space indent,
trailing newline.  Parsing then serializing canonical input is therefore
byte-identical.
"""

from __future__ import annotations

import json
import os

from .covers import Branch, MonodromyRep, validate
from .errors import InvalidInputError
from .finiteness import ProductFibration, product_violations
from .homology import H1Map
from .matrices import Matrix
from .perm import Permutation


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InvalidInputError(f"no such file: {path}", [f"file: {path} not found"])
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"malformed JSON in {path}: {e}", [f"json: {e}"])


# ---------------------------------------------------------------------------
# covers


def cover_to_dict(rep: MonodromyRep) -> dict:
    return {
        "degree": rep.degree,
        "alpha": list(rep.sigma_alpha.images),
        "beta": list(rep.sigma_beta.images),
        "branches": [
            {"label": b.label, "perm": list(b.perm.images)} for b in rep.branches
        ],
    }


def _perm_from_obj(obj, degree, what, violations):
    if not isinstance(obj, list) or not all(isinstance(x, int) for x in obj):
        violations.append(f"{what}: must be a one-line array of integers")
        return None
    if len(obj) != degree:
        violations.append(f"{what}: degree mismatch (length {len(obj)}, expected {degree})")
        return None
    try:
        return Permutation(tuple(obj))
    except ValueError:
        violations.append(f"{what}: not a bijection")
        return None


def cover_from_dict(data):
    """Structural parse; returns (rep or None, named violations).

    The returned rep, when present, may still carry semantic violations
    (relator, parity, ...), which are included in the list.
    """
    violations = []
    if not isinstance(data, dict):
        return None, ["structure: cover must be a JSON object"]
    unknown = sorted(set(data) - {"degree", "alpha", "beta", "branches"})
    if unknown:
        violations.append(f"structure: unknown fields {unknown}")
    degree = data.get("degree")
    if not isinstance(degree, int) or degree < 1:
        violations.append("degree: must be a positive integer")
        return None, violations
    alpha = _perm_from_obj(data.get("alpha"), degree, "alpha", violations)
    beta = _perm_from_obj(data.get("beta"), degree, "beta", violations)
    branches = []
    raw_branches = data.get("branches")
    if not isinstance(raw_branches, list):
        violations.append("branches: must be a list")
    else:
        for i, b in enumerate(raw_branches, start=1):
            if not isinstance(b, dict) or "perm" not in b:
                violations.append(f"branch {i}: must be an object with 'label' and 'perm'")
                continue
            label = b.get("label")
            if not isinstance(label, str):
                violations.append(f"branch {i}: missing string label")
                label = f"b{i}"
            perm = _perm_from_obj(b["perm"], degree, f"branch {label}", violations)
            if perm is not None:
                branches.append(Branch(label, perm))
    if violations or alpha is None or beta is None:
        return None, violations
    rep = MonodromyRep(degree=degree, sigma_alpha=alpha, sigma_beta=beta, branches=tuple(branches))
    return rep, validate(rep)


def parse_cover(path) -> MonodromyRep:
    """Load and fully validate a cover file; raises on any violation."""
    rep, violations = cover_from_dict(_load_json(path))
    if violations:
        raise InvalidInputError(
            f"invalid cover file {path}: " + "; ".join(violations), violations
        )
    return rep


def serialize_cover(rep: MonodromyRep) -> str:
    return canonical_json(cover_to_dict(rep))


# ---------------------------------------------------------------------------
# H1 maps


def h1_to_dict(m: H1Map) -> dict:
    return {"g": m.g, "target_rank": m.target_rank, "matrix": m.matrix.to_lists()}


def h1_from_dict(data):
    violations = []
    if not isinstance(data, dict):
        return None, ["structure: H1 map must be a JSON object"]
    unknown = sorted(set(data) - {"g", "target_rank", "matrix"})
    if unknown:
        violations.append(f"structure: unknown fields {unknown}")
    g = data.get("g")
    t = data.get("target_rank", 2)
    if not isinstance(g, int) or g < 1:
        violations.append("g: must be a positive integer")
    if not isinstance(t, int) or t < 1:
        violations.append("target_rank: must be a positive integer")
    rows = data.get("matrix")
    if not isinstance(rows, list) or not all(
        isinstance(r, list) and all(isinstance(x, int) for x in r) for r in rows
    ):
        violations.append("matrix: must be a list of integer rows")
    if violations:
        return None, violations
    if len(rows) != t or any(len(r) != 2 * g for r in rows):
        return None, [f"matrix: must be {t} x {2 * g}"]
    return H1Map(g=g, target_rank=t, matrix=Matrix(tuple(tuple(r) for r in rows))), []


def parse_h1(path) -> H1Map:
    m, violations = h1_from_dict(_load_json(path))
    if violations:
        raise InvalidInputError(
            f"invalid H1 map file {path}: " + "; ".join(violations), violations
        )
    return m


# ---------------------------------------------------------------------------
# products


def product_to_dict(p: ProductFibration) -> dict:
    factors = []
    for f in p.factors:
        if isinstance(f, MonodromyRep):
            factors.append(cover_to_dict(f))
        else:
            factors.append({"h1": h1_to_dict(f)})
    return {"target_rank": p.target_rank, "factors": factors}


def product_from_dict(data, base_dir="."):
    violations = []
    if not isinstance(data, dict):
        return None, ["structure: product must be a JSON object"]
    unknown = sorted(set(data) - {"target_rank", "factors"})
    if unknown:
        violations.append(f"structure: unknown fields {unknown}")
    t = data.get("target_rank")
    if not isinstance(t, int) or t < 1:
        violations.append("target_rank: must be a positive integer")
        return None, violations
    raw = data.get("factors")
    if not isinstance(raw, list) or not raw:
        violations.append("factors: must be a non-empty list")
        return None, violations
    factors = []
    for i, item in enumerate(raw, start=1):
        if isinstance(item, str):
            path = item if os.path.isabs(item) else os.path.join(base_dir, item)
            try:
                item = _load_json(path)
            except InvalidInputError as e:
                violations.append(f"factor {i}: {e}")
                continue
        if not isinstance(item, dict):
            violations.append(f"factor {i}: must be a cover object, an {{'h1': ...}} object, or a path")
            continue
        if "h1" in item:
            m, v = h1_from_dict(item["h1"])
            if v:
                violations.extend(f"factor {i}: {x}" for x in v)
            else:
                factors.append(m)
        else:
            rep, v = cover_from_dict(item)
            if v:
                violations.extend(f"factor {i}: {x}" for x in v)
            else:
                factors.append(rep)
    if violations:
        return None, violations
    p = ProductFibration(target_rank=t, factors=tuple(factors))
    return p, product_violations(p)


def parse_product(path) -> ProductFibration:
    """Load and fully validate a product file; raises on any violation."""
    p, violations = product_from_dict(_load_json(path), base_dir=os.path.dirname(os.path.abspath(path)))
    if violations:
        raise InvalidInputError(
            f"invalid product file {path}: " + "; ".join(violations), violations
        )
    return p


def serialize_product(p: ProductFibration) -> str:
    return canonical_json(product_to_dict(p))
