"""Exact evaluation in finite-dimensional Hom-algebras given by structure
constants, plus the twisting construction turning a Malcev algebra into a
Hom-Malcev algebra.

An algebra is an anticommutative product on basis e_1..e_n, stored as
rational constants c[i][j][k] for i < j only (e_j*e_i = -e_i*e_j,
e_i*e_i = 0), together with an n x n rational twist matrix.  Elements
are sparse rational coefficient vectors.  Identity checks polarize
first and then evaluate on all basis tuples, which is complete by
multilinearity over a characteristic-0 field.

JSON schema (rationals as "p/q" or integer strings; omitted (i,j)
pairs mean zero product; indices are 1-based)::

    { "dim": n, "basis": [names],
      "product": [ { "i": 1, "j": 2, "out": { "3": "1" } }, ... ],
      "twist": [[row of rationals], ...],
      "require_multiplicative": bool }
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .identities import polarize

BUNDLED = ("cross3", "cross3_rot", "m7", "m7_auto", "abelian4")


class AlgebraError(ValueError):
    """Schema or multiplicativity violation in an algebra document."""


@dataclass
class AlgebraSpec:
    """Anticommutative algebra with a twisting map, over exact rationals."""

    dim: int
    basis: tuple
    product: dict  # (i, j) with i < j -> {k: Fraction}, 0-based
    twist: tuple   # matrix rows, tuple of tuples of Fraction
    name: str = None
    twist_cols: tuple = field(init=False, repr=False)

    def __post_init__(self):
        cols = []
        for j in range(self.dim):
            col = {r: self.twist[r][j] for r in range(self.dim) if self.twist[r][j]}
            cols.append(col)
        self.twist_cols = tuple(cols)

    def basis_element(self, i):
        return {i: Fraction(1)}

    def is_multiplicative(self):
        """First basis pair violating a(u*v) = a(u)*a(v), or None."""
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                lhs = apply_twist(self, self.product.get((i, j), {}))
                rhs = multiply(self, self.twist_cols[i], self.twist_cols[j])
                if lhs != rhs:
                    return (i + 1, j + 1)
        return None


def _fraction(value):
    if isinstance(value, bool):
        raise AlgebraError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise AlgebraError(f"bad rational {value!r}: {exc}") from exc
    raise AlgebraError(f"expected a rational string, got {value!r}")


def load_algebra(doc, name=None):
    """Validate a parsed JSON document into an AlgebraSpec."""
    if not isinstance(doc, dict):
        raise AlgebraError("algebra document must be a JSON object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise AlgebraError("'dim' must be a positive integer")
    basis = doc.get("basis", [f"e{i + 1}" for i in range(dim)])
    if not isinstance(basis, list) or len(basis) != dim:
        raise AlgebraError("'basis' must list one name per dimension")
    product = {}
    for entry in doc.get("product", []):
        if not isinstance(entry, dict) or not {"i", "j", "out"} <= set(entry):
            raise AlgebraError(f"bad product entry {entry!r}")
        i, j = entry["i"], entry["j"]
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= dim):
            raise AlgebraError(
                f"product entry needs 1 <= i < j <= {dim}, got i={i}, j={j}"
            )
        if (i - 1, j - 1) in product:
            raise AlgebraError(f"duplicate product entry for ({i},{j})")
        out = {}
        for k, c in entry["out"].items():
            ki = int(k)
            if not 1 <= ki <= dim:
                raise AlgebraError(f"product target index {k} out of range")
            cf = _fraction(c)
            if cf:
                out[ki - 1] = cf
        product[(i - 1, j - 1)] = out
    twist_doc = doc.get("twist")
    if (
        not isinstance(twist_doc, list)
        or len(twist_doc) != dim
        or any(not isinstance(row, list) or len(row) != dim for row in twist_doc)
    ):
        raise AlgebraError(f"'twist' must be a {dim}x{dim} matrix")
    twist = tuple(tuple(_fraction(c) for c in row) for row in twist_doc)
    spec = AlgebraSpec(dim, tuple(basis), product, twist, name or doc.get("name"))
    if doc.get("require_multiplicative", False):
        bad = spec.is_multiplicative()
        if bad is not None:
            raise AlgebraError(
                f"twist is not an endomorphism: fails on basis pair {bad}"
            )
    return spec


def load_algebra_file(path):
    """Load from a JSON file path, or from the bundled catalog by name."""
    import os

    if not os.path.exists(path):
        stem = os.path.splitext(os.path.basename(str(path)))[0]
        if stem in BUNDLED:
            data = resources.files("homcheck.data").joinpath(f"{stem}.json")
            return load_algebra(json.loads(data.read_text()), stem)
        raise FileNotFoundError(path)
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"invalid JSON in {path}: {exc}") from exc
    return load_algebra(doc, name=str(path))


def dump_algebra(spec):
    """Inverse of load_algebra, as a JSON-serializable document."""
    return {
        "dim": spec.dim,
        "basis": list(spec.basis),
        "product": [
            {
                "i": i + 1,
                "j": j + 1,
                "out": {str(k + 1): str(c) for k, c in sorted(out.items())},
            }
            for (i, j), out in sorted(spec.product.items())
            if out
        ],
        "twist": [[str(c) for c in row] for row in spec.twist],
        "require_multiplicative": True,
    }


# ---------------------------------------------------------------------------
# element arithmetic (elements are sparse dicts index -> Fraction)

def multiply(spec, u, v):
    """Bilinear extension of the structure constants."""
    out = {}
    for i, ci in u.items():
        for j, cj in v.items():
            if i == j:
                continue
            if i < j:
                row, s = spec.product.get((i, j)), ci * cj
            else:
                row, s = spec.product.get((j, i)), -ci * cj
            if row:
                for k, c in row.items():
                    out[k] = out.get(k, 0) + s * c
    return {k: c for k, c in out.items() if c}


def apply_twist(spec, u):
    out = {}
    for j, cj in u.items():
        for r, c in spec.twist_cols[j].items():
            out[r] = out.get(r, 0) + cj * c
    return {k: c for k, c in out.items() if c}


def element_add(parts):
    out = {}
    for coeff, u in parts:
        for k, c in u.items():
            out[k] = out.get(k, 0) + coeff * c
    return {k: c for k, c in out.items() if c}


def eval_monomial(spec, mono, values, _twists=None):
    """Evaluate a canonical monomial; values[i] is the element for var i."""
    if isinstance(mono[0], int):
        u = values[mono[0]]
        for _ in range(mono[1]):
            u = apply_twist(spec, u)
        return u
    return multiply(
        spec,
        eval_monomial(spec, mono[0], values),
        eval_monomial(spec, mono[1], values),
    )


def eval_poly(spec, poly, values):
    return element_add(
        (c, eval_monomial(spec, m, values)) for m, c in poly.coeffs.items()
    )


def eval_raw(spec, expr, values):
    """Evaluate a RawExpr directly (without normalizing first)."""

    def term(t):
        tag = t[0]
        if tag == "var":
            return values[t[1]]
        if tag == "twist":
            return apply_twist(spec, term(t[1]))
        return multiply(spec, term(t[1]), term(t[2]))

    return element_add((c, term(t)) for c, t in expr.terms)


# ---------------------------------------------------------------------------
# identity checking and the twisting construction

@dataclass(frozen=True)
class Counterexample:
    """First basis tuple (1-based) where the polarized identity fails."""

    variables: tuple
    tuple_indices: tuple
    residual: dict

    def describe(self, spec):
        assignment = ", ".join(
            f"{v} = {spec.basis[i - 1]}"
            for v, i in zip(self.variables, self.tuple_indices)
        )
        value = " + ".join(
            f"{c}*{spec.basis[k]}" if c != 1 else spec.basis[k]
            for k, c in sorted(self.residual.items())
        )
        return f"{assignment} -> {value}"


def check_identity_concrete(spec, ident, jobs=1):
    """Evaluate the polarized identity on all basis tuples.

    Returns None when the identity holds, otherwise the Counterexample
    at the first failing tuple in lexicographic tuple order (independent
    of the parallelism setting).
    """
    ident = ident if ident.is_multilinear else polarize(ident)
    m = len(ident.vars)
    # cache twisted basis leaves: (power, basis index) -> element
    twisted = {}
    maxpow = max(
        (p for mono in ident.poly.coeffs for _, p in _leaf_powers(mono)),
        default=0,
    )
    for i in range(spec.dim):
        u = spec.basis_element(i)
        twisted[(0, i)] = u
        for p in range(1, maxpow + 1):
            u = apply_twist(spec, u)
            twisted[(p, i)] = u

    terms = ident.poly.sorted_terms()

    def probe(tup):
        acc = {}
        for mono, coeff in terms:
            val = _eval_mono_tuple(spec, mono, tup, twisted)
            for k, c in val.items():
                acc[k] = acc.get(k, 0) + coeff * c
        acc = {k: c for k, c in acc.items() if c}
        if acc:
            return Counterexample(
                ident.vars, tuple(i + 1 for i in tup), acc
            )
        return None

    tuples = itertools.product(range(spec.dim), repeat=m)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for res in pool.map(probe, tuples, chunksize=64):
                if res is not None:
                    return res
        return None
    for tup in tuples:
        res = probe(tup)
        if res is not None:
            return res
    return None


def _leaf_powers(mono):
    if isinstance(mono[0], int):
        yield mono
    else:
        yield from _leaf_powers(mono[0])
        yield from _leaf_powers(mono[1])


def _eval_mono_tuple(spec, mono, tup, twisted):
    if isinstance(mono[0], int):
        return twisted[(mono[1], tup[mono[0]])]
    return multiply(
        spec,
        _eval_mono_tuple(spec, mono[0], tup, twisted),
        _eval_mono_tuple(spec, mono[1], tup, twisted),
    )


def yau_twist(spec):
    """Twisted algebra: same twist map, product composed with it.

    Requires the twist to be a multiplicative endomorphism of the
    original product; the result then satisfies the Hom-Malcev identity
    whenever the original is a Malcev algebra.
    """
    bad = spec.is_multiplicative()
    if bad is not None:
        raise AlgebraError(
            f"twist is not an endomorphism: fails on basis pair {bad}"
        )
    product = {}
    for (i, j), out in spec.product.items():
        new = apply_twist(spec, out)
        if new:
            product[(i, j)] = new
    return AlgebraSpec(
        spec.dim,
        spec.basis,
        product,
        spec.twist,
        f"{spec.name}~twisted" if spec.name else None,
    )
