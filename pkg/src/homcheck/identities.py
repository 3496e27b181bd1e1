"""Identities as vanishing polynomials: substitution, polarization, catalog.

An Identity wraps an MPoly asserted to vanish under every substitution,
together with its ordered variable table.  The built-in catalog holds the
named identities of anticommutative Hom-algebra theory (Malcev identity,
Hom-Malcev identity, Hom-Jacobi identity, the four-variable companion
identity and the auxiliary lemma identities), each stored in display
orientation as LHS - RHS.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dsl import format_monomial, parse_expr
from .normalform import (
    MPoly,
    canon,
    mono_leaves,
    multidegree,
    normalize,
    poly_strip_twist,
    shift_power,
)


@dataclass(frozen=True)
class Identity:
    """An MPoly asserted to be identically zero, with its variable table."""

    vars: tuple
    poly: MPoly
    name: str = None

    @property
    def degrees(self):
        """Multidegree tuple, or None when not multihomogeneous."""
        return multidegree(self.poly, len(self.vars))

    @property
    def is_multilinear(self):
        return self.degrees == (1,) * len(self.vars)

    def with_name(self, name):
        return Identity(self.vars, self.poly, name)

    def __repr__(self):
        return f"Identity({self.name or '?'}, vars={self.vars}, {len(self.poly)} terms)"


def identity_from_dsl(text, name=None):
    expr = parse_expr(text)
    return Identity(expr.vars, normalize(expr), name)


@dataclass(frozen=True)
class Substitution:
    """Monomial images for every axiom variable, over a target variable table."""

    images: tuple  # canonical Monomial per axiom variable position
    target_vars: tuple

    def as_strings(self, axiom_vars):
        return {
            axiom_vars[i]: format_monomial(m, self.target_vars)
            for i, m in enumerate(self.images)
        }


def identity_substitution(ident):
    """The substitution mapping every variable of ``ident`` to itself."""
    return Substitution(
        tuple((i, 0) for i in range(len(ident.vars))), ident.vars
    )


def _map_leaves(mono, images):
    if isinstance(mono[0], int):
        return shift_power(images[mono[0]], mono[1])
    return (_map_leaves(mono[0], images), _map_leaves(mono[1], images))


def substitute(ident, sub):
    """Apply a monomial substitution and renormalize.

    Each leaf a^k(u) is replaced by the image of u with k extra twists on
    every leaf (sound because the twisting map is multiplicative and
    identities are universally quantified).
    """
    if len(sub.images) != len(ident.vars):
        raise ValueError(
            f"substitution maps {len(sub.images)} variables, "
            f"identity has {len(ident.vars)}"
        )
    acc = {}
    for mono, coeff in ident.poly.coeffs.items():
        res = canon(_map_leaves(mono, sub.images))
        if res is None:
            continue
        sign, m = res
        acc[m] = acc.get(m, 0) + sign * coeff
    return Identity(sub.target_vars, MPoly(acc))


def rename(ident, mapping, target_vars):
    """Substitute variables for variables; mapping is name -> name."""
    index = {v: i for i, v in enumerate(target_vars)}
    images = tuple((index[mapping.get(v, v)], 0) for v in ident.vars)
    return substitute(ident, Substitution(images, tuple(target_vars)))


def polarize(ident):
    """Full multilinearization over characteristic 0.

    Every variable of degree d > 1 is replaced by fresh variables
    name#1..name#d, keeping the component multilinear in all of them
    (equivalently: sum over all bijections between the d leaf
    occurrences and the fresh variables).  Fresh variables are ordered
    after all surviving original variables.  Re-identifying the fresh
    variables recovers d! times the original polynomial.
    """
    degs = ident.degrees
    if degs is None:
        raise ValueError("cannot polarize a non-multihomogeneous identity")
    repeated = [i for i, d in enumerate(degs) if d > 1]
    if not repeated:
        return ident
    new_vars = [v for i, v in enumerate(ident.vars) if degs[i] <= 1]
    remap = {}
    for i, v in enumerate(ident.vars):
        if degs[i] <= 1:
            remap[i] = len(remap)
    fresh = {}  # old index -> list of new indices
    for i in repeated:
        fresh[i] = list(range(len(new_vars), len(new_vars) + degs[i]))
        new_vars.extend(f"{ident.vars[i]}#{j + 1}" for j in range(degs[i]))

    acc = {}
    for mono, coeff in ident.poly.coeffs.items():
        leaves = list(mono_leaves(mono))
        # occurrence slots of each repeated variable, left to right
        slots = {i: [] for i in repeated}
        for pos, (v, _) in enumerate(leaves):
            if v in repeated:
                slots[v].append(pos)
        for perms in itertools.product(
            *(itertools.permutations(fresh[i]) for i in repeated)
        ):
            assign = {}
            for i, perm in zip(repeated, perms):
                for pos, new_idx in zip(slots[i], perm):
                    assign[pos] = new_idx
            counter = itertools.count()
            relabeled = _relabel(mono, remap, assign, counter)
            res = canon(relabeled)
            if res is None:
                continue
            sign, m = res
            acc[m] = acc.get(m, 0) + sign * coeff
    return Identity(tuple(new_vars), MPoly(acc), ident.name)


def _relabel(mono, remap, assign, counter):
    if isinstance(mono[0], int):
        pos = next(counter)
        v = assign.get(pos)
        if v is None:
            v = remap[mono[0]]
        return (v, mono[1])
    return (
        _relabel(mono[0], remap, assign, counter),
        _relabel(mono[1], remap, assign, counter),
    )


def strip_twist(ident):
    """Specialize the twisting map to the identity map (all powers -> 0)."""
    return Identity(ident.vars, poly_strip_twist(ident.poly), ident.name)


# ---------------------------------------------------------------------------
# catalog

_CATALOG_SRC = {
    # Hom-Jacobi identity: the Hom-Jacobian vanishes.
    "hom_jacobi": "vars x,y,z; J(x,y,z)",
    # Hom-Malcev identity.
    "hom_malcev": "vars x,y,z; J(a(x),a(y),x*z) - J(x,y,z)*a2(x)",
    # Four-variable identity equivalent to the Hom-Malcev identity.
    "identity_1_2": (
        "vars w,x,y,z;"
        " J(w*x,a(y),a(z)) - J(w,y,z)*a2(x) - a2(w)*J(x,y,z)"
        " + 2*J(y*z,a(w),a(x))"
    ),
    # Free-algebra identity relating twisted Jacobians of products.
    "lemma_2_4_ii": (
        "vars w,x,y,z;"
        " a2(w)*J(x,y,z) - a2(x)*J(y,z,w) + a2(y)*J(z,w,x) - a2(z)*J(w,x,y)"
        " - J(w*x,a(y),a(z)) - J(y*z,a(w),a(x)) - J(w*y,a(z),a(x))"
        " - J(z*x,a(w),a(y)) + J(z*w,a(x),a(y)) + J(x*y,a(z),a(w))"
    ),
    # Defining combination of the G function; zero by macro expansion.
    "g_def": (
        "vars w,x,y,z;"
        " G(w,x,y,z) - J(w*x,a(y),a(z)) + a2(x)*J(w,y,z) + J(x,y,z)*a2(w)"
    ),
    # Cyclic sum of twisted Jacobians of products.
    "eq_2_2": (
        "vars w,x,y,z;"
        " J(w*x,a(y),a(z)) + J(x*y,a(z),a(w)) + J(y*z,a(w),a(x))"
        " + J(z*w,a(x),a(y))"
    ),
    # 2G expressed through twisted Jacobians.
    "eq_2_3": (
        "vars w,x,y,z;"
        " 2*G(w,x,y,z) - a2(w)*J(x,y,z) + a2(x)*J(w,y,z) - a2(y)*J(z,w,x)"
        " + a2(z)*J(w,x,y) - J(w*x,a(y),a(z)) - J(y*z,a(w),a(x))"
    ),
    # G as twice a two-term Jacobian sum.
    "eq_2_4": "vars w,x,y,z; G(w,x,y,z) - 2*J(w*x,a(y),a(z)) - 2*J(y*z,a(w),a(x))",
    # Alternating twisted-Jacobian sum as three times the two-term sum.
    "eq_2_5": (
        "vars w,x,y,z;"
        " a2(w)*J(x,y,z) - a2(x)*J(y,z,w) + a2(y)*J(z,w,x) - a2(z)*J(w,x,y)"
        " - 3*J(w*x,a(y),a(z)) - 3*J(y*z,a(w),a(x))"
    ),
}

CATALOG_NAMES = ("malcev",) + tuple(_CATALOG_SRC)

_catalog_cache = {}


def catalog(name):
    """Return a built-in identity by name; raises KeyError when unknown."""
    if name in _catalog_cache:
        return _catalog_cache[name]
    if name == "malcev":
        ident = strip_twist(catalog("hom_malcev")).with_name("malcev")
    elif name in _CATALOG_SRC:
        ident = identity_from_dsl(_CATALOG_SRC[name], name)
    else:
        raise KeyError(f"unknown catalog identity {name!r}")
    _catalog_cache[name] = ident
    return ident
