"""Deterministic point enumeration for projective spaces.

Canonical representatives of P^n(F_q): first nonzero coordinate equal to 1,
all earlier coordinates 0.  The fixed order is: leading position ascending
(so the x0=1 chart comes first), then the free trailing coordinates as an
odometer with the last coordinate moving fastest, field elements in their
index order.  Every search and count in the package walks points in exactly
this order, which is what makes results reproducible bit for bit.

Over Q there is no finite enumeration; bounded-height search walks integer
coordinate vectors with entries in [-H, H], leading position ascending,
leading value 1..H ascending, then the trailing odometer; each vector is
normalized to leading coordinate 1.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .fields import FieldSpec, rationals


def num_projective_reps(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def projective_reps(spec: FieldSpec, n: int):
    """All canonical representatives of P^n(F_q), fixed order."""
    if not spec.is_finite:
        raise ValueError("projective enumeration needs a finite field")
    if n < 0:
        raise ValueError("negative ambient dimension")
    elems = [spec.from_index(i) for i in range(spec.order)]
    zero, one = elems[0], spec.one
    for lead in range(n + 1):
        head = (zero,) * lead + (one,)
        for tail in itertools.product(elems, repeat=n - lead):
            yield head + tail


def rational_reps(n: int, height: int):
    """Height-bounded rational points of P^n(Q), normalized, fixed order.

    May repeat a projective point under different integer representatives;
    callers use this for first-match searches where duplicates are harmless.
    """
    spec = rationals()
    if height < 1:
        raise ValueError("height must be positive")
    rng = range(-height, height + 1)
    for lead in range(n + 1):
        zeros = (spec.zero,) * lead
        for lv in range(1, height + 1):
            inv = Fraction(1, lv)
            for tail in itertools.product(rng, repeat=n - lead):
                yield zeros + (spec.one,) + tuple(spec.elem(t * inv) for t in tail)


def affine_tuples(spec: FieldSpec, k: int):
    """All of F_q^k as an odometer, last coordinate fastest."""
    elems = [spec.from_index(i) for i in range(spec.order)]
    return itertools.product(elems, repeat=k)
