"""Pointed quotients ``E(A) / (E - Z)(A)`` on local test algebras.

On a local ring ``A`` a point of ``E`` lies in the open complement of
``Z = V(h_1, ..., h_c)`` exactly when some ``h_i`` evaluates to a unit.  All
such points collapse to one basepoint ``*``; every other point is its own
class.  The basepoint is always present, even when nothing collapses onto it.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, NonLocalTensor, NotLocalAlgebra, RingMismatch
from .scheme import Check
from .points import (dual_numbers, enumerate_points, evaluate_polys, finite_field,
                     restriction_to_tensor, tensor_is_local, tensor_with)

BASEPOINT = "*"


@dataclass
class ThomPresentation:
    """A scheme ``E`` and equations ``h`` of a closed subscheme ``Z`` inside it."""
    scheme: object
    equations: tuple

    def __post_init__(self):
        ring = self.scheme.ring
        self.equations = tuple(ring.parse(h) if isinstance(h, str) else ring.coerce(h)
                               for h in self.equations)


@dataclass
class ThomClassSet:
    algebra: object
    classes: np.ndarray  # points that do not collapse, one class each
    collapsed: int  # how many points went to the basepoint

    def __len__(self):
        return len(self.classes) + 1

    def labels(self):
        return [tuple(self.algebra.format(x) for x in row) for row in self.classes] + [BASEPOINT]


def thom_presentation(total):
    """Total space with its zero section cut out by the fiber coordinates."""
    return ThomPresentation(total.scheme, tuple(total.zero_section_ideal()))


def _collapse_mask(P, points, A):
    """True where some equation evaluates to a unit of ``A``."""
    if not P.equations:
        return np.zeros(len(points), dtype=bool)
    vals = evaluate_polys(list(P.equations), points, A)
    return A.is_unit(vals).any(axis=1)


def thom_points(P, A, budget=None):
    if not A.is_local:
        raise NotLocalAlgebra(f"{A.label} is not local")
    pts = enumerate_points(P.scheme, A, budget)
    mask = _collapse_mask(P, pts.points, A)
    return ThomClassSet(A, pts.points[~mask], int(mask.sum()))


def admissible_algebras(L, max_field=None, budget=None, nvars=None, dual=True):
    """Local test algebras ``A`` over ``k`` with ``A (x) L`` local, within the budget."""
    p = L.base.p
    max_field = max_field or p**3
    out = []
    s = 1
    while p**s <= max_field:
        A = finite_field(p, s)
        if nvars is None or budget is None or A.size**nvars <= budget:
            out.append(A)
        s += 1
    if dual:
        out.append(dual_numbers(p))
    return [A for A in out if tensor_is_local(A, L)]


def _sides(E, RE=None):
    from .bundle import restrict_bundle, total_space
    RE = RE or restrict_bundle(E, check_points=False)
    P1 = thom_presentation(total_space(E))
    P2 = thom_presentation(total_space(RE))
    return P1, P2


def _rows(arr):
    return {tuple(int(x) for x in r) for r in arr}


def thom_compare_at(P1, P2, L, A, budget=None):
    """The adjunction map on points is a basepoint-preserving bijection of classes."""
    if not tensor_is_local(A, L):
        raise NonLocalTensor(f"{A.label} (x) L is not local")
    AL = tensor_with(A, L)
    all_right = enumerate_points(P2.scheme, A, budget).points  # R(E) side, over A
    all_left = enumerate_points(P1.scheme, AL, budget).points  # E side, over A (x) L
    image = restriction_to_tensor(all_right, A, AL, L.degree, L.name)
    collapsed_r = _collapse_mask(P2, all_right, A)
    collapsed_l = _collapse_mask(P1, image, AL)
    right = ThomClassSet(A, all_right[~collapsed_r], int(collapsed_r.sum()))
    left_mask = _collapse_mask(P1, all_left, AL)
    left = ThomClassSet(AL, all_left[~left_mask], int(left_mask.sum()))
    witness = {"algebra": A.label, "restricted_classes": len(right), "classes": len(left)}
    if np.any(collapsed_r != collapsed_l):
        k = int(np.flatnonzero(collapsed_r != collapsed_l)[0])
        witness["basepoint_mismatch"] = [A.format(x) for x in all_right[k]]
        return Check(False, witness)
    mapped = _rows(image[~collapsed_r])
    if mapped != _rows(left.classes) or len(mapped) != len(right.classes):
        witness["class_mismatch"] = {"mapped": len(mapped), "target": len(left.classes)}
        return Check(False, witness)
    return Check(True, witness)


def thom_compare(E, algebras=None, budget=None):
    """Class sets of ``Th(R(E))`` and ``R(Th(E))`` agree on every admissible local algebra."""
    L = E.base.base
    P1, P2 = _sides(E)
    algebras = algebras if algebras is not None else admissible_algebras(L)
    results, skipped, holds = [], [], True
    for A in algebras:
        try:
            c = thom_compare_at(P1, P2, L, A, budget)
        except (NonLocalTensor, BudgetExceeded) as exc:
            skipped.append({"algebra": A.label, "reason": str(exc)})
            continue
        results.append(c.witness)
        holds = holds and c.holds
    return Check(holds, {"algebras": results, "skipped": skipped})


def step2_check(E, A, budget=None, RE=None):
    """``phi`` avoids ``R(Z)`` iff its adjoint avoids ``Z``, for every ``phi`` in ``R(E)(A)``."""
    L = E.base.base
    if not (A.is_local and tensor_is_local(A, L)):
        raise NonLocalTensor(f"{A.label} (x) L is not local")
    AL = tensor_with(A, L)
    P1, P2 = _sides(E, RE)
    pts = enumerate_points(P2.scheme, A, budget).points
    image = restriction_to_tensor(pts, A, AL, L.degree, L.name)
    avoid_r = _collapse_mask(P2, pts, A)
    avoid_l = _collapse_mask(P1, image, AL)
    witness = {"algebra": A.label, "points": len(pts), "in_complement": int(avoid_r.sum())}
    if np.any(avoid_r != avoid_l):
        k = int(np.flatnonzero(avoid_r != avoid_l)[0])
        witness["mismatch"] = [A.format(x) for x in pts[k]]
        return Check(False, witness)
    return Check(True, witness)


def gysin_shadow(X, hs, F, budget=None):
    """``Th(N_{Z/X})`` and ``X/(X - Z)`` have the same classes at the field ``F``: ``Z(F)`` plus ``*``."""
    from .bundle import normal_presentation, total_space
    if not F.is_field:
        raise NotLocalAlgebra(f"{F.label} is not a field")
    N = normal_presentation(X, hs, require_smooth=False)
    T = total_space(N.normal_bundle)
    left = thom_points(thom_presentation(T), F, budget)
    right = thom_points(ThomPresentation(X, N.equations), F, budget)
    n = X.nvars
    projected = _rows(left.classes[:, :n])
    witness = {"algebra": F.label, "normal_classes": len(left), "classes": len(right)}
    ok = len(left) == len(right) and projected == _rows(right.classes)
    return Check(ok, witness)


def field_embedding(A, B):
    """A ring map ``A -> B`` of finite fields, sending ``u`` to the smallest root of its modulus."""
    if not A.factors:
        return np.arange(A.size)
    (name, m), = A.factors
    for r in range(B.size):
        acc = 0
        pw = 1
        for c in m:
            acc = int(B.add(acc, B.mul(pw, c % B.p)))
            pw = int(B.mul(pw, r))
        if acc == 0:
            return _hom_from_generator(A, B, {name: r})
    raise RingMismatch(f"{A.label} does not embed in {B.label}")


def _hom_from_generator(S, T, images, base_map=None):
    """Table of the ring map ``S -> T`` determined by images of the factor generators."""
    basis_img = []
    for e in S.basis:
        acc = 1
        for (name, _), k in zip(S.factors, e):
            g = images[name]
            for _ in range(k):
                acc = int(T.mul(acc, g))
        basis_img.append(acc)
    coords = S.all_coords
    out = np.zeros(S.size, dtype=np.int64)
    for k, img in enumerate(basis_img):
        out = T.add(out, T.mul(coords[:, k] % T.p, img))
    return out


def naturality(E, A, B, budget=None):
    """Thom comparisons over ``A`` and ``B`` commute with a field inclusion ``A -> B``."""
    L = E.base.base
    P1, P2 = _sides(E)
    iota = field_embedding(A, B)
    AL, BL = tensor_with(A, L), tensor_with(B, L)
    images = {n: int(iota[A.monomial(**{n: 1})]) for n, _ in A.factors}
    images[L.name] = BL.monomial(**{L.name: 1})
    iota_L = _hom_from_generator(AL, BL, images)
    pts = thom_points(P2, A, budget).classes
    via_A = iota_L[restriction_to_tensor(pts, A, AL, L.degree, L.name)]
    via_B = restriction_to_tensor(iota[pts], B, BL, L.degree, L.name)
    ok = bool(np.all(via_A == via_B))
    targets = _rows(thom_points(P1, BL, budget).classes)
    ok = ok and _rows(via_B) <= targets
    return Check(ok, {"from": A.label, "to": B.label, "classes": len(pts) + 1})
