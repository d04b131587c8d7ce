"""Pullbacks of divisor classes along forgetful, gluing and attaching maps.

* ``pullback_pi``: forget the point ``x``, from (g, P + x) to (g, P).
* ``pullback_xi``: glue ``q`` to ``r``, from (g-1, P + {q, r}) to (g, P).
* ``pullback_theta``: attach a fixed genus g-a curve carrying A^c at ``q``,
  from (a, A + q) to (g, P).

Boundary indices produced by the formulas that are not classes on the target
space are zero.  When two boundary terms of one formula name the same class
on the target, they describe the same boundary component and are counted
once.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .classes import (
    DELTA_IRR,
    KAPPA1,
    ClassSymbol,
    DivisorExpr,
    ModuliSignature,
    SignatureError,
    canonical_delta,
    delta,
    is_valid_delta,
    psi,
)

__all__ = ["pullback_pi", "pullback_xi", "pullback_theta"]


def _deltas(target: ModuliSignature, pairs: Iterable[tuple[int, Iterable[str]]]) -> list[tuple[ClassSymbol, int]]:
    seen = []
    for b, B in pairs:
        B = frozenset(B)
        if not is_valid_delta(b, B, target):
            continue
        s = delta(*canonical_delta(b, B, target))
        if s not in seen:
            seen.append(s)
    return [(s, 1) for s in seen]


def _linear(e: DivisorExpr, target: ModuliSignature,
            image: Callable[[ClassSymbol], list[tuple[ClassSymbol, int]]]) -> DivisorExpr:
    terms = []
    for s, c in e.items():
        if s.kind == "lambda":
            raise SignatureError("pullbacks take lambda-free expressions; eliminate lambda first")
        terms.extend((t, c * k) for t, k in image(s))
    return DivisorExpr(target, terms)


def _new_labels(sig: ModuliSignature, *labels: str) -> None:
    if len(set(labels)) != len(labels):
        raise SignatureError(f"new labels must be distinct: {labels}")
    for x in labels:
        if x in sig.labels:
            raise SignatureError(f"label {x!r} already used on {sig}")


def pullback_pi(e: DivisorExpr, x: str) -> DivisorExpr:
    sig = e.signature
    x = str(x)
    _new_labels(sig, x)
    target = sig.extended(x)

    def image(s: ClassSymbol):
        if s.kind == "kappa1":
            return [(KAPPA1, 1), (psi(x), -1)]
        if s.kind == "psi":
            return [(psi(s.label), 1), (delta(0, {s.label, x}), -1)]
        if s.kind == "dirr":
            return [(DELTA_IRR, 1)]
        return _deltas(target, [(s.a, s.A), (s.a, s.A | {x})])

    return _linear(e, target, image)


def pullback_xi(e: DivisorExpr, q: str, r: str) -> DivisorExpr:
    sig = e.signature
    q, r = str(q), str(r)
    if sig.genus < 1:
        raise SignatureError("gluing two points needs source genus at least 1")
    _new_labels(sig, q, r)
    target = ModuliSignature(sig.genus - 1, sig.labels + (q, r))
    g = sig.genus

    def image(s: ClassSymbol):
        if s.kind in ("kappa1", "psi"):
            return [(s, 1)]
        if s.kind == "dirr":
            split = []
            for b in range(target.genus + 1):
                for mask in range(1 << sig.n):
                    B = {p for i, p in enumerate(sig.labels) if mask >> i & 1} | {q}
                    split.append((b, B))
            return [(DELTA_IRR, 1), (psi(q), -1), (psi(r), -1)] + _deltas(target, split)
        a, A = s.a, s.A
        if g == 2 * a and not A and not sig.labels:
            return _deltas(target, [(a, A)])
        return _deltas(target, [(a, A), (a - 1, A | {q, r})])

    return _linear(e, target, image)


def pullback_theta(e: DivisorExpr, a: int, A: Iterable[str], q: str) -> DivisorExpr:
    sig = e.signature
    g = sig.genus
    q = str(q)
    A = sig.subset(A)
    Ac = sig.complement(A)
    _new_labels(sig, q)
    if not 0 <= a <= g:
        raise SignatureError(f"need 0 <= a <= {g}, got {a}")
    if 2 * a - 2 + len(A) + 1 <= 0 or 2 * (g - a) - 2 + len(Ac) + 1 <= 0:
        raise SignatureError(f"(a, A) = ({a}, {sorted(A)}) does not split a stable curve on {sig}")
    target = ModuliSignature(a, sig.sorted_labels(A) + (q,))
    whole = not Ac
    special = canonical_delta(a, A, sig)

    def image(s: ClassSymbol):
        if s.kind in ("kappa1", "dirr"):
            return [(s, 1)]
        if s.kind == "psi":
            return [(s, 1)] if s.label in A else []
        b, B = s.a, s.A
        if (b, B) == special:
            if whole:
                return _deltas(target, [(2 * a - g, A | {q})]) + [(psi(q), -1)]
            return [(psi(q), -1)]
        if whole:
            return _deltas(target, [(b, B), (b + a - g, B | {q})])
        for rb, rB in ((b, B), (g - b, sig.complement(B))):
            if rB <= A:
                return _deltas(target, [(rb, rB)])
            if rB >= Ac:
                return _deltas(target, [(rb + a - g, (rB - Ac) | {q})])
        return []

    return _linear(e, target, image)
