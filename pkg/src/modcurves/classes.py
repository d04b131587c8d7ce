"""Divisor class symbols on moduli spaces of stable pointed curves.

A :class:`ModuliSignature` names the space of genus ``g`` curves with marked
points labelled by an ordered tuple of strings.  Classes are formal rational
combinations (:class:`DivisorExpr`) of the symbols kappa_1, psi_p, lambda,
delta_irr and delta_{a,A}.  Boundary symbols delta_{a,A} are always stored in
canonical form, so the identification delta_{a,A} = delta_{g-a,A^c} never has
to be imposed as a relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

__all__ = [
    "SignatureError",
    "ModuliSignature",
    "ClassSymbol",
    "KAPPA1",
    "LAMBDA",
    "DELTA_IRR",
    "psi",
    "delta",
    "DivisorExpr",
    "canonical_delta",
    "is_valid_delta",
    "valid_boundary_indices",
    "all_deltas",
    "expand_shorthand",
    "eliminate_lambda",
]


class SignatureError(ValueError):
    """Raised for unstable signatures and indices that do not name a class."""


@dataclass(frozen=True)
class ModuliSignature:
    genus: int
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if not isinstance(self.genus, int) or self.genus < 0:
            raise SignatureError(f"genus must be a non-negative integer, got {self.genus!r}")
        if len(set(labels)) != len(labels):
            raise SignatureError(f"labels are not distinct: {labels}")
        if 2 * self.genus - 2 + len(labels) <= 0:
            raise SignatureError(f"unstable signature (g={self.genus}, n={len(labels)})")
        object.__setattr__(self, "_pos", {p: i for i, p in enumerate(labels)})

    @classmethod
    def standard(cls, g: int, n: int) -> "ModuliSignature":
        """Signature with labels ``"1", ..., "n"``."""
        return cls(g, tuple(str(i) for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.labels)

    def position(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise SignatureError(f"unknown label {label!r}") from None

    def subset(self, labels: Iterable[str]) -> frozenset[str]:
        out = frozenset(labels)
        for p in out:
            self.position(p)
        return out

    def sorted_labels(self, labels: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(labels, key=self.position))

    def subset_key(self, labels: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted(self.position(p) for p in labels))

    def complement(self, labels: Iterable[str]) -> frozenset[str]:
        return frozenset(self.labels) - frozenset(labels)

    def extended(self, *new_labels: str) -> "ModuliSignature":
        for x in new_labels:
            if x in self._pos:
                raise SignatureError(f"label {x!r} already present")
        return ModuliSignature(self.genus, self.labels + tuple(new_labels))

    def __str__(self) -> str:
        return f"(g={self.genus}, P={{{','.join(self.labels)}}})"


@dataclass(frozen=True)
class ClassSymbol:
    """One of ``kappa1``, ``psi(label)``, ``lambda``, ``dirr``, ``delta(a, A)``."""

    kind: str
    label: str | None = None
    a: int | None = None
    A: frozenset[str] | None = None

    def __str__(self) -> str:
        if self.kind == "kappa1":
            return "k1"
        if self.kind == "lambda":
            return "lambda"
        if self.kind == "dirr":
            return "dirr"
        if self.kind == "psi":
            return f"psi({self.label})"
        return f"delta({self.a};{{{','.join(sorted(self.A))}}})"

    def text(self, sig: ModuliSignature) -> str:
        """Like ``str`` but with delta labels in signature order."""
        if self.kind == "delta":
            return f"delta({self.a};{{{','.join(sig.sorted_labels(self.A))}}})"
        return str(self)


KAPPA1 = ClassSymbol("kappa1")
LAMBDA = ClassSymbol("lambda")
DELTA_IRR = ClassSymbol("dirr")

_KIND_ORDER = {"kappa1": 0, "psi": 1, "lambda": 2, "dirr": 3, "delta": 4}


def psi(label: str) -> ClassSymbol:
    return ClassSymbol("psi", label=str(label))


def delta(a: int, A: Iterable[str]) -> ClassSymbol:
    return ClassSymbol("delta", a=int(a), A=frozenset(str(x) for x in A))


def is_valid_delta(a: int, A: Iterable[str], sig: ModuliSignature) -> bool:
    A = frozenset(A)
    if not A <= frozenset(sig.labels):
        return False
    g = sig.genus
    nc = sig.n - len(A)
    return 0 <= a <= g and 2 * a - 2 + len(A) >= 0 and 2 * (g - a) - 2 + nc >= 0


def canonical_delta(a: int, A: Iterable[str], sig: ModuliSignature) -> tuple[int, frozenset[str]]:
    """Canonical representative of the pair {(a, A), (g - a, A^c)}.

    The smaller genus wins; on a genus tie the side holding the least label of
    the signature wins.
    """
    A = sig.subset(A)
    if not is_valid_delta(a, A, sig):
        raise SignatureError(f"delta({a};{sorted(A)}) is not a boundary class on {sig}")
    g = sig.genus
    b, B = g - a, sig.complement(A)
    if a < b:
        return a, A
    if b < a:
        return b, B
    if not sig.labels:
        return a, A
    return (a, A) if sig.labels[0] in A else (b, B)


def symbol_key(sym: ClassSymbol, sig: ModuliSignature) -> tuple:
    """Sort key ordering symbols the way generator lists are ordered."""
    k = _KIND_ORDER[sym.kind]
    if sym.kind == "psi":
        return (k, sig.position(sym.label))
    if sym.kind == "delta":
        return (k, sym.a, sig.subset_key(sym.A))
    return (k,)


def all_deltas(sig: ModuliSignature) -> list[ClassSymbol]:
    """Every canonical delta(a, A), sorted by (a, A)."""
    g, labels = sig.genus, sig.labels
    found = set()
    for a in range(g + 1):
        for k in range(len(labels) + 1):
            for A in combinations(labels, k):
                if is_valid_delta(a, A, sig):
                    found.add(canonical_delta(a, A, sig))
    syms = [delta(a, A) for a, A in found]
    syms.sort(key=lambda s: symbol_key(s, sig))
    return syms


def valid_boundary_indices(sig: ModuliSignature) -> list[ClassSymbol]:
    """The boundary divisor classes: delta_irr (when g > 0), then canonical deltas.

    In genus 0 there is no irreducible boundary divisor, so delta_irr is not
    listed; it stays a valid symbol (and is set to zero by the genus-0
    relations).
    """
    head = [DELTA_IRR] if sig.genus > 0 else []
    return head + all_deltas(sig)


def check_symbol(sym: ClassSymbol, sig: ModuliSignature) -> ClassSymbol:
    """Validate ``sym`` on ``sig`` and return its canonical form."""
    if sym.kind == "psi":
        sig.position(sym.label)
        return sym
    if sym.kind == "delta":
        a, A = canonical_delta(sym.a, sym.A, sig)
        if a == sym.a and A == sym.A:
            return sym
        return delta(a, A)
    if sym.kind in ("kappa1", "lambda", "dirr"):
        return sym
    raise SignatureError(f"unknown class symbol kind {sym.kind!r}")


class DivisorExpr:
    """Immutable formal rational combination of class symbols."""

    __slots__ = ("signature", "_terms")

    def __init__(self, signature: ModuliSignature, terms: Mapping[ClassSymbol, object] | Iterable = ()):
        acc: dict[ClassSymbol, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for sym, c in items:
            c = Fraction(c)
            if not c:
                continue
            sym = check_symbol(sym, signature)
            acc[sym] = acc.get(sym, Fraction(0)) + c
        ordered = sorted(((s, c) for s, c in acc.items() if c), key=lambda t: symbol_key(t[0], signature))
        self.signature = signature
        self._terms = tuple(ordered)

    @classmethod
    def zero(cls, sig: ModuliSignature) -> "DivisorExpr":
        return cls(sig)

    @classmethod
    def of(cls, sig: ModuliSignature, sym: ClassSymbol, coeff=1) -> "DivisorExpr":
        return cls(sig, {sym: coeff})

    @property
    def terms(self) -> dict[ClassSymbol, Fraction]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def coefficient(self, sym: ClassSymbol) -> Fraction:
        sym = check_symbol(sym, self.signature)
        for s, c in self._terms:
            if s == sym:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self._terms

    def _check_same(self, other: "DivisorExpr"):
        if not isinstance(other, DivisorExpr):
            return NotImplemented
        if other.signature != self.signature:
            raise SignatureError("expressions live on different moduli spaces")
        return None

    def __add__(self, other: "DivisorExpr") -> "DivisorExpr":
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return DivisorExpr(self.signature, list(self._terms) + list(other._terms))

    def __sub__(self, other: "DivisorExpr") -> "DivisorExpr":
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return DivisorExpr(self.signature, list(self._terms) + [(s, -c) for s, c in other._terms])

    def __neg__(self) -> "DivisorExpr":
        return DivisorExpr(self.signature, [(s, -c) for s, c in self._terms])

    def __mul__(self, scalar) -> "DivisorExpr":
        scalar = Fraction(scalar)
        return DivisorExpr(self.signature, [(s, scalar * c) for s, c in self._terms])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorExpr):
            return NotImplemented
        return self.signature == other.signature and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.signature, self._terms))

    def __repr__(self) -> str:
        return f"DivisorExpr({self.signature}, {str(self)!r})"

    def __str__(self) -> str:
        from .parsing import format_expr

        return format_expr(self)


def expand_shorthand(which: str, sig: ModuliSignature, b: int | None = None) -> DivisorExpr:
    """Expand ``"psi"`` (sum of all psi_p), ``"delta"`` (total boundary) or
    ``"delta_b"`` (canonical boundary classes with genus index ``b``)."""
    if which == "psi":
        return DivisorExpr(sig, [(psi(p), 1) for p in sig.labels])
    if which == "delta":
        return DivisorExpr(sig, [(DELTA_IRR, 1)] + [(s, 1) for s in all_deltas(sig)])
    if which == "delta_b":
        if b is None or not 0 <= b <= sig.genus:
            raise SignatureError(f"delta_b needs 0 <= b <= {sig.genus}, got {b!r}")
        return DivisorExpr(sig, [(s, 1) for s in all_deltas(sig) if s.a == b])
    raise ValueError(f"unknown shorthand {which!r}")


def eliminate_lambda(e: DivisorExpr) -> DivisorExpr:
    """Substitute lambda = (kappa_1 + delta - psi) / 12 (Mumford's relation)."""
    lam = e.coefficient(LAMBDA)
    if not lam:
        return e
    sig = e.signature
    rest = DivisorExpr(sig, [(s, c) for s, c in e.items() if s != LAMBDA])
    subst = (DivisorExpr.of(sig, KAPPA1) + expand_shorthand("delta", sig)
             - expand_shorthand("psi", sig)) * Fraction(1, 12)
    return rest + lam * subst
