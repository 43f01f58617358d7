"""Rank-1 constraint systems.

Variable 0 is the constant one, variables 1..num_inputs are public inputs,
the rest are private.  A constraint is a triple of sparse linear
combinations (A, B, C) with <A,w> * <B,w> = <C,w>.

``LC`` objects carry their witness value alongside their terms.  When a
system is built without a witness every value is ``None`` and the same
synthesis code produces the bare shape used by setup.
"""

from __future__ import annotations

import contextlib
import json
from typing import Iterable, Union

from ..algebra.field import FIELD_MODULUS as P

Coeffs = dict[int, int]


class MissingWitnessError(RuntimeError):
    pass


class UnsatisfiedError(ValueError):
    """A constraint does not hold; carries the failing index and its category."""

    def __init__(self, index: int, category: str):
        super().__init__(f"constraint {index} ({category}) is not satisfied")
        self.index = index
        self.category = category


class LC:
    __slots__ = ("terms", "value")

    def __init__(self, terms: Coeffs | None = None, value: int | None = 0):
        self.terms = terms if terms is not None else {}
        self.value = value

    @staticmethod
    def const(c: int) -> "LC":
        c %= P
        return LC({0: c} if c else {}, c)

    @staticmethod
    def lift(x: "LCLike") -> "LC":
        return x if isinstance(x, LC) else LC.const(x)

    def __add__(self, other: "LCLike") -> "LC":
        other = LC.lift(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            s = (terms.get(k, 0) + v) % P
            if s:
                terms[k] = s
            else:
                terms.pop(k, None)
        value = None if self.value is None or other.value is None else (self.value + other.value) % P
        return LC(terms, value)

    __radd__ = __add__

    def __neg__(self) -> "LC":
        return LC({k: (-v) % P for k, v in self.terms.items()},
                  None if self.value is None else (-self.value) % P)

    def __sub__(self, other: "LCLike") -> "LC":
        return self + (-LC.lift(other))

    def __rsub__(self, other: "LCLike") -> "LC":
        return LC.lift(other) - self

    def scale(self, c: int) -> "LC":
        c %= P
        if c == 0:
            return LC()
        return LC({k: v * c % P for k, v in self.terms.items()},
                  None if self.value is None else self.value * c % P)

    def __mul__(self, c: int) -> "LC":
        if isinstance(c, LC):
            raise TypeError("multiplying two LCs needs a constraint; use cs.mul")
        return self.scale(c)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"LC({self.terms}, value={self.value})"


LCLike = Union[LC, int]


def _eval(terms: Coeffs, w: list) -> int:
    return sum(c * w[i] for i, c in terms.items()) % P


class ConstraintSystem:
    def __init__(self, with_witness: bool = True):
        self.with_witness = with_witness
        self.values: list[int | None] = [1]
        self.num_inputs = 0
        self.constraints: list[tuple[Coeffs, Coeffs, Coeffs]] = []
        self.categories: list[str] = []
        self._category = "main"
        self._private_started = False

    # -- allocation -------------------------------------------------------

    @property
    def one(self) -> LC:
        return LC({0: 1}, 1)

    @property
    def num_vars(self) -> int:
        return len(self.values)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def _value(self, v):
        if not self.with_witness:
            return None
        if v is None:
            raise MissingWitnessError("witness mode requires a value")
        return v % P

    def alloc_input(self, value: int | None = None) -> LC:
        if self._private_started:
            raise RuntimeError("public inputs must be allocated before private variables")
        self.values.append(self._value(value))
        self.num_inputs += 1
        i = len(self.values) - 1
        return LC({i: 1}, self.values[i])

    def alloc(self, value: int | None = None) -> LC:
        self._private_started = True
        self.values.append(self._value(value))
        i = len(self.values) - 1
        return LC({i: 1}, self.values[i])

    # -- constraints ------------------------------------------------------

    @contextlib.contextmanager
    def section(self, name: str):
        prev, self._category = self._category, name
        try:
            yield
        finally:
            self._category = prev

    def enforce(self, a: LCLike, b: LCLike, c: LCLike) -> None:
        a, b, c = LC.lift(a), LC.lift(b), LC.lift(c)
        self.constraints.append((a.terms, b.terms, c.terms))
        self.categories.append(self._category)

    def enforce_equal(self, a: LCLike, b: LCLike) -> None:
        self.enforce(LC.lift(a) - b, 1, 0)

    def mul(self, a: LCLike, b: LCLike) -> LC:
        a, b = LC.lift(a), LC.lift(b)
        val = None if a.value is None or b.value is None else a.value * b.value
        out = self.alloc(val)
        self.enforce(a, b, out)
        return out

    def div(self, num: LCLike, den: LCLike) -> LC:
        """Allocate q with q * den = num (den must be nonzero for honest witnesses)."""
        num, den = LC.lift(num), LC.lift(den)
        val = None
        if num.value is not None and den.value is not None:
            val = num.value * pow(den.value, -1, P) if den.value else 0
        out = self.alloc(val)
        self.enforce(out, den, num)
        return out

    # -- witness ----------------------------------------------------------

    @property
    def assignment(self) -> list[int]:
        if not self.with_witness:
            raise MissingWitnessError("constraint system has no witness")
        return list(self.values)  # type: ignore[arg-type]

    @property
    def public_inputs(self) -> list[int]:
        return self.assignment[1:1 + self.num_inputs]

    def first_unsatisfied(self, assignment: list[int] | None = None) -> int | None:
        w = assignment if assignment is not None else self.assignment
        for idx, (a, b, c) in enumerate(self.constraints):
            if _eval(a, w) * _eval(b, w) % P != _eval(c, w):
                return idx
        return None

    def is_satisfied(self, assignment: list[int] | None = None) -> bool:
        return self.first_unsatisfied(assignment) is None

    def check(self, assignment: list[int] | None = None) -> None:
        idx = self.first_unsatisfied(assignment)
        if idx is not None:
            raise UnsatisfiedError(idx, self.categories[idx])

    def category_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.categories:
            out[c] = out.get(c, 0) + 1
        return out

    def shape(self) -> "ConstraintSystem":
        """Copy without the witness."""
        cs = ConstraintSystem(with_witness=False)
        cs.values = [None] * self.num_vars
        cs.values[0] = 1
        cs.num_inputs = self.num_inputs
        cs.constraints = self.constraints
        cs.categories = self.categories
        return cs

    def same_shape(self, other: "ConstraintSystem") -> bool:
        return (self.num_inputs == other.num_inputs and self.num_vars == other.num_vars
                and self.constraints == other.constraints)

    # -- export -----------------------------------------------------------

    def to_json(self) -> str:
        """Export: {"num_variables", "num_public", "constraints": [[A, B, C], ...]}

        Each of A, B, C is a list of [variable_index, "0x<coefficient>"] pairs.
        """
        def enc(t: Coeffs):
            return [[i, hex(c)] for i, c in sorted(t.items())]

        return json.dumps({
            "field_modulus": hex(P),
            "num_variables": self.num_vars,
            "num_public": self.num_inputs,
            "constraints": [[enc(a), enc(b), enc(c)] for a, b, c in self.constraints],
        })

    @classmethod
    def from_json(cls, text: str) -> "ConstraintSystem":
        doc = json.loads(text)
        cs = cls(with_witness=False)
        cs.values = [None] * doc["num_variables"]
        cs.values[0] = 1
        cs.num_inputs = doc["num_public"]

        def dec(t) -> Coeffs:
            return {int(i): int(c, 16) for i, c in t}

        for a, b, c in doc["constraints"]:
            cs.constraints.append((dec(a), dec(b), dec(c)))
            cs.categories.append("main")
        return cs


def lc_sum(items: Iterable[LC]) -> LC:
    acc = LC()
    for x in items:
        acc = acc + x
    return acc
