"""M24 class data, the 26x26 character table, and exact character decomposition.

The class records and the character table ship as a checked-in JSON
file of exact integers; the loader re-validates every structural
invariant (cycle-shape balance, level factorization, conjugate column
pairing, invertibility) each time the data is first read.

Irrational character values are a + b*e_n with e_n = (-1 + sqrt(-n))/2
for n in {7, 15, 23}; no single value ever mixes two radicals, which is
what lets :func:`decompose` reduce the 26x26 solve to exact rational
Gaussian elimination (conjugate class pairs are replaced by their sum
and their sqrt(-n)-part).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

CLASS_NAMES = (
    "1A", "2A", "2B", "3A", "3B", "4A", "4B", "4C", "5A", "6A", "6B",
    "7A", "7B", "8A", "10A", "11A", "12A", "12B", "14A", "14B",
    "15A", "15B", "21A", "21B", "23A", "23B",
)

# Conjugate class pairs (identical Table rows, complex-conjugate characters).
PAIRED_CLASSES = (("7A", "7B"), ("14A", "14B"), ("15A", "15B"),
                  ("21A", "21B"), ("23A", "23B"))


class DecompositionError(ValueError):
    """A coefficient vector did not decompose into valid multiplicities."""


@dataclass(frozen=True)
class TTildeTerm:
    """One summand of a weight-two completion form: coeff times a generator.

    kind is "lambda" (the weight-two form indexed by m built from
    divisor sums), "eta" (an eta quotient given by scale -> exponent),
    or "cusp23" (one of the two level-23 newforms, which = 1 or 2).
    """

    coeff: Fraction
    kind: str
    m: int = 0
    quotient: tuple[tuple[int, int], ...] = ()
    which: int = 0


@dataclass(frozen=True)
class ClassRecord:
    """One conjugacy class: cycle shape and the attached modular data."""

    name: str
    shape: tuple[tuple[int, int], ...]  # (cycle length, multiplicity)
    k: int          # half the total number of cycles
    n: int          # longest cycle = order of the class
    level: int      # n * h
    h: int          # shortest cycle
    chi: int        # fixed points of the permutation action
    ttilde: tuple[TTildeTerm, ...]
    ttilde_alt: tuple[TTildeTerm, ...] | None = None


@dataclass(frozen=True)
class AlgebraicValue:
    """a + b*e_rad with e_rad = (-1 + sqrt(-rad))/2; rad = 0 means rational."""

    a: Fraction
    b: Fraction
    rad: int

    def conjugate(self) -> "AlgebraicValue":
        if self.rad == 0:
            return self
        return AlgebraicValue(self.a - self.b, -self.b, self.rad)

    @property
    def rational_pair_sum(self) -> Fraction:
        """self + conjugate(self) = 2a - b."""
        return 2 * self.a - self.b

    def __complex__(self) -> complex:
        if self.rad == 0:
            return complex(self.a)
        e = (-1 + 1j * self.rad ** 0.5) / 2
        return complex(self.a) + complex(self.b) * e


def _parse_entry(raw) -> AlgebraicValue:
    if isinstance(raw, int):
        return AlgebraicValue(Fraction(raw), Fraction(0), 0)
    a, b, rad = raw
    return AlgebraicValue(Fraction(a), Fraction(b), int(rad))


def _parse_term(raw) -> TTildeTerm:
    coeff = Fraction(raw["coeff"][0], raw["coeff"][1])
    kind = raw["kind"]
    if kind == "lambda":
        return TTildeTerm(coeff, kind, m=raw["m"])
    if kind == "eta":
        return TTildeTerm(coeff, kind, quotient=tuple((s, e) for s, e in raw["quotient"]))
    if kind == "cusp23":
        return TTildeTerm(coeff, kind, which=raw["which"])
    raise ValueError(f"unknown completion-form term kind {kind!r}")


class CharTable:
    """The 26 irreducible characters evaluated on the 26 classes."""

    def __init__(self, rows: list[list[AlgebraicValue]]):
        self.rows = rows
        self.classes = CLASS_NAMES
        self._col = {name: j for j, name in enumerate(CLASS_NAMES)}

    def value(self, i: int, class_name: str) -> AlgebraicValue:
        """chi_i(g) for 1-based irreducible index i."""
        return self.rows[i - 1][self._col[class_name]]

    def dimension(self, i: int) -> int:
        return int(self.rows[i - 1][0].a)

    def column(self, class_name: str) -> list[AlgebraicValue]:
        j = self._col[class_name]
        return [row[j] for row in self.rows]


def _validate(records: list[ClassRecord], table: CharTable) -> None:
    for r in records:
        if sum(i * l for i, l in r.shape) != 24:
            raise ValueError(f"{r.name}: cycle shape does not cover 24 points")
        if r.level != r.n * r.h or r.n % r.h or 24 % r.h:
            raise ValueError(f"{r.name}: inconsistent (n, h, level)")
        mult = sorted(i for i, l in r.shape for _ in range(l))
        if mult != sorted(r.level // i for i in mult):
            raise ValueError(f"{r.name}: cycle shape is not balanced")
        if r.chi != dict(r.shape).get(1, 0):
            raise ValueError(f"{r.name}: fixed-point count mismatch")
        if 2 * r.k != sum(l for _, l in r.shape):
            raise ValueError(f"{r.name}: weight is not half the cycle count")
    if [r.name for r in records] != list(CLASS_NAMES):
        raise ValueError("class list out of order")
    if any(len(row) != 26 for row in table.rows) or len(table.rows) != 26:
        raise ValueError("character table is not 26x26")
    if any(v.a != 1 or v.b != 0 for v in table.rows[0]):
        raise ValueError("first character row must be identically 1")
    if any(table.dimension(i) <= 0 for i in range(1, 27)):
        raise ValueError("irreducible dimensions must be positive")
    for g, gbar in PAIRED_CLASSES:
        cg, cgbar = table.column(g), table.column(gbar)
        if any(x.conjugate() != y for x, y in zip(cg, cgbar)):
            raise ValueError(f"columns {g}/{gbar} are not complex conjugate")
        rads = {x.rad for x in cg if x.rad}
        if len(rads) > 1:
            raise ValueError(f"column {g} mixes radicals {rads}")
    for name in CLASS_NAMES:
        if name not in {g for p in PAIRED_CLASSES for g in p}:
            if any(x.rad for x in table.column(name)):
                raise ValueError(f"unpaired column {name} has irrational entries")
    # Invertibility: the rationalized system must have a pivot in every column.
    _invert_rational(_rationalized_system(table)[0])


@lru_cache(maxsize=1)
def _load():
    with resources.files("m24rad").joinpath("data/m24.json").open() as fh:
        raw = json.load(fh)
    records = []
    for c in raw["classes"]:
        records.append(
            ClassRecord(
                name=c["name"],
                shape=tuple((i, l) for i, l in c["shape"]),
                k=c["k"], n=c["n"], level=c["level"], h=c["h"], chi=c["chi"],
                ttilde=tuple(_parse_term(t) for t in c["ttilde"]),
                ttilde_alt=(
                    tuple(_parse_term(t) for t in c["ttilde_alt"])
                    if "ttilde_alt" in c else None
                ),
            )
        )
    table = CharTable([[_parse_entry(x) for x in row] for row in raw["character_table"]])
    _validate(records, table)
    return tuple(records), table


def class_records() -> tuple[ClassRecord, ...]:
    return _load()[0]


def class_data(name: str) -> ClassRecord:
    for r in _load()[0]:
        if r.name == name:
            return r
    raise KeyError(f"unknown class label {name!r}")


def character_table() -> CharTable:
    return _load()[1]


# ----------------------------------------------------------------------
# exact decomposition into irreducible multiplicities

def _rationalized_system(table: CharTable) -> tuple[list[list[Fraction]], list[str]]:
    """26 rational equations equivalent to sum_i m_i chi_i(g) = v(g).

    Unpaired classes contribute their (rational) row directly; each
    conjugate pair contributes the sum row (2a - b per entry) and the
    sqrt(-n)-coefficient row (b per entry, equated to 0 for inputs that
    respect the pairing).
    """
    paired = {g for p in PAIRED_CLASSES for g in p}
    rows: list[list[Fraction]] = []
    tags: list[str] = []
    for name in CLASS_NAMES:
        if name in paired:
            continue
        rows.append([v.a for v in table.column(name)])
        tags.append(f"value:{name}")
    for g, gbar in PAIRED_CLASSES:
        col = table.column(g)
        rows.append([v.rational_pair_sum for v in col])
        tags.append(f"pairsum:{g}+{gbar}")
        rows.append([v.b for v in col])
        tags.append(f"radical:{g}-{gbar}")
    return rows, tags


def _invert_rational(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("character table is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=1)
def _rational_inverse() -> list[list[Fraction]]:
    rows, _ = _rationalized_system(character_table())
    return _invert_rational(rows)


def decompose(coeffs) -> list[Fraction]:
    """Solve sum_i m_i chi_i(g) = coeff(g) exactly; returns the 26 m_i.

    `coeffs` is a mapping class name -> exact rational, or a sequence in
    class order.  Entries at conjugate class pairs must be equal (the
    input is required to respect the pairing; anything else cannot come
    from a character of a rational representation row of the tables).
    """
    if not isinstance(coeffs, dict):
        if len(coeffs) != 26:
            raise ValueError("need 26 coefficients")
        coeffs = dict(zip(CLASS_NAMES, coeffs))
    vals = {name: Fraction(coeffs[name]) for name in CLASS_NAMES}
    for g, gbar in PAIRED_CLASSES:
        if vals[g] != vals[gbar]:
            raise DecompositionError(
                f"paired classes {g}/{gbar} carry different values"
            )
    paired = {g for p in PAIRED_CLASSES for g in p}
    rhs = [vals[name] for name in CLASS_NAMES if name not in paired]
    for g, gbar in PAIRED_CLASSES:
        rhs.append(vals[g] + vals[gbar])
        rhs.append(Fraction(0))
    inv = _rational_inverse()
    mult = [sum(inv[i][j] * rhs[j] for j in range(26)) for i in range(26)]
    # exact back-substitution guard against any data or elimination slip
    rows, _ = _rationalized_system(character_table())
    for row, want in zip(rows, rhs):
        got = sum(c * m for c, m in zip(row, mult))
        if got != want:
            raise DecompositionError("exact residual check failed")
    return mult


def integral_multiplicities(coeffs, require_nonnegative: bool = False) -> list[int]:
    """Decompose and insist on integer (optionally nonnegative) multiplicities."""
    mult = decompose(coeffs)
    out = []
    for i, m in enumerate(mult, start=1):
        if m.denominator != 1:
            raise DecompositionError(f"multiplicity of irreducible {i} is {m}")
        if require_nonnegative and m < 0:
            raise DecompositionError(f"multiplicity of irreducible {i} is negative: {m}")
        out.append(int(m))
    return out


def eta_mckay_series(cls, order):
    """1/eta_g as an exact series (delegates to the q-series layer)."""
    from . import forms

    record = cls if isinstance(cls, ClassRecord) else class_data(cls)
    return forms.inverse_eta_series(record, order)
