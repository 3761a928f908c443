r"""Curve systems, twist words, and their transition matrices.

A curve system is two disjoint multicurves, family ``C`` and family ``D``,
together with the symmetric matrix of pairwise geometric intersection
numbers.  A twist word is a sequence of Dehn twists, positive powers on
``C``-curves and negative powers on ``D``-curves.  Such a word acts on
weighted curve coordinates by the product of the elementary matrices

    B_k = I + E_k . Sigma

taken in word order, where ``E_k`` is the one-hot diagonal selector of the
twisted curve; the exponent's absolute value repeats the factor.  Whether
the word is pseudo-Anosov depends on the system filling the surface, which
the data cannot certify; callers assert it via ``filling_asserted`` and
validation reports when the assertion is missing.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .digraph import is_irreducible, strongly_connected
from .errors import ValidationFailedError
from .intmatrix import IntMatrix, mat_mul
from .perron import PerronData, perron_eigenpair

FAMILY_POSITIVE = "C"
FAMILY_NEGATIVE = "D"


@dataclass(frozen=True)
class CurveSystem:
    """Labelled curves split into the two twist families.

    ``sigma`` is the full intersection matrix in label order; curves in the
    same family never intersect (each family is a multicurve), so the
    C-by-C and D-by-D blocks must vanish.
    """

    labels: tuple[str, ...]
    families: tuple[str, ...]
    sigma: IntMatrix
    filling_asserted: bool = False

    def __post_init__(self):
        if len(self.labels) != len(self.families):
            raise ValueError("labels and families differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate curve label")
        for fam in self.families:
            if fam not in (FAMILY_POSITIVE, FAMILY_NEGATIVE):
                raise ValueError(f"unknown family {fam!r}")
        if self.sigma.rows != len(self.labels) or not self.sigma.is_square:
            raise ValueError("sigma shape does not match the curve count")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown curve label {label!r}") from None


@dataclass(frozen=True)
class TwistWord:
    """Ordered twist letters ``(curve index, exponent)``, exponents nonzero."""

    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for k, delta in self.letters:
            if delta == 0:
                raise ValueError(f"zero exponent on curve index {k}")

    def reversed(self) -> "TwistWord":
        return TwistWord(tuple(reversed(self.letters)))

    def rotated(self, by: int) -> "TwistWord":
        n = len(self.letters)
        by %= n
        return TwistWord(self.letters[by:] + self.letters[:by])


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def codes(self) -> tuple[str, ...]:
        return tuple(issue.code for issue in self.issues)


def _system_issues(system: CurveSystem) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []
    sigma = system.sigma
    n = system.size
    if sigma != sigma.transpose():
        issues.append(ValidationIssue("symmetry", "sigma is not symmetric"))
    for i in range(n):
        if sigma[i, i] != 0:
            issues.append(ValidationIssue(
                "diagonal", f"curve {system.labels[i]} intersects itself"))
    for i in range(n):
        for j in range(i + 1, n):
            if system.families[i] == system.families[j] and sigma[i, j] != 0:
                issues.append(ValidationIssue(
                    "family_block",
                    f"curves {system.labels[i]} and {system.labels[j]} are in "
                    f"family {system.families[i]} but intersect"))
    if not strongly_connected(sigma + IntMatrix.identity(n)):
        # Self-loops make the symmetric support graph's connectivity equal
        # strong connectivity of the padded matrix.
        issues.append(ValidationIssue(
            "connectivity", "the intersection graph is not connected"))
    if not system.filling_asserted:
        issues.append(ValidationIssue(
            "filling", "filling condition not asserted by the data"))
    return issues


def validate(system: CurveSystem, word: TwistWord) -> ValidationReport:
    """Collect every violated twist-word hypothesis; empty report means the
    hypotheses hold up to the user-asserted filling condition."""
    issues = _system_issues(system)
    seen: set[int] = set()
    for k, delta in word.letters:
        if not 0 <= k < system.size:
            issues.append(ValidationIssue(
                "index_range", f"letter references curve index {k}"))
            continue
        seen.add(k)
        fam = system.families[k]
        if fam == FAMILY_POSITIVE and delta < 0:
            issues.append(ValidationIssue(
                "sign", f"curve {system.labels[k]} is in family C but is "
                        f"twisted with exponent {delta}"))
        if fam == FAMILY_NEGATIVE and delta > 0:
            issues.append(ValidationIssue(
                "sign", f"curve {system.labels[k]} is in family D but is "
                        f"twisted with exponent {delta}"))
    missing = [system.labels[i] for i in range(system.size) if i not in seen]
    if missing:
        issues.append(ValidationIssue(
            "coverage", "curves never twisted: " + ", ".join(missing)))
    return ValidationReport(tuple(issues))


def penner_matrix(system: CurveSystem, word: TwistWord,
                  check: bool = True) -> IntMatrix:
    """Product of ``(I + E_k Sigma)^{|delta_k|}`` in word order."""
    if check:
        report = validate(system, word)
        if not report.ok:
            raise ValidationFailedError(report)
    result = IntMatrix.identity(system.size)
    for k, delta in word.letters:
        result = mat_mul(result, _elementary(system.sigma, k) ** abs(delta))
    return result


def _elementary(sigma: IntMatrix, k: int) -> IntMatrix:
    """I + E_k Sigma: the identity with row k of sigma added to row k."""
    grid = [list(row) for row in IntMatrix.identity(sigma.rows).entries]
    for j, x in enumerate(sigma.row(k)):
        grid[k][j] += x
    return IntMatrix(grid)


def stretch_factor(system: CurveSystem, word: TwistWord,
                   tol: float = 1e-12) -> PerronData:
    """Perron data of the word's transition matrix.

    The eigenvalue is the factor by which the word stretches its expanding
    measured foliation; stretch factors of twist words on filling systems
    exceed 1.
    """
    m = penner_matrix(system, word)
    data = perron_eigenpair(m, tol=tol)
    if data.lam <= 1.0:
        raise ValueError(
            f"stretch factor {data.lam} is not > 1; the word does not "
            "stretch (is the system really filling?)")
    return data


# -- generator words and lift parity ---------------------------------------


class GeneratorKind(enum.Enum):
    TWIST = "twist"
    BOUNDING_PAIR = "bp"
    INVOLUTION = "involution"


@dataclass(frozen=True)
class Generator:
    """One letter of a mapping-class word in the liftable generating set."""

    kind: GeneratorKind
    label: str | None = None

    def __post_init__(self):
        needs_label = self.kind is not GeneratorKind.INVOLUTION
        if needs_label and not self.label:
            raise ValueError(f"{self.kind.value} generator needs a curve label")
        if not needs_label and self.label:
            raise ValueError("involution generator takes no label")

    def render(self) -> str:
        if self.kind is GeneratorKind.INVOLUTION:
            return "involution"
        return f"{self.kind.value}({self.label})"

    _PATTERN = re.compile(r"^(twist|bp)\(([^()\s]+)\)$")

    @classmethod
    def parse(cls, text: str) -> "Generator":
        text = text.strip()
        if text == "involution":
            return cls(GeneratorKind.INVOLUTION)
        m = cls._PATTERN.match(text)
        if not m:
            raise ValueError(f"cannot parse generator {text!r}")
        return cls(GeneratorKind(m.group(1)), m.group(2))


@dataclass(frozen=True)
class GeneratorWord:
    letters: tuple[Generator, ...]

    @classmethod
    def parse(cls, text: str) -> "GeneratorWord":
        parts = text.split()
        return cls(tuple(Generator.parse(p) for p in parts))

    def render(self) -> str:
        return " ".join(g.render() for g in self.letters)

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.letters + other.letters)


class CommutationType(enum.Enum):
    """How the canonical cover lift interacts with the handle translation."""

    COMMUTES = "commutes"
    ANTI_COMMUTES = "anti-commutes"

    def combined(self, other: "CommutationType") -> "CommutationType":
        if self is other:
            return CommutationType.COMMUTES
        return CommutationType.ANTI_COMMUTES


def commutation_type(word: GeneratorWord) -> CommutationType:
    """Parity of involution letters decides the lift's commutation type.

    Twists and bounding-pair maps in the liftable generating set admit lifts
    commuting with the handle translation; each involution letter conjugates
    the translation to its inverse, so only the count mod 2 matters.  The
    map word -> type is therefore a homomorphism onto Z/2.
    """
    flips = sum(1 for g in word.letters
                if g.kind is GeneratorKind.INVOLUTION)
    if flips % 2 == 0:
        return CommutationType.COMMUTES
    return CommutationType.ANTI_COMMUTES


# -- the stock chain-plus-detour family -------------------------------------


def preset_example_family(
    g: int,
    beta_subset: Iterable[int] = (),
    beta_rows: Mapping[int, Mapping[str, int]] | None = None,
    a1_in_negative: bool = False,
) -> tuple[CurveSystem, TwistWord]:
    """The standard genus-``g`` chain system with optional detour curves.

    Family C holds the chain curves ``c_1 .. c_{g-1}``, the end curve
    ``a_g``, and any requested detour curves ``beta_i`` (``1 <= i <= g-2``);
    family D holds ``b_2 .. b_g`` plus optionally ``a_1``.  Chain
    intersections are ``i(c_i, b_i) = i(c_i, b_{i+1}) = 1`` (pairs naming an
    absent curve are skipped) and ``i(a_g, b_g) = 1``.  Detour-curve rows
    are not derivable from the combinatorics and must be supplied by the
    caller via ``beta_rows`` (label -> count, symmetric extension); the
    bundled corpus ships a derived row set with its derivation notes.

    The default word twists every curve once: family D letters first with
    exponent -1 in label order, then family C letters with exponent +1.
    """
    if g < 3:
        raise ValueError("the chain family needs genus >= 3")
    betas = sorted(set(beta_subset))
    if any(i < 1 or i > g - 2 for i in betas):
        raise ValueError(f"detour indices must lie in 1..{g - 2}")

    pos = [f"c{i}" for i in range(1, g)] + [f"a{g}"]
    pos += [f"beta{i}" for i in betas]
    neg = (["a1"] if a1_in_negative else []) + [f"b{i}" for i in range(2, g + 1)]
    labels = tuple(pos + neg)
    families = tuple([FAMILY_POSITIVE] * len(pos) + [FAMILY_NEGATIVE] * len(neg))
    at = {lab: i for i, lab in enumerate(labels)}

    n = len(labels)
    grid = [[0] * n for _ in range(n)]

    def put(a: str, b: str, value: int):
        if a in at and b in at:
            grid[at[a]][at[b]] = value
            grid[at[b]][at[a]] = value

    for i in range(1, g):
        put(f"c{i}", f"b{i}", 1)
        put(f"c{i}", f"b{i + 1}", 1)
    put(f"a{g}", f"b{g}", 1)

    beta_rows = dict(beta_rows or {})
    for i in betas:
        if i not in beta_rows:
            raise ValueError(f"missing intersection row for beta{i}")
        row = dict(beta_rows[i])
        for other, count in row.items():
            if other not in at:
                raise ValueError(
                    f"beta{i} row references unknown curve {other!r}")
            prior = grid[at[f"beta{i}"]][at[other]]
            if prior and prior != count:
                raise ValueError(
                    f"asymmetric extension: beta{i}/{other} given twice "
                    f"with different counts")
            put(f"beta{i}", other, count)

    sigma = IntMatrix(grid)
    system = CurveSystem(labels=labels, families=families, sigma=sigma,
                         filling_asserted=True)
    word = TwistWord(
        tuple((at[lab], -1) for lab in neg) + tuple((at[lab], +1) for lab in pos)
    )
    return system, word
