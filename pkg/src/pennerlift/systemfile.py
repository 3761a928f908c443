"""Plain-text and JSON descriptions of curve systems and chains.

The text form is line-oriented: ``key: value`` pairs at column zero, with
integer grids as indented continuation rows.  ``#`` starts a full-line
comment.  A file whose first non-blank character is ``{`` is read as the
equivalent JSON object instead.  The grammar is documented in
``docs/system-format.md``; ``parse(render(f))`` is the identity on every
well-formed description.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields as dataclass_fields

from .errors import ParseError
from .intmatrix import IntMatrix
from .lifting import LiftedCurveSystem, ShiftChain
from .penner import CurveSystem, GeneratorWord, TwistWord

MODES = ("penner", "lifted-penner", "raw-chain")

_GRID_KEYS = ("sigma", "sigma_within", "sigma_cross",
              "a_minus", "a_zero", "a_plus")
_SCALAR_KEYS = ("name", "mode", "labels", "families", "word",
                "filling_asserted", "generator_word")

# mode -> (required, optional); name/mode are implicit everywhere
_FIELD_SETS = {
    "penner": (("labels", "families", "sigma", "word", "filling_asserted"),
               ("generator_word",)),
    "lifted-penner": (("labels", "families", "sigma", "sigma_within",
                       "sigma_cross", "word", "filling_asserted"),
                      ("generator_word",)),
    "raw-chain": (("a_minus", "a_zero", "a_plus"), ("generator_word",)),
}


@dataclass(frozen=True)
class SystemFile:
    """Parsed description; exactly the fields its mode allows are set."""

    name: str
    mode: str
    labels: tuple[str, ...] | None = None
    families: tuple[str, ...] | None = None
    sigma: IntMatrix | None = None
    sigma_within: IntMatrix | None = None
    sigma_cross: IntMatrix | None = None
    word: tuple[tuple[str, int], ...] | None = None
    filling_asserted: bool | None = None
    a_minus: IntMatrix | None = None
    a_zero: IntMatrix | None = None
    a_plus: IntMatrix | None = None
    generator_word: str | None = None

    def curve_system(self) -> CurveSystem:
        return CurveSystem(labels=self.labels, families=self.families,
                           sigma=self.sigma,
                           filling_asserted=self.filling_asserted)

    def twist_word(self) -> TwistWord:
        index = {lab: k for k, lab in enumerate(self.labels)}
        return TwistWord(tuple((index[lab], exp) for lab, exp in self.word))

    def lifted_system(self) -> LiftedCurveSystem:
        return LiftedCurveSystem(base=self.curve_system(),
                                 sigma_within=self.sigma_within,
                                 sigma_cross=self.sigma_cross)

    def shift_chain(self) -> ShiftChain:
        return ShiftChain(a_minus=self.a_minus, a_zero=self.a_zero,
                          a_plus=self.a_plus)

    def parsed_generator_word(self) -> GeneratorWord | None:
        if self.generator_word is None:
            return None
        return GeneratorWord.parse(self.generator_word)

    def render(self) -> str:
        """Canonical text form; the parse of the result equals self."""
        out = [f"name: {self.name}", f"mode: {self.mode}"]
        if self.labels is not None:
            out.append("labels: " + " ".join(self.labels))
        if self.families is not None:
            out.append("families: " + " ".join(self.families))
        for key in _GRID_KEYS:
            grid = getattr(self, key)
            if grid is not None:
                out.append(f"{key}:")
                for row in grid.entries:
                    out.append("  " + " ".join(str(x) for x in row))
        if self.word is not None:
            out.append("word: " + " ".join(
                f"{lab}^{exp:+d}" for lab, exp in self.word))
        if self.filling_asserted is not None:
            out.append("filling_asserted: "
                       + ("true" if self.filling_asserted else "false"))
        if self.generator_word is not None:
            out.append(f"generator_word: {self.generator_word}")
        return "\n".join(out) + "\n"

    def to_json_obj(self) -> dict:
        obj: dict = {"name": self.name, "mode": self.mode}
        if self.labels is not None:
            obj["labels"] = list(self.labels)
        if self.families is not None:
            obj["families"] = list(self.families)
        for key in _GRID_KEYS:
            grid = getattr(self, key)
            if grid is not None:
                obj[key] = grid.to_lists()
        if self.word is not None:
            obj["word"] = [[lab, exp] for lab, exp in self.word]
        if self.filling_asserted is not None:
            obj["filling_asserted"] = self.filling_asserted
        if self.generator_word is not None:
            obj["generator_word"] = self.generator_word
        return obj

    def render_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2) + "\n"


def parse(text: str) -> SystemFile:
    """Parse a text or JSON description; raise ParseError with position."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _from_raw(_read_json(text))
    return _from_raw(_read_text(text))


def parse_file(path) -> SystemFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


# -- text reader --------------------------------------------------------------


def _read_text(text: str) -> dict:
    """Text form -> raw field dict with recorded line numbers."""
    raw: dict = {}
    lines_of: dict = {}
    current_grid: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line[0] in " \t":
            if current_grid is None:
                raise ParseError("indented row outside a grid", lineno, 1)
            raw[current_grid].append(_grid_row(line, lineno))
            continue
        current_grid = None
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        column = 1
        if key not in _SCALAR_KEYS and key not in _GRID_KEYS:
            raise ParseError(f"unknown field {key!r}", lineno, column)
        if key in raw:
            raise ParseError(f"duplicate field {key!r}", lineno, column)
        lines_of[key] = lineno
        if key in _GRID_KEYS:
            if value:
                raise ParseError(
                    f"grid field {key!r} takes indented rows, not an inline "
                    "value", lineno, len(key) + 2)
            raw[key] = []
            current_grid = key
        else:
            if not value:
                raise ParseError(f"field {key!r} has no value",
                                 lineno, len(key) + 2)
            raw[key] = value
    raw["__lines__"] = lines_of
    return raw


def _grid_row(line: str, lineno: int) -> list[int]:
    row = []
    for tok in line.split():
        try:
            row.append(int(tok))
        except ValueError:
            raise ParseError(f"grid entry {tok!r} is not an integer",
                             lineno, line.index(tok) + 1) from None
    if not row:
        raise ParseError("empty grid row", lineno, 1)
    return row


# -- json reader --------------------------------------------------------------


def _read_json(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    raw: dict = {"__lines__": {}}
    for key, value in obj.items():
        if key not in _SCALAR_KEYS and key not in _GRID_KEYS:
            raise ParseError(f"unknown field {key!r}")
        raw[key] = _json_field(key, value)
    return raw


def _json_field(key: str, value):
    if key in _GRID_KEYS:
        if (not isinstance(value, list)
                or not all(isinstance(r, list) for r in value)):
            raise ParseError(f"field {key!r} must be a grid (list of lists)")
        return value
    if key in ("labels", "families"):
        if (not isinstance(value, list)
                or not all(isinstance(s, str) for s in value)):
            raise ParseError(f"field {key!r} must be a list of strings")
        return " ".join(value)
    if key == "word":
        if not isinstance(value, list):
            raise ParseError("field 'word' must be a list of [label, exp]")
        toks = []
        for item in value:
            if (not isinstance(item, list) or len(item) != 2
                    or not isinstance(item[0], str)
                    or not isinstance(item[1], int)):
                raise ParseError("word letters must be [label, exponent]")
            toks.append(f"{item[0]}^{item[1]:+d}")
        return " ".join(toks)
    if key == "filling_asserted":
        if not isinstance(value, bool):
            raise ParseError("field 'filling_asserted' must be a boolean")
        return "true" if value else "false"
    if not isinstance(value, str):
        raise ParseError(f"field {key!r} must be a string")
    return value


# -- shared semantic pass ------------------------------------------------------


def _from_raw(raw: dict) -> SystemFile:
    lines_of = raw.pop("__lines__", {})

    def where(key: str) -> int:
        return lines_of.get(key, 0)

    for key in ("name", "mode"):
        if key not in raw:
            raise ParseError(f"missing required field {key!r}")
    mode = raw["mode"]
    if mode not in MODES:
        raise ParseError(
            f"unknown mode {mode!r}; expected one of {', '.join(MODES)}",
            where("mode"))
    required, optional = _FIELD_SETS[mode]
    allowed = set(required) | set(optional) | {"name", "mode"}
    for key in raw:
        if key not in allowed:
            raise ParseError(
                f"field {key!r} is not allowed in mode {mode!r}", where(key))
    for key in required:
        if key not in raw:
            raise ParseError(
                f"mode {mode!r} requires field {key!r}")

    values: dict = {"name": raw["name"], "mode": mode}

    if "labels" in raw:
        labels = tuple(raw["labels"].split())
        if len(set(labels)) != len(labels):
            raise ParseError("duplicate curve label", where("labels"))
        values["labels"] = labels
        families = tuple(raw["families"].split())
        if len(families) != len(labels):
            raise ParseError(
                f"{len(families)} families for {len(labels)} labels",
                where("families"))
        values["families"] = families

    for key in _GRID_KEYS:
        if key not in raw:
            continue
        rows = raw[key]
        if not rows:
            raise ParseError(f"grid {key!r} is empty", where(key))
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ParseError(f"grid {key!r} has ragged rows", where(key))
        try:
            values[key] = IntMatrix(rows)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"grid {key!r}: {exc}", where(key)) from None

    if "word" in raw:
        values["word"] = _parse_word(raw["word"], values["labels"],
                                     where("word"))
    if "filling_asserted" in raw:
        flag = raw["filling_asserted"]
        if flag not in ("true", "false"):
            raise ParseError("filling_asserted must be 'true' or 'false'",
                             where("filling_asserted"))
        values["filling_asserted"] = flag == "true"
    if "generator_word" in raw:
        try:
            GeneratorWord.parse(raw["generator_word"])
        except ValueError as exc:
            raise ParseError(str(exc), where("generator_word")) from None
        values["generator_word"] = raw["generator_word"]

    _check_shapes(values, where)
    return SystemFile(**values)


def _parse_word(text: str, labels: tuple[str, ...],
                lineno: int) -> tuple[tuple[str, int], ...]:
    letters = []
    for tok in text.split():
        label, sep, exp_text = tok.partition("^")
        if not sep or not label or not exp_text:
            raise ParseError(
                f"word letter {tok!r} is not of the form label^exponent",
                lineno)
        try:
            exp = int(exp_text)
        except ValueError:
            raise ParseError(f"exponent {exp_text!r} is not an integer",
                             lineno) from None
        if exp == 0:
            raise ParseError(f"letter {tok!r} has zero exponent", lineno)
        if label not in labels:
            raise ParseError(f"word references undeclared label {label!r}",
                             lineno)
        letters.append((label, exp))
    if not letters:
        raise ParseError("word has no letters", lineno)
    return tuple(letters)


def _check_shapes(values: dict, where) -> None:
    labels = values.get("labels")
    if labels is not None:
        n = len(labels)
        for key in ("sigma", "sigma_within", "sigma_cross"):
            grid = values.get(key)
            if grid is None:
                continue
            if grid.rows != n or grid.cols != n:
                raise ParseError(
                    f"grid {key!r} is {grid.rows}x{grid.cols}, expected "
                    f"{n}x{n} for {n} labels", where(key))
    blocks = [values.get(k) for k in ("a_minus", "a_zero", "a_plus")]
    if any(b is not None for b in blocks):
        dims = {(b.rows, b.cols) for b in blocks}
        d = blocks[1].rows
        if dims != {(d, d)}:
            raise ParseError("chain blocks must all be d x d of one size",
                             where("a_zero"))
