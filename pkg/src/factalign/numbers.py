"""Number normalization: parse digit strings, number words, ordinals, and
simple dates into comparable values, and render values back as words.

Supported: digit grouping ("2,000"), decimals, ordinal suffixes ("22nd"),
cardinal and ordinal words up to the millions ("one hundred fifty-four",
"twenty-second", "two thousand and 1"), and month names. Anything else
fails to parse, and callers fall back to string comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction

_UNITS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}
_SCALES = {"hundred": 100, "thousand": 1000, "million": 1000000}

_ORDINAL_UNITS = {
    "first": 1, "second": 2, "third": 3, "fourth": 4, "fifth": 5,
    "sixth": 6, "seventh": 7, "eighth": 8, "ninth": 9, "tenth": 10,
    "eleventh": 11, "twelfth": 12, "thirteenth": 13, "fourteenth": 14,
    "fifteenth": 15, "sixteenth": 16, "seventeenth": 17, "eighteenth": 18,
    "nineteenth": 19,
}
_ORDINAL_TENS = {
    "twentieth": 20, "thirtieth": 30, "fortieth": 40, "fiftieth": 50,
    "sixtieth": 60, "seventieth": 70, "eightieth": 80, "ninetieth": 90,
}
_ORDINAL_SCALES = {"hundredth": 100, "thousandth": 1000, "millionth": 1000000}

MONTHS = [
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december",
]
_MONTH_INDEX = {name: i + 1 for i, name in enumerate(MONTHS)}
_MONTH_INDEX.update({name[:3]: i + 1 for i, name in enumerate(MONTHS)})
_MONTH_INDEX["sept"] = 9

_GROUPED_RE = re.compile(r"^\d{1,3}(?:,\d{3})+$")
_ORDINAL_SUFFIX_RE = re.compile(r"^(\d+)(st|nd|rd|th)$", re.IGNORECASE)
_DECIMAL_RE = re.compile(r"^\d+\.\d+$")
_PLAIN_INT_RE = re.compile(r"^\d+$")

NUMBER_WORDS = (
    set(_UNITS) | set(_TENS) | set(_SCALES)
    | set(_ORDINAL_UNITS) | set(_ORDINAL_TENS) | set(_ORDINAL_SCALES)
)


def is_number_word(token: str) -> bool:
    """True for cardinal/ordinal words, including hyphenated compounds."""
    parts = token.casefold().split("-")
    return all(p in NUMBER_WORDS for p in parts if p) and any(p for p in parts)


def is_ordinal_word(token: str) -> bool:
    """True when the final word is an ordinal ("twenty-second", "third")."""
    words = token.casefold().replace("-", " ").split()
    if not words:
        return False
    last = words[-1]
    return last in _ORDINAL_UNITS or last in _ORDINAL_TENS or last in _ORDINAL_SCALES


def month_index(token: str) -> int | None:
    return _MONTH_INDEX.get(token.casefold().rstrip("."))


def parse_digit_token(token: str) -> Fraction | None:
    """Parse one digit-bearing token: plain int, grouped, decimal, ordinal."""
    tok = token.strip().strip("$€£%#")
    if _PLAIN_INT_RE.match(tok):
        return Fraction(int(tok))
    if _GROUPED_RE.match(tok):
        return Fraction(int(tok.replace(",", "")))
    if _DECIMAL_RE.match(tok):
        return Fraction(tok)
    m = _ORDINAL_SUFFIX_RE.match(tok)
    if m:
        return Fraction(int(m.group(1)))
    return None


def _word_value(word: str) -> tuple[int, str] | None:
    """(value, kind) for one number word; kind in unit/tens/scale/ordinal."""
    if word in _UNITS:
        return _UNITS[word], "unit"
    if word in _TENS:
        return _TENS[word], "tens"
    if word in _SCALES:
        return _SCALES[word], "scale"
    if word in _ORDINAL_UNITS:
        return _ORDINAL_UNITS[word], "ordinal"
    if word in _ORDINAL_TENS:
        return _ORDINAL_TENS[word], "ordinal-tens"
    if word in _ORDINAL_SCALES:
        return _ORDINAL_SCALES[word], "ordinal-scale"
    return None


class _GroupParser:
    """Accumulates one word-number run into a list of group values."""

    def __init__(self):
        self.groups: list[Fraction] = []
        self.total = 0
        self.current = 0
        self.unit_filled = False
        self.tens_filled = False
        self.started = False
        self.closed_by_ordinal = False

    def _close(self):
        if self.started:
            self.groups.append(Fraction(self.total + self.current))
        self.total = 0
        self.current = 0
        self.unit_filled = False
        self.tens_filled = False
        self.started = False
        self.closed_by_ordinal = False

    def feed_value(self, value: Fraction):
        """A literal digit value inside a run (e.g. "two thousand and 1")."""
        if self.unit_filled or self.closed_by_ordinal or value.denominator != 1:
            self._close()
        if value.denominator != 1:
            self.started = True
            self.current = value
            self._close()
            return
        self.current += int(value)
        self.unit_filled = True
        self.tens_filled = True
        self.started = True

    def feed_word(self, value: int, kind: str):
        if self.closed_by_ordinal:
            self._close()
        if kind in ("unit", "ordinal"):
            if self.unit_filled or (self.tens_filled and value >= 10):
                self._close()
            self.current += value
            self.unit_filled = True
            if value >= 10:
                self.tens_filled = True
        elif kind in ("tens", "ordinal-tens"):
            if self.tens_filled or self.unit_filled:
                self._close()
            self.current += value
            self.tens_filled = True
        elif kind in ("scale", "ordinal-scale"):
            if value == 100:
                self.current = (self.current or 1) * 100
                self.unit_filled = False
                self.tens_filled = False
            else:
                self.total += (self.current or 1) * value
                self.current = 0
                self.unit_filled = False
                self.tens_filled = False
        self.started = True
        if kind.startswith("ordinal"):
            self.closed_by_ordinal = True

    def finish(self) -> list[Fraction]:
        self._close()
        return self.groups


# A parsed value: ("n", Fraction) for numbers, ("m", 1..12) for months.
Value = tuple[str, object]


def parse_values(text: str) -> tuple[Value, ...]:
    """All numeric values in the text, in reading order.

    Empty result means the text contains nothing the normalizer understands.
    """
    from .segment import tokenize

    values: list[Value] = []
    run: _GroupParser | None = None
    prev_was_and_in_run = False
    for token in tokenize(text):
        low = token.casefold()
        if low == "and" and run is not None:
            prev_was_and_in_run = True
            continue
        digit_value = parse_digit_token(token) if any(ch.isdigit() for ch in token) else None
        if digit_value is not None:
            if run is not None and prev_was_and_in_run:
                run.feed_value(digit_value)
            else:
                if run is not None:
                    values.extend(("n", g) for g in run.finish())
                    run = None
                values.append(("n", digit_value))
            prev_was_and_in_run = False
            continue
        midx = month_index(token)
        # months are matched capitalized so that verbs like "may" don't parse
        if midx is not None and token[:1].isupper():
            if run is not None:
                values.extend(("n", g) for g in run.finish())
                run = None
            values.append(("m", midx))
            prev_was_and_in_run = False
            continue
        if is_number_word(low):
            if run is None:
                run = _GroupParser()
            for part in low.split("-"):
                if not part:
                    continue
                value, kind = _word_value(part)
                run.feed_word(value, kind)
            prev_was_and_in_run = False
            continue
        if run is not None:
            values.extend(("n", g) for g in run.finish())
            run = None
        prev_was_and_in_run = False
    if run is not None:
        values.extend(("n", g) for g in run.finish())
    return tuple(values)


def values_equal(a: str, b: str) -> bool | None:
    """Multiset equality of parsed values; None if either side fails to parse."""
    va, vb = parse_values(a), parse_values(b)
    if not va or not vb:
        return None
    return sorted(va, key=repr) == sorted(vb, key=repr)


def render_cardinal(n: int) -> str:
    """Integer to English words, e.g. 154 -> "one hundred fifty-four"."""
    if n < 0:
        return "minus " + render_cardinal(-n)
    if n < 20:
        return _UNITS_BY_VALUE[n]
    if n < 100:
        tens, unit = divmod(n, 10)
        word = _TENS_BY_VALUE[tens * 10]
        return f"{word}-{_UNITS_BY_VALUE[unit]}" if unit else word
    for scale_value, scale_word in ((1000000, "million"), (1000, "thousand"), (100, "hundred")):
        if n >= scale_value:
            head, rest = divmod(n, scale_value)
            out = f"{render_cardinal(head)} {scale_word}"
            return f"{out} {render_cardinal(rest)}" if rest else out
    raise AssertionError("unreachable")


def render_ordinal_words(n: int) -> str:
    """Integer to ordinal words, e.g. 22 -> "twenty-second"."""
    if n <= 0:
        raise ValueError(f"ordinal must be positive, got {n}")
    if n < 20:
        return _ORDINAL_UNITS_BY_VALUE[n]
    if n < 100:
        tens, unit = divmod(n, 10)
        if unit == 0:
            return _ORDINAL_TENS_BY_VALUE[tens * 10]
        return f"{_TENS_BY_VALUE[tens * 10]}-{_ORDINAL_UNITS_BY_VALUE[unit]}"
    head_scale = max(s for s in (100, 1000, 1000000) if n >= s)
    head, rest = divmod(n, head_scale)
    scale_word = {100: "hundred", 1000: "thousand", 1000000: "million"}[head_scale]
    if rest == 0:
        return f"{render_cardinal(head)} {scale_word}th"
    return f"{render_cardinal(head)} {scale_word} {render_ordinal_words(rest)}"


def render_ordinal_suffix(n: int) -> str:
    """Integer to digit ordinal, e.g. 22 -> "22nd", 13 -> "13th"."""
    if 10 <= n % 100 <= 20:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def render_grouped(n: int) -> str:
    """Integer with comma digit grouping, e.g. 2000 -> "2,000"."""
    return f"{n:,d}"


_UNITS_BY_VALUE = {v: k for k, v in _UNITS.items()}
_TENS_BY_VALUE = {v: k for k, v in _TENS.items()}
_ORDINAL_UNITS_BY_VALUE = {v: k for k, v in _ORDINAL_UNITS.items()}
_ORDINAL_TENS_BY_VALUE = {v: k for k, v in _ORDINAL_TENS.items()}
