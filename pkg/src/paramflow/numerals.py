"""Spoken-English numerals to numeric values.

Recognized forms, composed per standard English order:

* sign words ("minus", "negative")
* composed magnitudes: units, teens, tens, "hundred", "thousand"
  ("two thousand three hundred forty one")
* digit sequences spoken as words ("four two" -> 42)
* decimals: "point" followed by digit words ("four point two five" -> 4.25)
* literal numerals already in the transcript ("42", "4.5")

When several forms could start at the same token, the longest valid
consumption wins; a lone digit word is a composed unit, two or more in a row
are a digit sequence.

Decimal values are defined as the IEEE double nearest to the spelled decimal
literal (the digits are joined textually before conversion), so "four point
one two" equals float("4.12") exactly.
"""

from __future__ import annotations

import re

UNITS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4,
    "five": 5, "six": 6, "seven": 7, "eight": 8, "nine": 9,
}
TEENS = {
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}
SIGNS = {"minus": -1, "negative": -1}

NUMBER_WORDS = frozenset(UNITS) | frozenset(TEENS) | frozenset(TENS) | frozenset(SIGNS) | {
    "hundred", "thousand", "point",
}

_LITERAL = re.compile(r"^\d+(\.\d+)?$")


def _parse_group(tokens: list[str], i: int) -> tuple[int, int] | None:
    """One group below a scale word: [unit "hundred"] [ten [unit] | teen | unit]."""
    value = 0
    j = i
    if j < len(tokens) and tokens[j] in UNITS and j + 1 < len(tokens) and tokens[j + 1] == "hundred":
        value = UNITS[tokens[j]] * 100
        j += 2
        tail = _parse_tail(tokens, j)
        if tail is not None:
            value += tail[0]
            j = tail[1]
        return value, j
    return _parse_tail(tokens, j)


def _parse_tail(tokens: list[str], i: int) -> tuple[int, int] | None:
    if i >= len(tokens):
        return None
    token = tokens[i]
    if token in TENS:
        value = TENS[token]
        j = i + 1
        if j < len(tokens) and tokens[j] in UNITS and UNITS[tokens[j]] != 0:
            value += UNITS[tokens[j]]
            j += 1
        return value, j
    if token in TEENS:
        return TEENS[token], i + 1
    if token in UNITS:
        return UNITS[token], i + 1
    return None


def _parse_composed(tokens: list[str], i: int) -> tuple[int, int] | None:
    group = _parse_group(tokens, i)
    if group is None:
        return None
    value, j = group
    if j < len(tokens) and tokens[j] == "thousand":
        total = value * 1000
        j += 1
        rest = _parse_group(tokens, j)
        if rest is not None:
            total += rest[0]
            j = rest[1]
        return total, j
    return value, j


def _parse_digit_sequence(tokens: list[str], i: int) -> tuple[int, int] | None:
    j = i
    digits = []
    while j < len(tokens) and tokens[j] in UNITS:
        digits.append(str(UNITS[tokens[j]]))
        j += 1
    if len(digits) < 2:
        return None
    return int("".join(digits)), j


def parse_number(tokens: list[str], cursor: int = 0) -> tuple[float, int] | None:
    """Longest numeral starting at ``cursor``; None (and no consumption) if absent."""
    i = cursor
    sign = 1
    if i < len(tokens) and tokens[i] in SIGNS:
        sign = -1
        i += 1

    if i < len(tokens) and _LITERAL.match(tokens[i]):
        return sign * float(tokens[i]), i + 1

    candidates = [c for c in (_parse_composed(tokens, i), _parse_digit_sequence(tokens, i)) if c]
    int_part, j = max(candidates, key=lambda c: c[1]) if candidates else (0, i)

    frac_digits = ""
    if j < len(tokens) and tokens[j] == "point":
        k = j + 1
        while k < len(tokens) and tokens[k] in UNITS:
            frac_digits += str(UNITS[tokens[k]])
            k += 1
        if frac_digits:
            j = k

    if j == i and not frac_digits:
        return None
    if frac_digits:
        return sign * float(f"{int_part}.{frac_digits}"), j
    return sign * float(int_part), j


def parse_number_candidates(tokens: list[str], cursor: int = 0) -> list[tuple[float, int]]:
    """Every valid numeral starting at ``cursor``, longest consumption first.

    The grammar matcher backtracks through these so that adjacent number
    slots ("move node two to three four") can still split a digit run.
    """
    candidates: list[tuple[float, int]] = []
    for end in range(len(tokens), cursor, -1):
        window = tokens[cursor:end]
        parsed = parse_number(window, 0)
        if parsed is not None and parsed[1] == len(window):
            candidates.append((parsed[0], end))
    return candidates


_UNIT_WORDS = {v: k for k, v in UNITS.items()}
_TEEN_WORDS = {v: k for k, v in TEENS.items()}
_TEN_WORDS = {v: k for k, v in TENS.items()}


def number_to_words(n: int) -> str:
    """Canonical spoken form of an integer in [0, 999999]; used for sampling."""
    if n < 0 or n > 999_999:
        raise ValueError(f"out of spoken range: {n}")
    if n >= 1000:
        head = number_to_words(n // 1000) + " thousand"
        return head + (" " + number_to_words(n % 1000) if n % 1000 else "")
    if n >= 100:
        head = _UNIT_WORDS[n // 100] + " hundred"
        return head + (" " + number_to_words(n % 100) if n % 100 else "")
    if n >= 20:
        head = _TEN_WORDS[n - n % 10]
        return head + (" " + _UNIT_WORDS[n % 10] if n % 10 else "")
    if n >= 10:
        return _TEEN_WORDS[n]
    return _UNIT_WORDS[n]
