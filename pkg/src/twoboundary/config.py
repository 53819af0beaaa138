"""Key-value experiment config format.

Grammar (one assignment per line, ``#`` starts a comment)::

    line    := key "=" value
    key     := [A-Za-z_][A-Za-z0-9_-]*
    value   := number | word | "[" [value ("," value)*] "]"
    number  := real | real ("+" | "-") ureal "i" | [sign] [ureal] "i"
    real    := [sign] ureal
    ureal   := digits ["." digits] [("e"|"E") [sign] digits] | "." digits [...]
    word    := [A-Za-z_][A-Za-z0-9_]*

Integers stay ``int``, decimals become ``float`` and anything with an
imaginary part becomes ``complex``.  Lists nest, so a matrix is
``[[1, 0], [0, 1]]`` and a list of matrices is one more level of brackets.
Words (``coherent``, ``A``) are returned as strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import ConfigError

__all__ = ["ConfigEntry", "ConfigDocument", "parse_config", "format_value"]

_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_UREAL = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER = re.compile(
    rf"(?P<re>[+-]?{_UREAL})(?:(?P<im>[+-](?:{_UREAL})?)i)?(?![A-Za-z0-9_.])"
    rf"|(?P<pure>[+-]?(?:{_UREAL})?)i(?![A-Za-z0-9_.])"
)


@dataclass(frozen=True)
class ConfigEntry:
    value: Any
    line: int


@dataclass
class ConfigDocument:
    entries: dict[str, ConfigEntry] = field(default_factory=dict)

    def __contains__(self, key):
        return key in self.entries

    def __getitem__(self, key):
        return self.entries[key].value

    def keys(self):
        return self.entries.keys()

    def get(self, key, default=None):
        entry = self.entries.get(key)
        return default if entry is None else entry.value

    def require(self, key):
        if key not in self.entries:
            raise ConfigError(f"missing required key '{key}'")
        return self.entries[key].value

    def line_of(self, key) -> int | None:
        entry = self.entries.get(key)
        return None if entry is None else entry.line

    def check_keys(self, allowed: Iterable[str], context: str = "") -> None:
        allowed = set(allowed)
        for key, entry in self.entries.items():
            if key not in allowed:
                where = f" for {context}" if context else ""
                raise ConfigError(
                    f"unknown key '{key}'{where}; expected one of {sorted(allowed)}", entry.line
                )


def _parse_number(tok: dict):
    if tok.get("pure") is not None:
        mag = tok["pure"]
        if mag in ("", "+"):
            return 1j
        if mag == "-":
            return -1j
        return complex(0.0, float(mag))
    real_txt = tok["re"]
    if tok.get("im") is not None:
        im_txt = tok["im"]
        imag = float(im_txt + "1") if im_txt in ("+", "-") else float(im_txt)
        return complex(float(real_txt), imag)
    if re.fullmatch(r"[+-]?\d+", real_txt):
        return int(real_txt)
    return float(real_txt)


class _LineParser:
    def __init__(self, text: str, line: int, offset: int):
        self.text = text
        self.pos = offset
        self.line = line

    def error(self, message):
        raise ConfigError(message, self.line, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def value(self):
        ch = self.peek()
        if ch == "[":
            return self.list_()
        if ch == "":
            self.error("expected a value")
        m = _NUMBER.match(self.text, self.pos)
        if m and m.group(0):
            self.pos = m.end()
            return _parse_number(m.groupdict())
        m = _WORD.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return m.group(0)
        self.error(f"expected a number, word or '[', found {ch!r}")

    def list_(self):
        self.pos += 1
        items = []
        if self.peek() == "]":
            self.pos += 1
            return items
        while True:
            items.append(self.value())
            ch = self.peek()
            if ch == ",":
                self.pos += 1
            elif ch == "]":
                self.pos += 1
                return items
            else:
                self.error(f"expected ',' or ']', found {ch!r}" if ch else "expected ',' or ']'")


def parse_config(text: str) -> ConfigDocument:
    """Parse a config document; raises ConfigError with line/column on failure."""
    doc = ConfigDocument()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        p = _LineParser(line, lineno, 0)
        p.skip_ws()
        m = _KEY.match(line, p.pos)
        if not m:
            p.error("expected a key")
        key = m.group(0)
        p.pos = m.end()
        if p.peek() != "=":
            p.error("expected '='")
        p.pos += 1
        value = p.value()
        if p.peek():
            p.error(f"unexpected trailing text {line[p.pos:]!r}")
        if key in doc.entries:
            first = doc.entries[key].line
            raise ConfigError(f"duplicate key '{key}' (first defined on line {first})", lineno)
        doc.entries[key] = ConfigEntry(value, lineno)
    return doc


def format_value(value) -> str:
    """Inverse of the value grammar for ints, floats, complex and nested lists."""
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}i"
    if isinstance(value, float):
        return repr(value)
    return str(value)
