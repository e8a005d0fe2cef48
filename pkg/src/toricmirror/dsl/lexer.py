"""Tokenizer for ``.tmc`` files."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError

# words containing '-' that are read as a single keyword
HYPHENATED = frozenset({
    "dual-change",
    "knorrer-reduce",
    "knorrer-expand",
    "add-term",
    "absorb-units",
    "primal-potential",
    "potential-equals",
    "sigma-equals",
    "constraints-equal",
    "crit-empty",
    "crit-nonempty",
    "crit-contained-in",
    "crit-points",
    "critical-values",
})

SYMBOLS = ("->", "{", "}", "(", ")", ",", ";", "=", "+", "-", "*", "/", "^", ":")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, SYM, EOF
    text: str
    line: int
    col: int

    def __repr__(self):
        return f"{self.kind}({self.text!r})@{self.line}:{self.col}"


def _word_at(text: str, i: int) -> int:
    j = i
    while j < len(text) and (text[j].isalnum() or text[j] == "_") and text[j].isascii():
        j += 1
    return j


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            j = _word_at(text, i)
            word = text[i:j]
            # greedily join hyphenated keywords
            while j < n and text[j] == "-" and j + 1 < n and text[j + 1].isascii() and text[j + 1].isalpha():
                k = _word_at(text, j + 1)
                candidate = word + "-" + text[j + 1:k]
                if not any(h == candidate or h.startswith(candidate + "-") for h in HYPHENATED):
                    break
                word, j = candidate, k
            if "-" in word and word not in HYPHENATED:
                # a prefix of a longer keyword that never completed; keep the first part
                word = word.split("-")[0]
                j = i + len(word)
            tokens.append(Token("IDENT", word, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("SYM", sym, line, start_col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(Token("EOF", "", line, col))
    return tokens
