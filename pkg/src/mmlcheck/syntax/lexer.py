"""Tokenizer for Mini-ML source text.

Layout-insensitive: newlines terminate declarations only at bracket depth
zero; inside (), [] and {} they are plain whitespace. `--` starts a line
comment. CRLF input is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import Span


class SyntaxErrorWithSpan(Exception):
    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


KEYWORDS = {"let", "in", "if", "then", "else", "case", "of", "data", "import", "True", "False"}

# Multi-character symbols must be listed before their prefixes.
SYMBOLS = ["::", "->", "=", "\\", "(", ")", "[", "]", "{", "}", ",", ";", "|", "_"]


@dataclass(frozen=True)
class Token:
    kind: str  # INT FLOAT CHAR STRING LOWER UPPER keyword symbol NEWLINE EOF
    text: str
    line: int
    col: int

    def span(self, module: str) -> Span:
        return Span(module, self.line, self.col, self.line, self.col + max(len(self.text), 1))


_ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'", '"': '"', "r": "\r", "0": "\0"}


def tokenize(module: str, source: str) -> list[Token]:
    text = source.replace("\r\n", "\n")
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    depth = 0

    def err(msg: str, ln: int, cl: int, width: int = 1) -> SyntaxErrorWithSpan:
        return SyntaxErrorWithSpan(msg, Span(module, ln, cl, ln, cl + width))

    while i < n:
        ch = text[i]
        if ch == "\n":
            if depth == 0 and tokens and tokens[-1].kind not in ("NEWLINE",):
                tokens.append(Token("NEWLINE", "", line, col))
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        start_line, start_col = line, col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                kind = "FLOAT"
            else:
                kind = "INT"
            lexeme = text[i:j]
            tokens.append(Token(kind, lexeme, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == "'":
            j = i + 1
            if j >= n:
                raise err("unterminated character literal", start_line, start_col)
            if text[j] == "\\":
                if j + 1 >= n or text[j + 1] not in _ESCAPES:
                    raise err("bad escape in character literal", start_line, start_col, 2)
                value = _ESCAPES[text[j + 1]]
                j += 2
            else:
                value = text[j]
                j += 1
            if j >= n or text[j] != "'":
                raise err("unterminated character literal", start_line, start_col)
            j += 1
            tokens.append(Token("CHAR", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"':
            j = i + 1
            chars: list[str] = []
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise err("unterminated string literal", start_line, start_col)
                if text[j] == "\\":
                    if j + 1 >= n or text[j + 1] not in _ESCAPES:
                        raise err("bad escape in string literal", line, col + (j - i), 2)
                    chars.append(_ESCAPES[text[j + 1]])
                    j += 2
                else:
                    chars.append(text[j])
                    j += 1
            if j >= n:
                raise err("unterminated string literal", start_line, start_col)
            j += 1
            tokens.append(Token("STRING", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            lexeme = text[i:j]
            if lexeme in KEYWORDS:
                kind = lexeme
            elif lexeme[0].isupper():
                kind = "UPPER"
            else:
                kind = "LOWER"
            tokens.append(Token(kind, lexeme, start_line, start_col))
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                if sym in "([{":
                    depth += 1
                elif sym in ")]}":
                    depth = max(0, depth - 1)
                tokens.append(Token(sym, sym, start_line, start_col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise err(f"unexpected character {ch!r}", start_line, start_col)

    if tokens and tokens[-1].kind != "NEWLINE":
        tokens.append(Token("NEWLINE", "", line, col))
    tokens.append(Token("EOF", "", line, col))
    return tokens
