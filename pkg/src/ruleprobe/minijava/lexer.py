"""Tokenizer for the bundled Java-subset toolchain."""

from dataclasses import dataclass


KEYWORDS = {
    "class", "public", "private", "protected", "static", "final", "void",
    "int", "long", "double", "boolean", "if", "else", "while", "for", "do",
    "switch", "case", "default", "break", "continue", "return", "new",
    "throw", "try", "catch", "true", "false", "null", "instanceof", "import",
}

# Multi-char punctuation first so maximal munch works on a sorted scan.
PUNCT = [
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=",
    "{", "}", "(", ")", ";", ",", ".", "=", "<", ">",
    "+", "-", "*", "/", "%", "!", ":",
]


class LexError(Exception):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # 'ident' | 'kw' | 'int' | 'long' | 'double' | 'string' | punct literal | 'eof'
    text: str
    line: int
    col: int

    def is_kw(self, word):
        return self.kind == "kw" and self.text == word


def tokenize(source: str):
    """Return the token list for `source`, raising LexError on bad input."""
    tokens = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(k=1):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                advance()
            continue
        if source.startswith("/*", i):
            start_line, start_col = line, col
            advance(2)
            while i < n and not source.startswith("*/", i):
                advance()
            if i >= n:
                raise LexError("unterminated block comment", start_line, start_col)
            advance(2)
            continue
        if ch == '"':
            start_line, start_col = line, col
            advance()
            buf = []
            while i < n and source[i] != '"':
                if source[i] == "\n":
                    raise LexError("unterminated string literal", start_line, start_col)
                if source[i] == "\\":
                    advance()
                    if i >= n:
                        raise LexError("unterminated string literal", start_line, start_col)
                    esc = source[i]
                    mapped = {"n": "\n", "t": "\t", "\\": "\\", '"': '"', "r": "\r", "0": "\0"}.get(esc)
                    if mapped is None:
                        raise LexError(f"unsupported escape '\\{esc}'", line, col)
                    buf.append(mapped)
                    advance()
                else:
                    buf.append(source[i])
                    advance()
            if i >= n:
                raise LexError("unterminated string literal", start_line, start_col)
            advance()
            tokens.append(Token("string", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            start_line, start_col = line, col
            j = i
            seen_dot = False
            seen_exp = False
            while j < n:
                c = source[j]
                if c.isdigit():
                    j += 1
                elif c == "." and not seen_dot and not seen_exp:
                    seen_dot = True
                    j += 1
                elif c in "eE" and not seen_exp and j + 1 < n and (source[j + 1].isdigit() or source[j + 1] in "+-"):
                    seen_exp = True
                    j += 1
                    if source[j] in "+-":
                        j += 1
                else:
                    break
            text = source[i:j]
            if j < n and source[j] in "lL" and not seen_dot and not seen_exp:
                tokens.append(Token("long", text, start_line, start_col))
                advance(j - i + 1)
                continue
            if j < n and source[j] in "dDfF":
                tokens.append(Token("double", text, start_line, start_col))
                advance(j - i + 1)
                continue
            kind = "double" if (seen_dot or seen_exp) else "int"
            tokens.append(Token(kind, text, start_line, start_col))
            advance(j - i)
            continue
        if ch.isalpha() or ch == "_":
            start_line, start_col = line, col
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            advance(j - i)
            continue
        for p in PUNCT:
            if source.startswith(p, i):
                tokens.append(Token(p, p, line, col))
                advance(len(p))
                break
        else:
            raise LexError(f"unexpected character {ch!r}", line, col)

    tokens.append(Token("eof", "", line, col))
    return tokens
