"""Parser for the formula and modality text syntax.

Grammar (modal prefix binds tightest, then `&`, then `|`, then right-associative `->`)::

    formula := imp
    imp     := or ( "->" imp )?
    or      := and ( "|" and )*
    and     := unary ( "&" unary )*
    unary   := "true" | "false" | TOKEN | "(" formula ")" | modal unary
    modal   := "[B" AGENT "]" | "[I" AGENT "<-" AGENT "]" | "[box]" | "[W" AGENT "]" | "[M" IDENT "]"

Identifiers start with a letter or underscore and may carry balanced parentheses,
so predicate tokens such as `hasKey(a)` are single tokens.
"""

import string
from typing import List, Optional, Tuple

from trustlogic.logic.contexts import AgentUniverse
from trustlogic.logic.formulas import (
    BOT,
    BOX,
    TOP,
    And,
    Belief,
    Formula,
    Imp,
    Interact,
    Modal,
    Modality,
    Named,
    Or,
    Token,
    Wish,
    render_formula,
    render_modality,
)

_IDENT_START = frozenset(string.ascii_letters + "_")
_IDENT_BODY = frozenset(string.ascii_letters + string.digits + "_")

__all__ = [
    "ParseError",
    "FormulaParser",
    "parse_formula",
    "parse_modality",
    "parse_unfolding",
    "render_formula",
    "render_modality",
]


class ParseError(ValueError):
    """Text does not follow the grammar.

    Attributes:
        message (str): What went wrong.
        text (str): The full input.
        position (int): 0-based offset of the offending character.

    """

    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(message)
        self.message = message
        self.text = text
        self.position = position

    def __str__(self) -> str:
        if not self.text:
            return self.message
        return f"{self.message} at column {self.position + 1}\n  {self.text}\n  {' ' * self.position}^"


class FormulaParser:
    """Recursive-descent reader over a string, shared by the formula, axiom and term parsers.

    Args:
        text (str): Input text.
        universe (AgentUniverse): If given, agent names are checked against it.
        pos (int): Starting offset.

    """

    def __init__(self, text: str, universe: Optional[AgentUniverse] = None, pos: int = 0):
        self.text = text
        self.universe = universe
        self.pos = pos

    # ------------------------------------------------------------------------+
    #                                 Scanning                                |
    # ------------------------------------------------------------------------+

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.text, min(self.pos, len(self.text)))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.skip_ws()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            found = self.text[self.pos : self.pos + 8] or "end of input"
            raise self.error(f"expected {literal!r}, found {found!r}")

    def identifier(self, allow_parens: bool = True) -> str:
        """Read an identifier; with `allow_parens`, balanced parentheses are part of it."""
        self.skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or self.text[self.pos] not in _IDENT_START:
            raise self.error("expected identifier")
        self.pos += 1
        depth = 0
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in _IDENT_BODY:
                self.pos += 1
            elif allow_parens and ch == "(":
                depth += 1
                self.pos += 1
            elif allow_parens and ch == ")" and depth > 0:
                depth -= 1
                self.pos += 1
            else:
                break
        if depth:
            raise self.error("unbalanced parenthesis in identifier")
        return self.text[start : self.pos]

    def finish(self) -> None:
        if not self.at_end():
            raise self.error(f"unexpected {self.text[self.pos]!r}")

    # ------------------------------------------------------------------------+
    #                                Modalities                               |
    # ------------------------------------------------------------------------+

    def agent(self) -> str:
        start = self.pos
        name = self.identifier(allow_parens=False)
        if self.universe is not None and name not in self.universe:
            self.pos = start
            self.skip_ws()
            raise self.error(f"unknown agent {name!r}")
        return name

    def modality(self) -> Modality:
        """Bracket-free modality: `B a`, `I a <- b`, `box`, `W a`, `M id`."""
        self.skip_ws()
        start = self.pos
        word = self.identifier(allow_parens=False)
        if word == "box":
            return BOX
        if word == "B":
            return Belief(self.agent())
        if word == "W":
            return Wish(self.agent())
        if word == "M":
            return Named(self.identifier())
        if word == "I":
            recipient = self.agent()
            self.expect("<-")
            return Interact(recipient, self.agent())
        self.pos = start
        raise self.error(f"unknown modality {word!r}")

    def unfolding(self) -> List[Modality]:
        """Sequence of bracketed modalities, or `.` for the empty list."""
        if self.accept("."):
            return []
        mods = [self.bracketed_modality()]
        while self.peek("["):
            mods.append(self.bracketed_modality())
        return mods

    def bracketed_modality(self) -> Modality:
        self.expect("[")
        m = self.modality()
        self.expect("]")
        return m

    # ------------------------------------------------------------------------+
    #                                 Formulas                                |
    # ------------------------------------------------------------------------+

    def formula(self) -> Formula:
        lhs = self._or()
        if self.accept("->"):
            return Imp(lhs, self.formula())
        return lhs

    def _or(self) -> Formula:
        f = self._and()
        while self.accept("|"):
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._unary()
        while self.accept("&"):
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.peek("["):
            m = self.bracketed_modality()
            return Modal(m, self._unary())
        self.skip_ws()
        if self.pos >= len(self.text):
            raise self.error("unexpected end of input")
        name = self.identifier()
        if name == "true":
            return TOP
        if name == "false":
            return BOT
        return Token(name)


def parse_formula(text: str, universe: Optional[AgentUniverse] = None) -> Formula:
    """Parse a complete formula.

    Args:
        text (str): Formula text.
        universe (AgentUniverse): Agents allowed in modalities; unchecked if None.

    Returns:
        Formula: The parsed formula.

    """
    parser = FormulaParser(text, universe)
    f = parser.formula()
    parser.finish()
    return f


def parse_modality(text: str, universe: Optional[AgentUniverse] = None) -> Modality:
    """Parse `B a`, `[B a]` and the other modality forms."""
    parser = FormulaParser(text, universe)
    m = parser.bracketed_modality() if parser.peek("[") else parser.modality()
    parser.finish()
    return m


def parse_unfolding(text: str, universe: Optional[AgentUniverse] = None) -> Tuple[Modality, ...]:
    parser = FormulaParser(text, universe)
    mods = parser.unfolding()
    parser.finish()
    return tuple(mods)
