"""Rule DSL and JSON mirror: parsing, canonical formatting, file I/O.

One rule per line::

    G120 > 154.5 AND BMI > 29.9 => 1
    color in {red, blue} => A
    "skin thickness" in (10, 20.5] => 0
    TRUE => 0            # empty antecedent, canonical form

``#`` starts a comment. Values are numbers, bare words or double-quoted
strings; feature names may be double-quoted to include spaces.
"""

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, model_validator

from ..dataset.loader import NUMBER_PATTERN
from .model import COMPARISON_OPERATORS, Condition, Operand, Operator, Rule, RuleSet

TRUE_KEYWORD = "TRUE"
AND_KEYWORD = "AND"
IN_KEYWORD = "in"

_TOKEN_SPEC = [
    ("COMMENT", r"\#.*"),
    ("ARROW", r"=>"),
    ("OP", r"<=|>=|==|!=|<|>"),
    ("STRING", r'"(?:[^"\\]|\\.)*"'),
    ("WORD", r"[A-Za-z_][A-Za-z0-9_.]*"),
    ("NUMBER", NUMBER_PATTERN + r"(?![A-Za-z0-9_.])"),
    ("PUNCT", r"[{}\[\](),]"),
    ("SPACE", r"[ \t]+"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))
_BARE_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")
_BARE_LABEL_RE = re.compile(r"[A-Za-z0-9_.+-]+")
_NUMBER_RE = re.compile(NUMBER_PATTERN)


class RuleSyntaxError(ValueError):
    """Raised for malformed rule text, with a 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(line: str, line_no: int) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(line):
        match = _TOKEN_RE.match(line, pos)
        if match is None:
            raise RuleSyntaxError(line_no, pos + 1, f"unexpected character {line[pos]!r}")
        kind = match.lastgroup
        if kind == "COMMENT":
            break
        if kind != "SPACE":
            tokens.append(_Token(kind, match.group(), pos + 1))
        pos = match.end()
    return tokens


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


class _LineParser:
    """Recursive-descent parser over the tokens of one line."""

    def __init__(self, tokens: List[_Token], line_no: int, line_length: int):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no
        self.end_column = line_length + 1

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str, token: Optional[_Token] = None) -> RuleSyntaxError:
        column = token.column if token is not None else self.end_column
        return RuleSyntaxError(self.line_no, column, message)

    def take(self) -> _Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of line")
        self.pos += 1
        return token

    def expect_punct(self, text: str) -> _Token:
        token = self.peek()
        if token is None or token.kind != "PUNCT" or token.text != text:
            raise self.error(f"expected '{text}'", token)
        return self.take()

    def parse_rule(self) -> Rule:
        arrows = [t for t in self.tokens if t.kind == "ARROW"]
        if len(arrows) > 1:
            raise self.error("duplicate '=>' in rule", arrows[1])
        if not arrows:
            raise self.error("missing '=>' between antecedent and consequent")

        first = self.peek()
        if first is not None and first.kind == "ARROW":
            raise self.error("empty antecedent; write TRUE for an unconditional rule", first)

        conditions: List[Condition] = []
        nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        if first.kind == "WORD" and first.text == TRUE_KEYWORD and nxt is not None and nxt.kind == "ARROW":
            self.take()
        else:
            conditions.append(self.parse_condition())
            while True:
                token = self.peek()
                if token is not None and token.kind == "WORD" and token.text.upper() == AND_KEYWORD:
                    self.take()
                    conditions.append(self.parse_condition())
                else:
                    break

        arrow = self.peek()
        if arrow is None or arrow.kind != "ARROW":
            raise self.error("expected 'AND' or '=>'", arrow)
        self.take()

        label = self.peek()
        if label is None:
            raise self.error("missing consequent after '=>'")
        if label.kind not in ("WORD", "NUMBER", "STRING"):
            raise self.error("expected a class label", label)
        self.take()
        trailing = self.peek()
        if trailing is not None:
            raise self.error("unexpected text after consequent", trailing)

        consequent = _unquote(label.text) if label.kind == "STRING" else label.text
        return Rule(tuple(conditions), consequent.strip())

    def parse_feature(self) -> str:
        token = self.peek()
        if token is None:
            raise self.error("expected a feature name")
        if token.kind == "STRING":
            self.take()
            return _unquote(token.text)
        if token.kind == "WORD" and token.text.upper() != AND_KEYWORD:
            self.take()
            return token.text
        raise self.error("expected a feature name", token)

    def parse_value(self, after: str) -> Operand:
        token = self.peek()
        if token is None:
            raise self.error(f"expected a value after '{after}'")
        if token.kind == "NUMBER":
            self.take()
            return float(token.text)
        if token.kind == "STRING":
            self.take()
            return _unquote(token.text)
        if token.kind == "WORD" and token.text.upper() != AND_KEYWORD:
            self.take()
            return token.text
        raise self.error(f"expected a value after '{after}'", token)

    def parse_number(self, after: str) -> float:
        token = self.peek()
        if token is None or token.kind != "NUMBER":
            raise self.error(f"expected a number after '{after}'", token)
        self.take()
        return float(token.text)

    def parse_condition(self) -> Condition:
        feature = self.parse_feature()
        token = self.peek()
        if token is None:
            raise self.error(f"expected an operator after '{feature}'")

        if token.kind == "OP":
            self.take()
            op = COMPARISON_OPERATORS[token.text]
            value = self.parse_value(token.text)
            if op.is_order and isinstance(value, str):
                raise self.error(f"operator '{token.text}' needs a numeric threshold", token)
            return Condition(feature, op, value=value)

        if token.kind == "WORD" and token.text == IN_KEYWORD:
            self.take()
            opener = self.peek()
            if opener is not None and opener.kind == "PUNCT" and opener.text == "{":
                self.take()
                values = [self.parse_value("{")]
                while self.peek() is not None and self.peek().text == ",":
                    self.take()
                    values.append(self.parse_value(","))
                self.expect_punct("}")
                return Condition.one_of(feature, values)
            if opener is not None and opener.kind == "PUNCT" and opener.text in ("[", "("):
                self.take()
                lo = self.parse_number(opener.text)
                self.expect_punct(",")
                hi = self.parse_number(",")
                closer = self.peek()
                if closer is None or closer.kind != "PUNCT" or closer.text not in ("]", ")"):
                    raise self.error("expected ']' or ')'", closer)
                self.take()
                if lo > hi:
                    raise self.error(f"interval lower bound {lo} exceeds upper bound {hi}", opener)
                return Condition.interval(feature, lo, hi, lo_closed=opener.text == "[", hi_closed=closer.text == "]")
            raise self.error("expected '{', '[' or '(' after 'in'", opener)

        raise self.error(f"expected an operator after '{feature}'", token)


def parse_rules(text: str, source: str = "parsed") -> RuleSet:
    """
    Parse a rule DSL document into a RuleSet.

    Feature names are resolved against a dataset only at analysis time.

    Raises:
        RuleSyntaxError: With the line and column of the first offending token
    """
    if not text or not text.strip():
        raise RuleSyntaxError(1, 1, "empty rule document")

    rules = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line, line_no)
        if not tokens:
            continue
        rules.append(_LineParser(tokens, line_no, len(line)).parse_rule())

    if not rules:
        raise RuleSyntaxError(1, 1, "document holds no rules")
    return RuleSet(tuple(rules), source=source)


# Canonical formatting

def format_number(value: float) -> str:
    return repr(float(value))


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _format_name(name: str) -> str:
    if _BARE_WORD_RE.fullmatch(name) and name.upper() not in (AND_KEYWORD, TRUE_KEYWORD) and name != IN_KEYWORD:
        return name
    return _quote(name)


def _format_operand(value: Operand) -> str:
    if isinstance(value, float):
        return format_number(value)
    return _format_name(value)


def _format_label(label: str) -> str:
    if _BARE_LABEL_RE.fullmatch(label) and (_BARE_WORD_RE.fullmatch(label) or _NUMBER_RE.fullmatch(label)):
        return label
    return _quote(label)


def format_condition(cond: Condition) -> str:
    name = _format_name(cond.feature)
    if cond.op is Operator.IN_SET:
        return f"{name} in {{{', '.join(_format_operand(v) for v in cond.values)}}}"
    if cond.op is Operator.IN_INTERVAL:
        opener = "[" if cond.lo_closed else "("
        closer = "]" if cond.hi_closed else ")"
        return f"{name} in {opener}{format_number(cond.lo)}, {format_number(cond.hi)}{closer}"
    return f"{name} {cond.op.value} {_format_operand(cond.value)}"


def format_rule(rule: Rule) -> str:
    antecedent = f" {AND_KEYWORD} ".join(format_condition(c) for c in rule.conditions) or TRUE_KEYWORD
    return f"{antecedent} => {_format_label(rule.consequent)}"


def format_rules(rs: RuleSet) -> str:
    """Canonical DSL text; parse_rules(format_rules(rs)) reproduces rs."""
    return "".join(format_rule(rule) + "\n" for rule in rs.rules)


# JSON mirror

class ConditionModel(BaseModel):
    """JSON shape of a condition."""
    feature: str
    op: str
    value: Optional[Union[float, str]] = None
    values: Optional[List[Union[float, str]]] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    lo_closed: bool = True
    hi_closed: bool = True

    @model_validator(mode="after")
    def check_operands(self) -> "ConditionModel":
        if self.op == IN_KEYWORD:
            has_set = self.values is not None
            has_interval = self.lo is not None or self.hi is not None
            if has_set == has_interval:
                raise ValueError("'in' needs either 'values' or both 'lo' and 'hi'")
        elif self.op not in COMPARISON_OPERATORS:
            raise ValueError(f"unknown operator '{self.op}'")
        elif self.value is None:
            raise ValueError(f"operator '{self.op}' needs 'value'")
        return self

    def to_condition(self) -> Condition:
        if self.op == IN_KEYWORD:
            if self.values is not None:
                return Condition.one_of(self.feature, self.values)
            return Condition.interval(self.feature, self.lo, self.hi, self.lo_closed, self.hi_closed)
        return Condition(self.feature, COMPARISON_OPERATORS[self.op], value=self.value)


class RuleModel(BaseModel):
    """JSON shape of a rule."""
    conditions: List[ConditionModel] = Field(default_factory=list)
    consequent: Union[str, int, float]


def _condition_to_dict(cond: Condition) -> Dict[str, Any]:
    if cond.op is Operator.IN_SET:
        return {"feature": cond.feature, "op": IN_KEYWORD, "values": list(cond.values)}
    if cond.op is Operator.IN_INTERVAL:
        return {
            "feature": cond.feature,
            "op": IN_KEYWORD,
            "lo": cond.lo,
            "hi": cond.hi,
            "lo_closed": cond.lo_closed,
            "hi_closed": cond.hi_closed,
        }
    return {"feature": cond.feature, "op": cond.op.value, "value": cond.value}


def rules_to_json(rs: RuleSet) -> str:
    payload = [
        {"conditions": [_condition_to_dict(c) for c in rule.conditions], "consequent": rule.consequent}
        for rule in rs.rules
    ]
    return json.dumps(payload, indent=2) + "\n"


def rules_from_json(text: str, source: str = "parsed") -> RuleSet:
    """Parse the JSON mirror; raises pydantic.ValidationError on malformed objects."""
    raw = json.loads(text)
    if not isinstance(raw, list) or not raw:
        raise ValueError("rule JSON must be a non-empty list of rule objects")
    rules = []
    for item in raw:
        model = RuleModel.model_validate(item)
        consequent = model.consequent
        if isinstance(consequent, float) and consequent.is_integer():
            consequent = int(consequent)
        rules.append(Rule(tuple(c.to_condition() for c in model.conditions), str(consequent)))
    return RuleSet(tuple(rules), source=source)


def load_rules(path: Union[str, Path]) -> RuleSet:
    """Read a rule file; ``.json`` uses the JSON mirror, anything else the DSL."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return rules_from_json(text, source=path.stem)
    return parse_rules(text, source=path.stem)


def save_rules(rs: RuleSet, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = rules_to_json(rs) if path.suffix.lower() == ".json" else format_rules(rs)
    path.write_text(text, encoding="utf-8")
    return path
