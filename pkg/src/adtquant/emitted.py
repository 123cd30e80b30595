"""Self-validation of emitted model-checker files.

The grammars here cover exactly what the exporters emit, not full PRISM or
UPPAAL.  The PRISM side also ships an exhaustive state-space walker used as
a semantic smoke check for 0/1-probability models.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Diagnostic

EXPORT_TARGETS = ("prism-smg", "uppaal-xml")


def validate_emitted(content: str, kind: str) -> list[Diagnostic]:
    if kind == "prism-smg":
        return validate_prism(content)
    if kind == "uppaal-xml":
        return validate_uppaal(content)
    raise ValueError(f"unknown export kind {kind!r}")


# -- Boolean/arithmetic guard expressions ----------------------------------------

_EXPR_TOKEN = re.compile(r"\s*(=>|!=|<=|>=|->|[()&|!=<>+]|[A-Za-z_][A-Za-z0-9_]*|\d+)")


class ExprError(ValueError):
    pass


class _ExprParser:
    """Recursive descent over: | & ! comparisons atoms."""

    def __init__(self, text: str):
        self.tokens: list[str] = []
        pos = 0
        while pos < len(text):
            m = _EXPR_TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise ExprError(f"bad expression near {text[pos:pos + 10]!r}")
                break
            self.tokens.append(m.group(1))
            pos = m.end()
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx] if self.idx < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        self.idx += 1
        return tok

    def parse(self):
        node = self.parse_or()
        if self.peek() is not None:
            raise ExprError(f"trailing token {self.peek()!r}")
        return node

    def parse_or(self):
        node = self.parse_and()
        while self.peek() == "|":
            self.next()
            node = ("or", node, self.parse_and())
        return node

    def parse_and(self):
        node = self.parse_not()
        while self.peek() == "&":
            self.next()
            node = ("and", node, self.parse_not())
        return node

    def parse_not(self):
        if self.peek() == "!":
            self.next()
            return ("not", self.parse_not())
        return self.parse_cmp()

    def parse_cmp(self):
        left = self.parse_atom()
        if self.peek() in ("=", "!=", "<=", ">=", "<", ">"):
            op = self.next()
            right = self.parse_atom()
            return ("cmp", op, left, right)
        return left

    def parse_atom(self):
        tok = self.next()
        if tok == "(":
            node = self.parse_or()
            if self.next() != ")":
                raise ExprError("missing ')'")
            return node
        if tok is None:
            raise ExprError("unexpected end of expression")
        if tok in ("true", "false"):
            return ("bool", tok == "true")
        if tok.isdigit():
            return ("int", int(tok))
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return ("var", tok)
        raise ExprError(f"unexpected token {tok!r}")


def parse_expr(text: str):
    return _ExprParser(text).parse()


def expr_vars(node) -> set[str]:
    tag = node[0]
    if tag == "var":
        return {node[1]}
    if tag in ("int", "bool"):
        return set()
    if tag == "not":
        return expr_vars(node[1])
    if tag == "cmp":
        return expr_vars(node[2]) | expr_vars(node[3])
    return expr_vars(node[1]) | expr_vars(node[2])


def eval_expr(node, state: dict[str, int]):
    tag = node[0]
    if tag == "var":
        return state[node[1]]
    if tag in ("int", "bool"):
        return node[1]
    if tag == "not":
        return not eval_expr(node[1], state)
    if tag == "cmp":
        _t, op, l, r = node
        lv, rv = eval_expr(l, state), eval_expr(r, state)
        return {"=": lv == rv, "!=": lv != rv, "<=": lv <= rv,
                ">=": lv >= rv, "<": lv < rv, ">": lv > rv}[op]
    if tag == "and":
        return eval_expr(node[1], state) and eval_expr(node[2], state)
    return eval_expr(node[1], state) or eval_expr(node[2], state)


# -- PRISM subset parser ----------------------------------------------------------

_VAR_DECL = re.compile(
    r"(?:global\s+)?([A-Za-z_][A-Za-z0-9_]*)\s*:\s*\[(\d+)\.\.(\d+)\]\s*init\s*(\d+)\s*;")
_COMMAND = re.compile(r"\[([A-Za-z_][A-Za-z0-9_]*)\]\s*(.+?)\s*->\s*(.+?);\s*$")
_LABEL = re.compile(r'label\s+"([A-Za-z_][A-Za-z0-9_]*)"\s*=\s*(.+?);\s*$')


@dataclass
class PrismCommand:
    module: str
    action: str
    guard: object  # parsed expression
    branches: list[tuple[Fraction, dict[str, object]]]  # weight, var -> expr


@dataclass
class PrismModel:
    variables: dict[str, tuple[int, int, int]] = field(default_factory=dict)  # lo, hi, init
    commands: list[PrismCommand] = field(default_factory=list)
    labels: dict[str, object] = field(default_factory=dict)
    players: dict[str, list[str]] = field(default_factory=dict)


def _parse_weight(text: str) -> Fraction:
    text = text.strip()
    if text.startswith("1-"):
        # Complement form, used so a probability and its complement sum to
        # exactly 1 regardless of decimal rounding.
        return Fraction(1) - _parse_weight(text[2:])
    if "/" in text:
        a, b = text.split("/")
        return Fraction(int(a), int(b))
    return Fraction(text)


def _parse_updates(text: str) -> dict[str, object]:
    text = text.strip()
    if text == "true":
        return {}
    updates: dict[str, object] = {}
    for part in re.findall(r"\(([^()]*(?:\([^()]*\)[^()]*)*)\)", text):
        m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)'\s*=\s*(.+)\s*$", part)
        if not m:
            raise ExprError(f"bad update {part!r}")
        updates[m.group(1)] = parse_expr(m.group(2))
    if not updates:
        raise ExprError(f"bad update list {text!r}")
    return updates


def parse_prism(text: str) -> PrismModel:
    model = PrismModel()
    module = None
    player = None
    lines = [ln.split("//")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "smg":
        raise ExprError("model must start with 'smg'")
    for ln in lines[1:]:
        if ln.startswith("module "):
            module = ln.split()[1]
            continue
        if ln == "endmodule":
            module = None
            continue
        if ln.startswith("player "):
            player = ln.split()[1]
            model.players[player] = []
            continue
        if ln == "endplayer":
            player = None
            continue
        if player is not None:
            members = [m.strip() for m in ln.split(",") if m.strip()]
            model.players[player].extend(members)
            continue
        m = _LABEL.match(ln)
        if m:
            model.labels[m.group(1)] = parse_expr(m.group(2))
            continue
        m = _VAR_DECL.match(ln)
        if m:
            name, lo, hi, init = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
            if name in model.variables:
                raise ExprError(f"duplicate variable {name}")
            model.variables[name] = (lo, hi, init)
            continue
        m = _COMMAND.match(ln)
        if m:
            if module is None:
                raise ExprError(f"command outside module: {ln!r}")
            action, guard_text, rhs = m.groups()
            branches: list[tuple[Fraction, dict[str, object]]] = []
            parts = _split_branches(rhs)
            for part in parts:
                if ":" in part.split("(")[0]:
                    w_text, upd_text = part.split(":", 1)
                    branches.append((_parse_weight(w_text), _parse_updates(upd_text)))
                else:
                    branches.append((Fraction(1), _parse_updates(part)))
            model.commands.append(PrismCommand(module, action, parse_expr(guard_text), branches))
            continue
        raise ExprError(f"unrecognized line {ln!r}")
    return model


def _split_branches(rhs: str) -> list[str]:
    parts: list[str] = []
    depth = 0
    current = ""
    for ch in rhs:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    parts.append(current)
    return [p.strip() for p in parts if p.strip()]


def validate_prism(content: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def err(code, message):
        diags.append(Diagnostic(code, "error", message, target="export-prism"))

    try:
        model = parse_prism(content)
    except (ExprError, ValueError) as exc:
        return [Diagnostic("E_EMIT_SYNTAX", "error", str(exc), target="export-prism")]

    declared = set(model.variables)
    for cmd in model.commands:
        used = expr_vars(cmd.guard)
        for _w, updates in cmd.branches:
            used |= set(updates)
            for expr in updates.values():
                used |= expr_vars(expr)
        for name in sorted(used - declared):
            err("E_EMIT_UNDECLARED", f"command [{cmd.action}] uses undeclared {name!r}")
        total = sum(w for w, _ in cmd.branches)
        if total != 1:
            err("E_EMIT_WEIGHTS",
                f"command [{cmd.action}] branch weights sum to {total}, expected 1")
    for name, expr in model.labels.items():
        for v in sorted(expr_vars(expr) - declared):
            err("E_EMIT_UNDECLARED", f'label "{name}" uses undeclared {v!r}')
    if "goal" not in model.labels:
        err("E_EMIT_STRUCTURE", 'no "goal" label defined')
    if not model.players:
        err("E_EMIT_STRUCTURE", "no players declared")
    actions = {cmd.action for cmd in model.commands}
    modules = {cmd.module for cmd in model.commands}
    owned: set[str] = set()
    for player, members in model.players.items():
        for member in members:
            if member.startswith("[") and member.endswith("]"):
                a = member[1:-1]
                if a not in actions:
                    err("E_EMIT_UNDECLARED", f"player {player} owns unknown action {a!r}")
                owned.add(a)
            elif member not in modules:
                err("E_EMIT_UNDECLARED", f"player {player} owns unknown module {member!r}")
    for a in sorted(actions - owned):
        err("E_EMIT_STRUCTURE", f"action {a!r} belongs to no player")
    return diags


def prism_goal_reachable(content: str, prefer_prefix: str = "attempt_") -> bool:
    """Exhaustive walk of the emitted model's state space, resolving every
    player choice in favor of actions with the given prefix (default:
    always attempt).  Returns whether any reachable state satisfies the
    "goal" label.  Intended for 0/1-probability smoke checks."""
    model = parse_prism(content)
    goal = model.labels["goal"]
    initial = tuple(sorted((name, init) for name, (_lo, _hi, init) in model.variables.items()))

    by_action: dict[str, list[PrismCommand]] = {}
    for cmd in model.commands:
        by_action.setdefault(cmd.action, []).append(cmd)

    def successors(state: dict[str, int]):
        enabled = {a: cmds for a, cmds in by_action.items()
                   if all(eval_expr(c.guard, state) for c in cmds)}
        if any(a.startswith(prefer_prefix) for a in enabled):
            enabled = {a: c for a, c in enabled.items() if not a.startswith("skip_")}
        for a, cmds in enabled.items():
            # Cross product of the synchronized modules' branches.
            combos: list[dict[str, object]] = [{}]
            for cmd in cmds:
                combos = [dict(acc, **upd) for acc in combos
                          for w, upd in cmd.branches if w > 0]
            for updates in combos:
                new = dict(state)
                for var, expr in updates.items():
                    new[var] = int(eval_expr(expr, state))
                yield new

    seen = {initial}
    frontier = [dict(initial)]
    while frontier:
        state = frontier.pop()
        if eval_expr(goal, state):
            return True
        for new in successors(state):
            key = tuple(sorted(new.items()))
            if key not in seen:
                seen.add(key)
                frontier.append(new)
    return False


# -- UPPAAL subset validation -------------------------------------------------------


def validate_uppaal(content: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def err(code, message):
        diags.append(Diagnostic(code, "error", message, target="export-uppaal"))

    try:
        root = ET.fromstring(content)
    except ET.ParseError as exc:
        return [Diagnostic("E_EMIT_SYNTAX", "error", f"malformed XML: {exc}",
                           target="export-uppaal")]
    if root.tag != "nta":
        err("E_EMIT_STRUCTURE", f"root element is {root.tag!r}, expected 'nta'")
        return diags
    decl = root.find("declaration")
    if decl is None or not (decl.text or "").strip():
        err("E_EMIT_STRUCTURE", "missing global <declaration>")
    templates = root.findall("template")
    if not templates:
        err("E_EMIT_STRUCTURE", "no <template> elements")
    names: set[str] = set()
    for t in templates:
        name_el = t.find("name")
        if name_el is None or not (name_el.text or "").strip():
            err("E_EMIT_STRUCTURE", "template without a name")
            continue
        name = name_el.text.strip()
        names.add(name)
        locations = t.findall("location")
        if not locations:
            err("E_EMIT_STRUCTURE", f"template {name} has no locations")
        if t.find("init") is None:
            err("E_EMIT_STRUCTURE", f"template {name} has no initial location")
        ids = {loc.get("id") for loc in locations}
        ids |= {bp.get("id") for bp in t.findall("branchpoint")}
        for tr in t.findall("transition"):
            for endpoint in ("source", "target"):
                el = tr.find(endpoint)
                if el is None or el.get("ref") not in ids:
                    err("E_EMIT_UNDECLARED",
                        f"template {name}: transition {endpoint} references unknown location")
    system = root.find("system")
    if system is None or "system" not in (system.text or ""):
        err("E_EMIT_STRUCTURE", "missing <system> declaration")
    else:
        m = re.search(r"system\s+([^;]+);", system.text)
        if not m:
            err("E_EMIT_SYNTAX", "system line does not parse")
        else:
            for proc in (p.strip() for p in m.group(1).split(",")):
                if proc not in names:
                    err("E_EMIT_UNDECLARED", f"system references unknown template {proc!r}")
    return diags
