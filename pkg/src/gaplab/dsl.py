"""S-expression text form and JSON form for machines, programs and specs.

A document is a sequence of forms. Machines are defined by name and
referenced from programs with ``(base NAME)``::

    ; g is 3 on "01" and 0 elsewhere
    (machine m (time "2") (default (gap 0)) (on "01" (gap 3)))
    (sub (base m) (fp 1))
    (spec length (targets () (default 3 5)) "2")

Trees: ``accept``, ``reject``, ``(choice T T)``, ``(gap V [PAD])``.
FP functions: integers, ``len``, ``index``, ``rank``, ``first``, ``unary``,
``enumerator``, ``(pair F G)``, ``(table (("x" V) ...) D)``,
``(targets (("x" V ...) ...) (default V ...))``,
``(targets-by-length ((L V ...) ...) (default V ...))``, ``(+ F ...)``,
``(* F ...)``, ``(- F)``, ``(iprod F POLY START [first])``, ``(at F G)``.
Programs: ``(base NAME)``, ``(fp F)``, ``(neg P)``, ``(add P Q)``,
``(sub P Q)``, ``(mul P Q)``, ``(prod P POLY from0|from1)``,
``(compose P F)``.
Specs: ``(spec length|input F POLY)`` with POLY a quoted polynomial or
``(exp POLY)``, and ``(two-sided SPEC SPEC)``.

Oracle machines, ``(oracle-machine NAME (time POLY) (universe "w" ...)
(default T) (on "x" T) ...)``, extend the tree forms with ``(query "w" T T)``
(yes branch first). Deterministic function machines,
``(function-machine NAME (time POLY) (default F) (on "x" F) ...)``, use
integer leaves and ``(probe "w" F F)``. Input and oracle strings are always
quoted; a bare ``01`` is rejected rather than read as the integer 1.

The JSON form is the same tree written as nested arrays, with symbols and
quoted strings both as JSON strings.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any, Union

from .diagonalize import FunctionMachine, FunctionTree, Probe, Value
from .errors import GapLabError, ParseError
from .fp import (
    At,
    Const,
    Enumerator,
    First,
    FPFunc,
    Index,
    IndexProduct,
    Length,
    Negate,
    Pair,
    Product,
    Rank,
    Sum,
    Table,
    TargetList,
    Unary,
    targets_by_length,
)
from .natpoly import ExpBound, Multiplicity, NatPoly
from .polyenc import OracleMachine, OracleTree, Query
from .programs import (
    Add,
    Base,
    BaseMachine,
    ComposeFP,
    ConstFP,
    GapProgram,
    Mul,
    Neg,
    PolyProd,
    Sub,
)
from .strings import DEFAULT_ALPHABET
from .targets import TargetSpec, TwoSidedTargetSpec
from .trees import ACCEPT, REJECT, Choice, ChoiceTree, Leaf, padded_tree

_TOKEN = re.compile(r'\s+|;[^\n]*|\(|\)|"(?:[^"\\]|\\.)*"|[^\s()";]+')
_INT = re.compile(r"-?\d+$")


@dataclass(frozen=True)
class Atom:
    value: int | str
    quoted: bool = False
    pos: int = 0


@dataclass(frozen=True)
class SList:
    items: tuple[Node, ...]
    pos: int = 0


Node = Union[Atom, SList]
Spec = Union[TargetSpec, TwoSidedTargetSpec]
Item = Union[GapProgram, TargetSpec, TwoSidedTargetSpec]


@dataclass
class Document:
    machines: dict[str, BaseMachine] = field(default_factory=dict)
    oracle_machines: dict[str, OracleMachine] = field(default_factory=dict)
    function_machines: dict[str, FunctionMachine] = field(default_factory=dict)
    items: list[Item] = field(default_factory=list)

    def programs(self) -> list[GapProgram]:
        return [item for item in self.items if isinstance(item, GapProgram)]

    def specs(self) -> list[Spec]:
        return [item for item in self.items if isinstance(item, (TargetSpec, TwoSidedTargetSpec))]


# Reading


def _tokens(text: str) -> Iterator[tuple[str, int]]:
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        token = match.group()
        if not token.isspace() and not token.startswith(";"):
            yield token, pos
        pos = match.end()


def read(text: str) -> list[Node]:
    """Read all top-level s-expressions of ``text``."""
    stack: list[tuple[int, list[Node]]] = [(0, [])]
    for token, pos in _tokens(text):
        if token == "(":
            stack.append((pos, []))
        elif token == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", pos)
            start, items = stack.pop()
            stack[-1][1].append(SList(tuple(items), start))
        elif token.startswith('"'):
            try:
                value = json.loads(token)
            except json.JSONDecodeError as e:
                raise ParseError(f"bad string literal: {e.msg}", pos + e.pos) from e
            stack[-1][1].append(Atom(value, quoted=True, pos=pos))
        elif _INT.match(token):
            stack[-1][1].append(Atom(int(token), pos=pos))
        else:
            stack[-1][1].append(Atom(token, pos=pos))
    if len(stack) != 1:
        raise ParseError("unbalanced '('", stack[-1][0])
    return stack[0][1]


def from_json_value(data: Any) -> Node:
    if isinstance(data, list):
        return SList(tuple(from_json_value(item) for item in data))
    if isinstance(data, bool) or not isinstance(data, (int, str)):
        raise ParseError(f"unexpected JSON value {data!r}")
    return Atom(data, quoted=isinstance(data, str))


def to_json_value(node: Node) -> Any:
    if isinstance(node, SList):
        return [to_json_value(item) for item in node.items]
    return node.value


# Building


def _head(node: Node) -> str:
    if isinstance(node, SList) and node.items and isinstance(node.items[0], Atom):
        return str(node.items[0].value)
    if isinstance(node, Atom) and isinstance(node.value, str):
        return node.value
    return ""


def _args(node: Node, count: int | None = None, at_least: int = 0) -> tuple[Node, ...]:
    if not isinstance(node, SList):
        raise ParseError(f"expected a list form, got {_render(node)}", node.pos)
    args = node.items[1:]
    if count is not None and len(args) != count:
        raise ParseError(f"({_head(node)} ...) takes {count} argument(s), got {len(args)}", node.pos)
    if len(args) < at_least:
        raise ParseError(f"({_head(node)} ...) takes at least {at_least} argument(s)", node.pos)
    return args


def _int(node: Node) -> int:
    if isinstance(node, Atom) and isinstance(node.value, int):
        return node.value
    raise ParseError(f"expected an integer, got {_render(node)}", node.pos)


def _text(node: Node) -> str:
    if isinstance(node, Atom):
        return str(node.value)
    raise ParseError(f"expected a string, got {_render(node)}", node.pos)


def _word(node: Node) -> str:
    """An input or oracle string. Numerals must be quoted."""
    if isinstance(node, Atom) and isinstance(node.value, str):
        return node.value
    raise ParseError(f"expected a quoted string, got {_render(node)}", node.pos)


def _poly(node: Node) -> NatPoly:
    try:
        return NatPoly.parse(_text(node))
    except ParseError as e:
        raise ParseError(str(e), node.pos) from e
    except ValueError as e:
        raise ParseError(str(e), node.pos) from e


def _multiplicity(node: Node) -> Multiplicity:
    if _head(node) == "exp" and isinstance(node, SList):
        (exponent,) = _args(node, 1)
        return ExpBound(_poly(exponent))
    return _poly(node)


def _default_values(node: Node) -> tuple[int, ...]:
    if _head(node) != "default":
        raise ParseError("expected (default V ...)", node.pos)
    return tuple(_int(v) for v in _args(node, at_least=1))


def _machine_header(node: Node) -> tuple[str, NatPoly, tuple[Node, ...]]:
    """(name, time bound, remaining clauses) of a machine form."""
    args = _args(node, at_least=2)
    time_form = args[1]
    if _head(time_form) != "time":
        raise ParseError(f"{_head(node)} needs (time POLY) after its name", time_form.pos)
    (bound,) = _args(time_form, 1)
    return _text(args[0]), _poly(bound), args[2:]


class _Builder:
    def __init__(self, alphabet: str, machines: dict[str, BaseMachine]) -> None:
        self.alphabet = alphabet
        self.machines = machines

    def tree(self, node: Node) -> ChoiceTree:
        head = _head(node)
        if isinstance(node, Atom):
            if head == "accept":
                return ACCEPT
            if head == "reject":
                return REJECT
            raise ParseError(f"unknown tree {_render(node)}", node.pos)
        if head == "choice":
            left, right = _args(node, 2)
            return Choice(self.tree(left), self.tree(right))
        if head == "gap":
            args = _args(node, at_least=1)
            if len(args) > 2:
                raise ParseError("(gap V [PAD]) takes one or two arguments", node.pos)
            return padded_tree(_int(args[0]), _int(args[1]) if len(args) == 2 else 0)
        raise ParseError(f"unknown tree form {head!r}", node.pos)

    def machine(self, node: Node) -> BaseMachine:
        name, bound, clauses = _machine_header(node)
        default: ChoiceTree = padded_tree(0, 0)
        trees: dict[str, ChoiceTree] = {}
        for clause in clauses:
            head = _head(clause)
            if head == "default":
                (tree,) = _args(clause, 1)
                default = self.tree(tree)
            elif head == "on":
                key, tree = _args(clause, 2)
                trees[_word(key)] = self.tree(tree)
            else:
                raise ParseError(f"unknown machine clause {head!r}", clause.pos)
        return BaseMachine(name=name, time_bound=bound, trees=trees, default=default)

    def oracle_tree(self, node: Node) -> OracleTree:
        head = _head(node)
        if head == "query":
            word, yes, no = _args(node, 3)
            return Query(_word(word), self.oracle_tree(yes), self.oracle_tree(no))
        if head == "choice":
            left, right = _args(node, 2)
            return Choice(self.oracle_tree(left), self.oracle_tree(right))  # type: ignore[arg-type]
        return self.tree(node)

    def oracle_machine(self, node: Node) -> OracleMachine:
        name, bound, clauses = _machine_header(node)
        universe: tuple[str, ...] = ()
        default: OracleTree = padded_tree(0, 0)
        trees: dict[str, OracleTree] = {}
        for clause in clauses:
            head = _head(clause)
            if head == "universe":
                universe = tuple(_word(word) for word in _args(clause))
            elif head == "default":
                (tree,) = _args(clause, 1)
                default = self.oracle_tree(tree)
            elif head == "on":
                key, tree = _args(clause, 2)
                trees[_word(key)] = self.oracle_tree(tree)
            else:
                raise ParseError(f"unknown oracle-machine clause {head!r}", clause.pos)
        if len(set(universe)) != len(universe):
            raise ParseError(f"universe of {name!r} lists a string twice", node.pos)
        return OracleMachine(name=name, time_bound=bound, universe=universe, trees=trees, default=default)

    def function_tree(self, node: Node) -> FunctionTree:
        if isinstance(node, Atom) and isinstance(node.value, int):
            return Value(node.value)
        if _head(node) == "probe":
            word, yes, no = _args(node, 3)
            return Probe(_word(word), self.function_tree(yes), self.function_tree(no))
        raise ParseError(f"expected an integer or (probe W F F), got {_render(node)}", node.pos)

    def function_machine(self, node: Node) -> FunctionMachine:
        name, bound, clauses = _machine_header(node)
        default: FunctionTree = Value(1)
        trees: dict[str, FunctionTree] = {}
        for clause in clauses:
            head = _head(clause)
            if head == "default":
                (tree,) = _args(clause, 1)
                default = self.function_tree(tree)
            elif head == "on":
                key, tree = _args(clause, 2)
                trees[_word(key)] = self.function_tree(tree)
            else:
                raise ParseError(f"unknown function-machine clause {head!r}", clause.pos)
        return FunctionMachine(name=name, time_bound=bound, trees=trees, default=default)

    def fp(self, node: Node) -> FPFunc:
        if isinstance(node, Atom):
            if isinstance(node.value, int):
                return Const(node.value)
            simple = {
                "len": Length,
                "index": Index,
                "rank": Rank,
                "first": First,
                "unary": Unary,
                "enumerator": Enumerator,
            }
            if node.value in simple:
                return simple[node.value]()
            raise ParseError(f"unknown FP function {node.value!r}", node.pos)
        head = _head(node)
        if head == "pair":
            first, index = _args(node, 2)
            return Pair(self.fp(first), self.fp(index))
        if head == "table":
            rows, default = _args(node, 2)
            entries = []
            for row in _args_of_list(rows):
                key, value = _items(row, 2)
                entries.append((_word(key), _int(value)))
            return Table(tuple(entries), _int(default))
        if head in ("targets", "targets-by-length"):
            rows_node, default_node = _args(node, 2)
            default = _default_values(default_node)
            rows: list[tuple[Node, tuple[int, ...]]] = []
            for row in _args_of_list(rows_node):
                items = _items(row, at_least=2)
                rows.append((items[0], tuple(_int(v) for v in items[1:])))
            if head == "targets":
                return TargetList(tuple((_word(k), values) for k, values in rows), default)
            return targets_by_length({_int(k): list(values) for k, values in rows}, self.alphabet, default)
        if head == "+":
            return Sum(tuple(self.fp(arg) for arg in _args(node, at_least=1)))
        if head == "*":
            return Product(tuple(self.fp(arg) for arg in _args(node, at_least=1)))
        if head == "-":
            (inner,) = _args(node, 1)
            return Negate(self.fp(inner))
        if head == "iprod":
            args = _args(node, at_least=3)
            if len(args) > 4 or (len(args) == 4 and _head(args[3]) != "first"):
                raise ParseError("(iprod F POLY START [first])", node.pos)
            return IndexProduct(self.fp(args[0]), _poly(args[1]), _int(args[2]), on_first=len(args) == 4)
        if head == "at":
            inner, arg = _args(node, 2)
            return At(self.fp(inner), self.fp(arg))
        raise ParseError(f"unknown FP form {head!r}", node.pos)

    def program(self, node: Node) -> GapProgram:
        head = _head(node)
        if head == "base":
            (name,) = _args(node, 1)
            key = _text(name)
            if key not in self.machines:
                raise ParseError(f"undefined machine {key!r}", name.pos)
            return Base(self.machines[key])
        if head == "fp":
            (f,) = _args(node, 1)
            return ConstFP(self.fp(f))
        if head == "neg":
            (child,) = _args(node, 1)
            return Neg(self.program(child))
        if head in ("add", "sub", "mul"):
            left, right = _args(node, 2)
            combinator = {"add": Add, "sub": Sub, "mul": Mul}[head]
            return combinator(self.program(left), self.program(right))
        if head == "prod":
            child, bound, start = _args(node, 3)
            starts = {"from0": 0, "from1": 1}
            if _text(start) not in starts:
                raise ParseError("product range must be from0 or from1", start.pos)
            return PolyProd(self.program(child), _poly(bound), starts[_text(start)])
        if head == "compose":
            child, f = _args(node, 2)
            return ComposeFP(self.program(child), self.fp(f))
        raise ParseError(f"unknown program form {head!r}", node.pos)

    def spec(self, node: Node) -> Spec:
        head = _head(node)
        if head == "spec":
            mode, target, bound = _args(node, 3)
            if _text(mode) not in ("length", "input"):
                raise ParseError("spec mode must be length or input", mode.pos)
            return TargetSpec(
                "length" if _text(mode) == "length" else "input",
                self.fp(target),
                _multiplicity(bound),
            )
        if head == "two-sided":
            accept, reject = _args(node, 2)
            first, second = self.spec(accept), self.spec(reject)
            if not isinstance(first, TargetSpec) or not isinstance(second, TargetSpec):
                raise ParseError("two-sided takes two plain specs", node.pos)
            try:
                return TwoSidedTargetSpec(first, second)
            except GapLabError as e:
                raise ParseError(str(e), node.pos) from e
        raise ParseError(f"unknown spec form {head!r}", node.pos)


def _args_of_list(node: Node) -> tuple[Node, ...]:
    if not isinstance(node, SList):
        raise ParseError("expected a list of rows", node.pos)
    return node.items


def _items(node: Node, count: int | None = None, at_least: int = 0) -> tuple[Node, ...]:
    if not isinstance(node, SList):
        raise ParseError("expected a row", node.pos)
    if (count is not None and len(node.items) != count) or len(node.items) < at_least:
        raise ParseError("malformed row", node.pos)
    return node.items


_PROGRAM_HEADS = {"base", "fp", "neg", "add", "sub", "mul", "prod", "compose"}
_SPEC_HEADS = {"spec", "two-sided"}


def build(nodes: list[Node], alphabet: str = DEFAULT_ALPHABET) -> Document:
    document = Document()
    builder = _Builder(alphabet, document.machines)
    for node in nodes:
        head = _head(node)
        if head == "machine":
            machine = builder.machine(node)
            document.machines[machine.name] = machine
        elif head == "oracle-machine":
            oracle = builder.oracle_machine(node)
            document.oracle_machines[oracle.name] = oracle
        elif head == "function-machine":
            function = builder.function_machine(node)
            document.function_machines[function.name] = function
        elif head in _PROGRAM_HEADS:
            document.items.append(builder.program(node))
        elif head in _SPEC_HEADS:
            document.items.append(builder.spec(node))
        else:
            raise ParseError(f"unknown top-level form {head!r}", node.pos)
    return document


def parse_document(text: str, alphabet: str = DEFAULT_ALPHABET) -> Document:
    return build(read(text), alphabet)


def parse_json_document(text: str, alphabet: str = DEFAULT_ALPHABET) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.pos) from e
    if not isinstance(data, list):
        raise ParseError("a JSON document is an array of forms")
    return build([from_json_value(form) for form in data], alphabet)


def load_document(text: str, alphabet: str = DEFAULT_ALPHABET) -> Document:
    """Parse either form, choosing JSON when the text starts with '['."""
    if text.lstrip().startswith("["):
        return parse_json_document(text, alphabet)
    return parse_document(text, alphabet)


def parse_program(text: str, alphabet: str = DEFAULT_ALPHABET) -> GapProgram:
    programs = load_document(text, alphabet).programs()
    if not programs:
        raise ParseError("document contains no program")
    return programs[-1]


def parse_spec(text: str, alphabet: str = DEFAULT_ALPHABET) -> Spec:
    specs = load_document(text, alphabet).specs()
    if not specs:
        raise ParseError("document contains no spec")
    return specs[-1]


def parse_fp(text: str, alphabet: str = DEFAULT_ALPHABET) -> FPFunc:
    nodes = read(text)
    if len(nodes) != 1:
        raise ParseError("expected exactly one FP expression")
    return _Builder(alphabet, {}).fp(nodes[0])


# Writing


def _sym(value: str) -> Atom:
    return Atom(value)


def _str(value: str) -> Atom:
    return Atom(value, quoted=True)


def _form(*items: Node) -> SList:
    return SList(tuple(items))


def _poly_node(p: NatPoly) -> Atom:
    return _str(str(p).replace(" ", ""))


def unparse_tree(tree: ChoiceTree) -> Node:
    if isinstance(tree, Leaf):
        return _sym("accept" if tree.accept else "reject")
    return _form(_sym("choice"), unparse_tree(tree.left), unparse_tree(tree.right))


def unparse_machine(machine: BaseMachine) -> SList:
    clauses: list[Node] = [
        _sym("machine"),
        _sym(machine.name),
        _form(_sym("time"), _poly_node(machine.time_bound)),
        _form(_sym("default"), unparse_tree(machine.default)),
    ]
    for key in sorted(machine.trees):
        clauses.append(_form(_sym("on"), _str(key), unparse_tree(machine.trees[key])))
    return SList(tuple(clauses))


def unparse_oracle_tree(tree: OracleTree) -> Node:
    if isinstance(tree, Query):
        return _form(_sym("query"), _str(tree.word), unparse_oracle_tree(tree.yes), unparse_oracle_tree(tree.no))
    if isinstance(tree, Leaf):
        return unparse_tree(tree)
    return _form(_sym("choice"), unparse_oracle_tree(tree.left), unparse_oracle_tree(tree.right))  # type: ignore[arg-type]


def unparse_oracle_machine(machine: OracleMachine) -> SList:
    clauses: list[Node] = [
        _sym("oracle-machine"),
        _sym(machine.name),
        _form(_sym("time"), _poly_node(machine.time_bound)),
        SList((_sym("universe"), *(_str(w) for w in machine.universe))),
        _form(_sym("default"), unparse_oracle_tree(machine.default)),
    ]
    for key in sorted(machine.trees):
        clauses.append(_form(_sym("on"), _str(key), unparse_oracle_tree(machine.trees[key])))
    return SList(tuple(clauses))


def unparse_function_tree(tree: FunctionTree) -> Node:
    if isinstance(tree, Value):
        return Atom(tree.value)
    return _form(_sym("probe"), _str(tree.word), unparse_function_tree(tree.yes), unparse_function_tree(tree.no))


def unparse_function_machine(machine: FunctionMachine) -> SList:
    clauses: list[Node] = [
        _sym("function-machine"),
        _sym(machine.name),
        _form(_sym("time"), _poly_node(machine.time_bound)),
        _form(_sym("default"), unparse_function_tree(machine.default)),
    ]
    for key in sorted(machine.trees):
        clauses.append(_form(_sym("on"), _str(key), unparse_function_tree(machine.trees[key])))
    return SList(tuple(clauses))


def unparse_fp(f: FPFunc) -> Node:
    simple = {Length: "len", Index: "index", Rank: "rank", First: "first", Unary: "unary", Enumerator: "enumerator"}
    if type(f) in simple:
        return _sym(simple[type(f)])
    if isinstance(f, Const):
        return Atom(f.value)
    if isinstance(f, Pair):
        return _form(_sym("pair"), unparse_fp(f.first), unparse_fp(f.index))
    if isinstance(f, Table):
        rows = SList(tuple(_form(_str(k), Atom(v)) for k, v in f.entries))
        return _form(_sym("table"), rows, Atom(f.default))
    if isinstance(f, TargetList):
        rows = SList(tuple(SList((_str(k), *(Atom(v) for v in values))) for k, values in f.rows))
        return _form(_sym("targets"), rows, SList((_sym("default"), *(Atom(v) for v in f.default))))
    if isinstance(f, Sum):
        return SList((_sym("+"), *(unparse_fp(t) for t in f.terms)))
    if isinstance(f, Product):
        return SList((_sym("*"), *(unparse_fp(t) for t in f.factors)))
    if isinstance(f, Negate):
        return _form(_sym("-"), unparse_fp(f.inner))
    if isinstance(f, IndexProduct):
        items: list[Node] = [_sym("iprod"), unparse_fp(f.body), _poly_node(f.bound), Atom(f.start)]
        if f.on_first:
            items.append(_sym("first"))
        return SList(tuple(items))
    if isinstance(f, At):
        return _form(_sym("at"), unparse_fp(f.inner), unparse_fp(f.arg))
    raise TypeError(f"cannot serialize FP node {type(f).__name__}")


def unparse_program(prog: GapProgram) -> Node:
    if isinstance(prog, Base):
        return _form(_sym("base"), _sym(prog.machine.name))
    if isinstance(prog, ConstFP):
        return _form(_sym("fp"), unparse_fp(prog.f))
    if isinstance(prog, Neg):
        return _form(_sym("neg"), unparse_program(prog.child))
    if isinstance(prog, (Add, Sub, Mul)):
        name = {Add: "add", Sub: "sub", Mul: "mul"}[type(prog)]
        return _form(_sym(name), unparse_program(prog.left), unparse_program(prog.right))
    if isinstance(prog, PolyProd):
        start = "from0" if prog.start == 0 else "from1"
        return _form(_sym("prod"), unparse_program(prog.child), _poly_node(prog.bound), _sym(start))
    if isinstance(prog, ComposeFP):
        return _form(_sym("compose"), unparse_program(prog.child), unparse_fp(prog.f))
    raise TypeError(f"cannot serialize program node {type(prog).__name__}")


def unparse_spec(spec: Spec) -> Node:
    if isinstance(spec, TwoSidedTargetSpec):
        return _form(_sym("two-sided"), unparse_spec(spec.accept), unparse_spec(spec.reject))
    bound: Node
    if isinstance(spec.multiplicity, ExpBound):
        bound = _form(_sym("exp"), _poly_node(spec.multiplicity.exponent))
    else:
        bound = _poly_node(spec.multiplicity)
    return _form(_sym("spec"), _sym(spec.mode), unparse_fp(spec.target), bound)


def _machines_of(prog: GapProgram) -> list[BaseMachine]:
    found: dict[str, BaseMachine] = {}
    stack = [prog]
    while stack:
        node = stack.pop()
        if isinstance(node, Base):
            found.setdefault(node.machine.name, node.machine)
        elif isinstance(node, (Neg, PolyProd, ComposeFP)):
            stack.append(node.child)
        elif isinstance(node, (Add, Sub, Mul)):
            stack.extend([node.right, node.left])
    return [found[name] for name in sorted(found)]


def unparse_document(items: list[Item]) -> list[Node]:
    machines: dict[str, BaseMachine] = {}
    for item in items:
        if isinstance(item, GapProgram):
            for machine in _machines_of(item):
                machines.setdefault(machine.name, machine)
    nodes: list[Node] = [unparse_machine(machines[name]) for name in sorted(machines)]
    for item in items:
        nodes.append(unparse_program(item) if isinstance(item, GapProgram) else unparse_spec(item))
    return nodes


def _render(node: Node) -> str:
    if isinstance(node, SList):
        return "(" + " ".join(_render(item) for item in node.items) + ")"
    if node.quoted:
        return json.dumps(node.value)
    return str(node.value)


def format_document(items: list[Item]) -> str:
    return "\n".join(_render(node) for node in unparse_document(items)) + "\n"


def format_program(prog: GapProgram) -> str:
    return _render(unparse_program(prog))


def format_spec(spec: Spec) -> str:
    return _render(unparse_spec(spec))


def format_fp(f: FPFunc) -> str:
    return _render(unparse_fp(f))


def document_to_json(items: list[Item]) -> str:
    return json.dumps([to_json_value(node) for node in unparse_document(items)], indent=2)


def format_machines(document: Document) -> str:
    """Oracle and function machines of ``document`` in text form."""
    oracles, functions = document.oracle_machines, document.function_machines
    nodes: list[Node] = [unparse_oracle_machine(oracles[name]) for name in sorted(oracles)]
    nodes.extend(unparse_function_machine(functions[name]) for name in sorted(functions))
    return "\n".join(_render(node) for node in nodes) + "\n"
