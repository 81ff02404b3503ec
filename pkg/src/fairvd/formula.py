"""MSO1 formulas over (labeled) graphs.

Concrete syntax is S-expressions::

    (forall u (forall v (implies (adj u v) (or (in u X) (in v X)))))

Keywords: ``exists forall`` bind vertex variables, ``existsS forallS`` bind
set variables; ``and or not implies iff`` are the connectives (``and``/``or``
are n-ary); atoms are ``(adj x y)``, ``(= x y)``, ``(in x X)``,
``(label L x)`` and the constants ``true``/``false``.  Free set variables are
declared either through the ``free`` argument of :func:`parse` or a header
line ``free X1 X2`` in formula files.

Evaluation is brute force (vertex quantifiers over ``V``, set quantifiers over
all ``2^|V|`` subsets) with a hard budget on atom evaluations.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Union

from .errors import (FormulaSyntaxError, InvalidInputError, ResourceLimitError,
                     UnboundVariableError)
from .graph import Graph, LabeledGraph, mask_of

DEFAULT_ATOM_BUDGET = 10**9


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Adj:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class In:
    x: str
    set_var: str


@dataclass(frozen=True)
class Label:
    label: str
    x: str


@dataclass(frozen=True)
class Not:
    arg: "Node"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Iff:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Quant:
    """Quantifier node; ``kind`` is one of exists/forall/existsS/forallS."""
    kind: str
    var: str
    body: "Node"

    @property
    def is_set(self) -> bool:
        return self.kind.endswith("S")

    @property
    def is_exists(self) -> bool:
        return self.kind.startswith("exists")


Node = Union[Const, Adj, Eq, In, Label, Not, And, Or, Implies, Iff, Quant]

_QUANTIFIERS = ("exists", "forall", "existsS", "forallS")


@dataclass(frozen=True)
class Formula:
    root: Node
    free: tuple[str, ...] = ()

    @property
    def q_s(self) -> int:
        return count_quantifiers(self)[0]

    @property
    def q_v(self) -> int:
        return count_quantifiers(self)[1]

    def is_sentence(self) -> bool:
        return not self.free

    def to_text(self) -> str:
        return to_sexpr(self.root)

    def __str__(self):
        return self.to_text()


def _children(node: Node) -> tuple:
    if isinstance(node, (And, Or)):
        return node.args
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (Implies, Iff)):
        return (node.left, node.right)
    if isinstance(node, Quant):
        return (node.body,)
    return ()


def count_quantifiers(f: Formula | Node) -> tuple[int, int]:
    """Syntactic ``(q_S, q_v)``: occurrences of set / vertex quantifiers."""
    root = f.root if isinstance(f, Formula) else f
    qs = qv = 0
    stack = [root]
    while stack:
        node = stack.pop()
        if isinstance(node, Quant):
            if node.is_set:
                qs += 1
            else:
                qv += 1
        stack.extend(_children(node))
    return qs, qv


def to_sexpr(node: Node) -> str:
    if isinstance(node, Const):
        return "true" if node.value else "false"
    if isinstance(node, Adj):
        return f"(adj {node.x} {node.y})"
    if isinstance(node, Eq):
        return f"(= {node.x} {node.y})"
    if isinstance(node, In):
        return f"(in {node.x} {node.set_var})"
    if isinstance(node, Label):
        return f"(label {node.label} {node.x})"
    if isinstance(node, Not):
        return f"(not {to_sexpr(node.arg)})"
    if isinstance(node, (And, Or)):
        op = "and" if isinstance(node, And) else "or"
        return "(" + " ".join([op, *(to_sexpr(a) for a in node.args)]) + ")"
    if isinstance(node, Implies):
        return f"(implies {to_sexpr(node.left)} {to_sexpr(node.right)})"
    if isinstance(node, Iff):
        return f"(iff {to_sexpr(node.left)} {to_sexpr(node.right)})"
    if isinstance(node, Quant):
        return f"({node.kind} {node.var} {to_sexpr(node.body)})"
    raise TypeError(f"not a formula node: {node!r}")


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"[()]|[^\s()]+")


class _Sym(str):
    line: int
    col: int


def _tokenize(text: str):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), 1):
        for m in _TOKEN.finditer(line.split("#", 1)[0]):
            tokens.append((m.group(), lineno, m.start() + 1))
    return tokens


def _read(tokens, pos):
    """Read one S-expression; returns (tree, next_pos).  Lists carry their
    opening position as a ``(line, col)`` prefix element."""
    if pos >= len(tokens):
        last = tokens[-1] if tokens else ("", 1, 1)
        raise FormulaSyntaxError("unexpected end of input", last[1], last[2])
    tok, line, col = tokens[pos]
    if tok == ")":
        raise FormulaSyntaxError("unexpected ')'", line, col)
    if tok != "(":
        sym = _Sym(tok)
        sym.line, sym.col = line, col
        return sym, pos + 1
    items = [(line, col)]
    pos += 1
    while True:
        if pos >= len(tokens):
            raise FormulaSyntaxError("unclosed '('", line, col)
        if tokens[pos][0] == ")":
            return items, pos + 1
        item, pos = _read(tokens, pos)
        items.append(item)


_ARITY = {"not": 1, "implies": 2, "iff": 2, "adj": 2, "=": 2, "in": 2, "label": 2}


def _build(tree, scope: dict[str, str]) -> Node:
    if isinstance(tree, _Sym):
        if tree == "true":
            return Const(True)
        if tree == "false":
            return Const(False)
        raise FormulaSyntaxError(f"unexpected symbol {str(tree)!r}", tree.line, tree.col)
    (line, col), *items = tree
    if not items or not isinstance(items[0], _Sym):
        raise FormulaSyntaxError("expected operator", line, col)
    op, args = str(items[0]), items[1:]

    def need_symbol(a):
        if not isinstance(a, _Sym):
            raise FormulaSyntaxError(f"'{op}' expects a name here", a[0][0], a[0][1])
        return str(a)

    def var(a, kind):
        name = need_symbol(a)
        if name not in scope:
            raise UnboundVariableError(name)
        if scope[name] != kind:
            want = "vertex" if kind == "v" else "set"
            raise FormulaSyntaxError(f"{name!r} is not a {want} variable", a.line, a.col)
        return name

    if op in _QUANTIFIERS:
        if len(args) != 2:
            raise FormulaSyntaxError(f"'{op}' expects a variable and a body", line, col)
        name = need_symbol(args[0])
        if name in _ARITY or name in _QUANTIFIERS or name in ("and", "or", "true", "false"):
            raise FormulaSyntaxError(f"reserved word {name!r} used as variable", line, col)
        inner = dict(scope)
        inner[name] = "S" if op.endswith("S") else "v"
        return Quant(op, name, _build(args[1], inner))
    if op in ("and", "or"):
        if not args:
            raise FormulaSyntaxError(f"'{op}' needs at least one operand", line, col)
        parts = tuple(_build(a, scope) for a in args)
        return And(parts) if op == "and" else Or(parts)
    if op not in _ARITY:
        raise FormulaSyntaxError(f"unknown operator {op!r}", line, col)
    if len(args) != _ARITY[op]:
        raise FormulaSyntaxError(f"'{op}' expects {_ARITY[op]} operands", line, col)
    if op == "not":
        return Not(_build(args[0], scope))
    if op == "implies":
        return Implies(_build(args[0], scope), _build(args[1], scope))
    if op == "iff":
        return Iff(_build(args[0], scope), _build(args[1], scope))
    if op == "adj":
        return Adj(var(args[0], "v"), var(args[1], "v"))
    if op == "=":
        return Eq(var(args[0], "v"), var(args[1], "v"))
    if op == "in":
        return In(var(args[0], "v"), var(args[1], "S"))
    return Label(need_symbol(args[0]), var(args[1], "v"))


def parse(text: str, free: Iterable[str] | None = None) -> Formula:
    """Parse formula text; free set variables come from ``free`` or a
    ``free ...`` header line."""
    tokens = _tokenize(text)
    header = None
    if tokens and tokens[0][0] == "free":
        hline = tokens[0][1]
        header = [t for t, ln, _ in tokens[1:] if ln == hline]
        tokens = [t for t in tokens if t[1] != hline]
    if free is not None and header is not None and list(free) != header:
        raise InvalidInputError(f"free variables {list(free)} disagree with header {header}")
    names = tuple(free if free is not None else (header or ()))
    if len(set(names)) != len(names):
        raise InvalidInputError(f"duplicate free variable in {names}")
    if not tokens:
        raise FormulaSyntaxError("empty formula", 1, 1)
    tree, pos = _read(tokens, 0)
    if pos != len(tokens):
        _, line, col = tokens[pos]
        raise FormulaSyntaxError("trailing input after formula", line, col)
    return Formula(_build(tree, {name: "S" for name in names}), names)


def format_formula_file(f: Formula) -> str:
    head = f"free {' '.join(f.free)}\n" if f.free else ""
    return head + f.to_text() + "\n"


def read_formula(path: str | Path) -> Formula:
    return parse(Path(path).read_text(encoding="utf-8"))


def write_formula(path: str | Path, f: Formula) -> None:
    Path(path).write_text(format_formula_file(f), encoding="utf-8")


# --- evaluation --------------------------------------------------------------
#
# Two routes.  Formulas whose worst-case atom count fits the budget are
# translated into a Python generator expression and compiled once; others
# go through a closure interpreter that counts atoms as it goes and raises
# when the budget runs out.

class _Ctx:
    def __init__(self, n, masks, labels, budget):
        self.n = n
        self.masks = masks
        self.labels = labels
        self.budget = budget
        self.atoms = 0


def atom_bound(node: Node, n: int) -> int:
    """Atom evaluations in the worst case (no short-circuiting) on ``n`` vertices."""
    if isinstance(node, Formula):
        node = node.root
    if isinstance(node, (Adj, Eq, In, Label)):
        return 1
    if isinstance(node, Quant):
        return (1 << n if node.is_set else n) * atom_bound(node.body, n)
    return sum(atom_bound(c, n) for c in _children(node))


def _compile(node: Node, slots: dict[str, int], ctx: _Ctx):
    # every closure takes the environment list; vertex slots hold ids,
    # set slots hold bitmasks
    if isinstance(node, Const):
        value = node.value
        return lambda env: value

    if isinstance(node, (Adj, Eq, In, Label)):
        budget = ctx.budget

        def tick():
            ctx.atoms += 1
            if ctx.atoms > budget:
                raise ResourceLimitError(f"atom budget {budget} exceeded")

        if isinstance(node, Adj):
            sx, sy, masks = slots[node.x], slots[node.y], ctx.masks

            def adj(env):
                tick()
                return (masks[env[sx]] >> env[sy]) & 1 == 1
            return adj
        if isinstance(node, Eq):
            sx, sy = slots[node.x], slots[node.y]

            def eq(env):
                tick()
                return env[sx] == env[sy]
            return eq
        if isinstance(node, In):
            sx, ss = slots[node.x], slots[node.set_var]

            def member(env):
                tick()
                return (env[ss] >> env[sx]) & 1 == 1
            return member
        sx, lm = slots[node.x], ctx.labels.get(node.label, 0)

        def label(env):
            tick()
            return (lm >> env[sx]) & 1 == 1
        return label

    if isinstance(node, Not):
        a = _compile(node.arg, slots, ctx)
        return lambda env: not a(env)
    if isinstance(node, And):
        parts = [_compile(a, slots, ctx) for a in node.args]
        if len(parts) == 2:
            p, q = parts
            return lambda env: p(env) and q(env)
        return lambda env: all(p(env) for p in parts)
    if isinstance(node, Or):
        parts = [_compile(a, slots, ctx) for a in node.args]
        if len(parts) == 2:
            p, q = parts
            return lambda env: p(env) or q(env)
        return lambda env: any(p(env) for p in parts)
    if isinstance(node, Implies):
        p, q = _compile(node.left, slots, ctx), _compile(node.right, slots, ctx)
        return lambda env: (not p(env)) or q(env)
    if isinstance(node, Iff):
        p, q = _compile(node.left, slots, ctx), _compile(node.right, slots, ctx)
        return lambda env: p(env) == q(env)
    if isinstance(node, Quant):
        inner = dict(slots)
        # a fresh slot even when the name shadows an outer binding
        slot = max(slots.values(), default=-1) + 1
        inner[node.var] = slot
        body = _compile(node.body, inner, ctx)
        domain = range(1 << ctx.n) if node.is_set else range(ctx.n)
        if node.is_exists:
            def exists(env):
                for value in domain:
                    env[slot] = value
                    if body(env):
                        return True
                return False
            return exists

        def forall(env):
            for value in domain:
                env[slot] = value
                if not body(env):
                    return False
            return True
        return forall
    raise TypeError(f"not a formula node: {node!r}")


def _depth(node: Node) -> int:
    return 1 + max((_depth(c) for c in _children(node)), default=0)


def _source(node: Node, names: dict[str, str], labels: dict[str, str], fresh) -> str:
    if isinstance(node, Const):
        return "True" if node.value else "False"
    if isinstance(node, Adj):
        return f"((M[{names[node.x]}] >> {names[node.y]}) & 1 == 1)"
    if isinstance(node, Eq):
        return f"({names[node.x]} == {names[node.y]})"
    if isinstance(node, In):
        return f"(({names[node.set_var]} >> {names[node.x]}) & 1 == 1)"
    if isinstance(node, Label):
        return f"(({labels.setdefault(node.label, f'L{len(labels)}')} >> {names[node.x]}) & 1 == 1)"
    if isinstance(node, Not):
        return f"(not {_source(node.arg, names, labels, fresh)})"
    if isinstance(node, (And, Or)):
        op = " and " if isinstance(node, And) else " or "
        return "(" + op.join(_source(a, names, labels, fresh) for a in node.args) + ")"
    if isinstance(node, Implies):
        return (f"((not {_source(node.left, names, labels, fresh)}) or "
                f"{_source(node.right, names, labels, fresh)})")
    if isinstance(node, Iff):
        return (f"({_source(node.left, names, labels, fresh)} == "
                f"{_source(node.right, names, labels, fresh)})")
    if isinstance(node, Quant):
        var = next(fresh)
        inner = dict(names)
        inner[node.var] = var
        body = _source(node.body, inner, labels, fresh)
        fn = "any" if node.is_exists else "all"
        domain = "RS" if node.is_set else "RV"
        return f"{fn}({body} for {var} in {domain})"
    raise TypeError(f"not a formula node: {node!r}")


def _generate(f: Formula, n: int, masks, label_masks: dict[str, int]):
    """Compile ``f`` to a Python function of its free-set bitmasks."""
    params = [f"S{i}" for i in range(len(f.free))]
    names = dict(zip(f.free, params))
    labels: dict[str, str] = {}
    fresh = (f"x{i}" for i in itertools.count())
    body = _source(f.root, names, labels, fresh)
    src = f"def _fn({', '.join(params)}):\n    return bool({body})\n"
    space = {"M": masks, "RV": range(n), "RS": range(1 << n)}
    for name, var in labels.items():
        space[var] = label_masks.get(name, 0)
    exec(compile(src, "<formula>", "exec"), space)
    return space["_fn"]


class Evaluator:
    """Compiled formula bound to one graph, for evaluating many interpretations
    of the free variables without recompiling.

    The budget applies to each call separately.
    """

    def __init__(self, g: Graph | LabeledGraph, f: Formula, budget: int = DEFAULT_ATOM_BUDGET,
                 method: str = "auto"):
        if method not in ("auto", "codegen", "closure"):
            raise InvalidInputError(f"unknown evaluation method {method!r}")
        lg = g if isinstance(g, LabeledGraph) else LabeledGraph(g)
        self.formula = f
        n, masks = lg.graph.n, lg.graph.masks
        label_masks = {name: mask_of(m) for name, m in lg.labels.items()}
        self._nfree = len(f.free)
        self._fast = None
        if method == "codegen" or (method == "auto" and atom_bound(f, n) <= budget):
            try:
                self._fast = _generate(f, n, masks, label_masks)
            except (RecursionError, SyntaxError, MemoryError):
                if method == "codegen":
                    raise
        self._ctx = _Ctx(n, masks, label_masks, budget)
        if self._fast is None:
            self._fn = _compile(f.root, {name: i for i, name in enumerate(f.free)}, self._ctx)
            self._width = self._nfree + _depth(f.root)

    @property
    def method(self) -> str:
        return "codegen" if self._fast is not None else "closure"

    def __call__(self, *set_masks: int) -> bool:
        """Evaluate with free variables bound to the given bitmasks (in order)."""
        if len(set_masks) != self._nfree:
            raise InvalidInputError(f"expected {self._nfree} set(s), got {len(set_masks)}")
        if self._fast is not None:
            return self._fast(*set_masks)
        self._ctx.atoms = 0
        env = list(set_masks) + [0] * (self._width - self._nfree)
        return self._fn(env)


def evaluate(g: Graph | LabeledGraph, f: Formula,
             itp: Mapping[str, Iterable[int]] | None = None,
             budget: int = DEFAULT_ATOM_BUDGET, method: str = "auto") -> bool:
    """Truth of ``f`` in ``g`` with free set variables bound by ``itp``.

    Raises :class:`ResourceLimitError` once more than ``budget`` atoms have
    been evaluated.
    """
    lg = g if isinstance(g, LabeledGraph) else LabeledGraph(g)
    itp = itp or {}
    missing = [x for x in f.free if x not in itp]
    if missing:
        raise InvalidInputError(f"no interpretation for free variable(s) {missing}")
    sets = [mask_of(lg.graph.check_set(itp[name])) for name in f.free]
    return Evaluator(lg, f, budget, method)(*sets)
