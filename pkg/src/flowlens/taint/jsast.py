"""AST node types for the supported JavaScript subset.

Every node carries a 1-based line and 0-based column. Constructs we parse but
do not model precisely (class bodies, computed members, spreads) still appear
in the tree so the analysis can treat them conservatively.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Node:
    line: int
    col: int


# --- expressions ---------------------------------------------------------

@dataclass
class Ident(Node):
    name: str


@dataclass
class Lit(Node):
    value: object
    raw: str


@dataclass
class TemplateLit(Node):
    strings: list[str]
    exprs: list[Node]


@dataclass
class ArrayLit(Node):
    elements: list[Node]


@dataclass
class ObjectProp(Node):
    key: str | None          # None for computed keys
    value: Node
    computed: bool = False
    method: bool = False


@dataclass
class ObjectLit(Node):
    props: list[ObjectProp]


@dataclass
class Member(Node):
    obj: Node
    prop: str | None         # static property name; None when computed
    computed: bool = False
    prop_expr: Node | None = None


@dataclass
class Call(Node):
    callee: Node
    args: list[Node]
    is_new: bool = False


@dataclass
class Assign(Node):
    op: str
    target: Node
    value: Node


@dataclass
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass
class Unary(Node):
    op: str
    arg: Node
    prefix: bool = True


@dataclass
class Cond(Node):
    test: Node
    cons: Node
    alt: Node


@dataclass
class Seq(Node):
    exprs: list[Node]


@dataclass
class Spread(Node):
    arg: Node


# --- binding patterns ----------------------------------------------------

@dataclass
class PatternProp:
    key: str | None           # source property name (None if computed)
    target: "Ident | ObjectPattern | ArrayPattern"
    default: Node | None = None


@dataclass
class ObjectPattern(Node):
    props: list[PatternProp]
    rest: Ident | None = None


@dataclass
class ArrayPattern(Node):
    elements: list["Ident | ObjectPattern | ArrayPattern | None"]
    rest: Ident | None = None


@dataclass
class Param(Node):
    name: str | None           # None for destructuring or rest-only params
    pattern: ObjectPattern | ArrayPattern | None = None
    default: Node | None = None
    rest: bool = False


@dataclass
class FunctionNode(Node):
    name: str | None
    params: list[Param]
    body: "Block | Node"       # Block, or an expression for arrow shorthand
    is_arrow: bool = False
    is_async: bool = False
    expression_body: bool = False
    doc: str | None = None
    param_docs: dict[str, str] = field(default_factory=dict)


# --- statements ----------------------------------------------------------

@dataclass
class Block(Node):
    stmts: list[Node]


@dataclass
class Program(Node):
    body: list[Node]


@dataclass
class Declarator:
    target: Ident | ObjectPattern | ArrayPattern
    init: Node | None


@dataclass
class VarDecl(Node):
    kind: str                  # var | let | const
    decls: list[Declarator]


@dataclass
class ExprStmt(Node):
    expr: Node


@dataclass
class If(Node):
    test: Node
    then: Node
    alt: Node | None


@dataclass
class For(Node):
    init: Node | None
    test: Node | None
    update: Node | None
    body: Node


@dataclass
class ForIn(Node):
    decl_kind: str | None      # var/let/const or None for bare targets
    target: Node
    iterable: Node
    body: Node
    of: bool = False


@dataclass
class While(Node):
    test: Node
    body: Node


@dataclass
class DoWhile(Node):
    body: Node
    test: Node


@dataclass
class Return(Node):
    arg: Node | None


@dataclass
class Throw(Node):
    arg: Node


@dataclass
class Try(Node):
    block: Block
    catch_param: str | None
    handler: Block | None
    finalizer: Block | None


@dataclass
class SwitchCase:
    test: Node | None
    body: list[Node]


@dataclass
class Switch(Node):
    disc: Node
    cases: list[SwitchCase]


@dataclass
class With(Node):
    obj: Node
    body: Node


@dataclass
class Break(Node):
    pass


@dataclass
class Continue(Node):
    pass


@dataclass
class Empty(Node):
    pass


@dataclass
class ClassMethod:
    name: str | None
    func: FunctionNode


@dataclass
class ClassDecl(Node):
    name: str | None
    superclass: Node | None
    methods: list[ClassMethod]


@dataclass
class ExportNamed(Node):
    """export function/const ... or export { a, b as c }."""
    decl: Node | None
    specifiers: list[tuple[str, str]]  # (local, exported)


@dataclass
class ExportDefault(Node):
    decl: Node


@dataclass
class Import(Node):
    source: str
