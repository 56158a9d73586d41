"""Taint propagation over the parsed AST.

The engine is deliberately overapproximate: any expression containing a
tainted subexpression is tainted, containers are tainted by their elements,
and calls to unknown functions taint their result whenever an argument or the
receiver is tainted. Intra-file calls bind argument taint to the callee's
parameters and propagate return taint; everything runs to a fixpoint, so the
tainted set only ever grows.

Integrity sources are the parameters of exported functions plus depth-1
properties of those parameters read in the body. Logging sources are all
variables and properties, reported only when they reach a logging sink.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from flowlens.flows import (
    FlowRecord,
    QueryFamily,
    SinkType,
    SourceKind,
    flow_id,
)
from flowlens.taint import jsast as ast
from flowlens.taint.jsparse import iter_nodes, parse_module
from flowlens.taint.sinks import UNKNOWN_SEGMENT, SinkCatalog, SinkSpec

_SINK_ORDER = {s: i for i, s in enumerate(SinkType)}


@dataclass(frozen=True)
class SourceLabel:
    """One taint source; flows are reported per (label, sink type)."""

    kind: SourceKind
    name: str
    line: int
    function_name: str | None = None
    doc_comment: str | None = None
    order: int = 0


@dataclass
class Scope:
    id: int
    node: ast.Node                      # Program or FunctionNode
    parent: "Scope | None"
    declared: set[str] = field(default_factory=set)
    decl_lines: dict[str, int] = field(default_factory=dict)
    fn_bindings: dict[str, ast.FunctionNode] = field(default_factory=dict)


def _declare(scope: Scope, name: str, line: int) -> None:
    scope.declared.add(name)
    if name not in scope.decl_lines:
        scope.decl_lines[name] = line


def _collect_pattern_names(target: ast.Node) -> list[tuple[str, int]]:
    names: list[tuple[str, int]] = []
    if isinstance(target, ast.Ident):
        names.append((target.name, target.line))
    elif isinstance(target, ast.ObjectPattern):
        for prop in target.props:
            names.extend(_collect_pattern_names(prop.target))
        if target.rest is not None:
            names.append((target.rest.name, target.rest.line))
    elif isinstance(target, ast.ArrayPattern):
        for element in target.elements:
            if element is not None:
                names.extend(_collect_pattern_names(element))
        if target.rest is not None:
            names.append((target.rest.name, target.rest.line))
    return names


def build_scopes(tree: ast.Program) -> tuple[list[Scope], dict[int, Scope]]:
    """Create one scope per function (plus the module scope) and collect the
    names each scope declares. Block scoping is flattened into the enclosing
    function, which only ever merges taint (conservative)."""
    scopes: list[Scope] = []
    scope_of_fn: dict[int, Scope] = {}

    def visit_scope(owner: ast.Node, parent: Scope | None) -> Scope:
        scope = Scope(id=len(scopes), node=owner, parent=parent)
        scopes.append(scope)
        scope_of_fn[id(owner)] = scope
        if isinstance(owner, ast.FunctionNode):
            for param in owner.params:
                if param.name is not None:
                    _declare(scope, param.name, param.line)
                elif param.pattern is not None:
                    for name, line in _collect_pattern_names(param.pattern):
                        _declare(scope, name, line)
            body = owner.body if isinstance(owner.body, ast.Block) else None
            stmts = body.stmts if body else []
            if owner.expression_body:
                walk_stmts([], scope)  # nothing to declare in an expression
                walk_expr_for_functions(owner.body, scope)
            else:
                walk_stmts(stmts, scope)
        else:
            walk_stmts(owner.body, scope)
        return scope

    def walk_expr_for_functions(expr: ast.Node, scope: Scope) -> None:
        for node in iter_nodes(expr):
            if isinstance(node, ast.FunctionNode):
                visit_scope(node, scope)

    def walk_stmts(stmts: list[ast.Node], scope: Scope) -> None:
        for stmt in stmts:
            walk_stmt(stmt, scope)

    def walk_stmt(stmt: ast.Node, scope: Scope) -> None:
        if isinstance(stmt, ast.FunctionNode):
            if stmt.name:
                _declare(scope, stmt.name, stmt.line)
                scope.fn_bindings[stmt.name] = stmt
            visit_scope(stmt, scope)
        elif isinstance(stmt, ast.VarDecl):
            for decl in stmt.decls:
                for name, line in _collect_pattern_names(decl.target):
                    _declare(scope, name, line)
                if isinstance(decl.target, ast.Ident) and \
                        isinstance(decl.init, ast.FunctionNode):
                    scope.fn_bindings[decl.target.name] = decl.init
                if decl.init is not None:
                    walk_value(decl.init, scope)
        elif isinstance(stmt, (ast.ExportNamed, ast.ExportDefault)):
            inner = stmt.decl
            if inner is not None:
                walk_stmt(inner, scope)
        elif isinstance(stmt, ast.Block):
            walk_stmts(stmt.stmts, scope)
        elif isinstance(stmt, ast.If):
            walk_value(stmt.test, scope)
            walk_stmt(stmt.then, scope)
            if stmt.alt:
                walk_stmt(stmt.alt, scope)
        elif isinstance(stmt, ast.For):
            if stmt.init is not None:
                walk_stmt(stmt.init, scope) if isinstance(stmt.init, ast.VarDecl) \
                    else walk_value(stmt.init, scope)
            for part in (stmt.test, stmt.update):
                if part is not None:
                    walk_value(part, scope)
            walk_stmt(stmt.body, scope)
        elif isinstance(stmt, ast.ForIn):
            for name, line in _collect_pattern_names(stmt.target):
                _declare(scope, name, line)
            walk_value(stmt.iterable, scope)
            walk_stmt(stmt.body, scope)
        elif isinstance(stmt, (ast.While, ast.DoWhile)):
            walk_value(stmt.test, scope)
            walk_stmt(stmt.body, scope)
        elif isinstance(stmt, ast.Try):
            walk_stmts(stmt.block.stmts, scope)
            if stmt.catch_param:
                _declare(scope, stmt.catch_param, stmt.block.line)
            if stmt.handler:
                walk_stmts(stmt.handler.stmts, scope)
            if stmt.finalizer:
                walk_stmts(stmt.finalizer.stmts, scope)
        elif isinstance(stmt, ast.Switch):
            walk_value(stmt.disc, scope)
            for case in stmt.cases:
                if case.test is not None:
                    walk_value(case.test, scope)
                walk_stmts(case.body, scope)
        elif isinstance(stmt, ast.With):
            walk_value(stmt.obj, scope)
            walk_stmt(stmt.body, scope)
        elif isinstance(stmt, ast.ClassDecl):
            if stmt.name:
                _declare(scope, stmt.name, stmt.line)
            for method in stmt.methods:
                visit_scope(method.func, scope)
        elif isinstance(stmt, (ast.ExprStmt, ast.Return, ast.Throw)):
            arg = stmt.expr if isinstance(stmt, ast.ExprStmt) else stmt.arg
            if arg is not None:
                walk_value(arg, scope)

    def walk_value(expr: ast.Node, scope: Scope) -> None:
        if isinstance(expr, ast.FunctionNode):
            visit_scope(expr, scope)
            return
        if isinstance(expr, ast.ClassDecl):
            for method in expr.methods:
                visit_scope(method.func, scope)
            return
        import dataclasses
        for f in dataclasses.fields(expr):
            value = getattr(expr, f.name)
            items = value if isinstance(value, (list, tuple)) else [value]
            for item in items:
                if isinstance(item, ast.Node):
                    walk_value(item, scope)
                elif isinstance(item, (ast.ObjectProp, ast.PatternProp)):
                    if isinstance(item.value if isinstance(item, ast.ObjectProp)
                                  else item.target, ast.Node):
                        walk_value(item.value if isinstance(item, ast.ObjectProp)
                                   else item.target, scope)

    module_scope = visit_scope(tree, None)
    return scopes, scope_of_fn


def resolve(scope: Scope, name: str) -> Scope:
    """Nearest enclosing scope declaring ``name``; free names bind at module
    scope."""
    current: Scope | None = scope
    while current is not None:
        if name in current.declared:
            return current
        if current.parent is None:
            return current
        current = current.parent
    raise AssertionError("unreachable")


# --- exports -------------------------------------------------------------

@dataclass(frozen=True)
class ExportedFunction:
    name: str
    node: ast.FunctionNode


def _resolve_function(value: ast.Node | None,
                      candidates: dict[str, ast.FunctionNode]
                      ) -> ast.FunctionNode | None:
    if isinstance(value, ast.FunctionNode):
        return value
    if isinstance(value, ast.Ident):
        return candidates.get(value.name)
    return None


def _is_exports_target(node: ast.Node) -> str | None:
    """Return the exported name for `exports.f = ...` / `module.exports.f =`
    targets, "" for whole-module `module.exports = ...`."""
    if isinstance(node, ast.Member) and not node.computed and node.prop:
        obj = node.obj
        if isinstance(obj, ast.Ident) and obj.name == "exports":
            return node.prop
        if isinstance(obj, ast.Member) and not obj.computed and \
                isinstance(obj.obj, ast.Ident) and obj.obj.name == "module" \
                and obj.prop == "exports":
            return node.prop
        if isinstance(obj, ast.Ident) and obj.name == "module" and \
                node.prop == "exports":
            return ""
    return None


def find_exports(tree: ast.Program) -> list[ExportedFunction]:
    candidates: dict[str, ast.FunctionNode] = {}
    for stmt in tree.body:
        inner = stmt.decl if isinstance(stmt, (ast.ExportNamed,
                                               ast.ExportDefault)) else stmt
        if isinstance(inner, ast.FunctionNode) and inner.name:
            candidates[inner.name] = inner
        elif isinstance(inner, ast.VarDecl):
            for decl in inner.decls:
                if isinstance(decl.target, ast.Ident) and \
                        isinstance(decl.init, ast.FunctionNode):
                    candidates[decl.target.name] = decl.init

    exports: list[ExportedFunction] = []
    seen: set[tuple[str, int]] = set()

    def add(name: str, fn: ast.FunctionNode | None) -> None:
        if fn is None:
            return
        key = (name, id(fn))
        if key in seen:
            return
        seen.add(key)
        exports.append(ExportedFunction(name, fn))

    for stmt in tree.body:
        if isinstance(stmt, ast.ExportNamed):
            if isinstance(stmt.decl, ast.FunctionNode) and stmt.decl.name:
                add(stmt.decl.name, stmt.decl)
            elif isinstance(stmt.decl, ast.VarDecl):
                for decl in stmt.decl.decls:
                    if isinstance(decl.target, ast.Ident):
                        add(decl.target.name,
                            _resolve_function(decl.init, candidates))
            for local, exported in stmt.specifiers:
                add(exported, candidates.get(local))
        elif isinstance(stmt, ast.ExportDefault):
            fn = _resolve_function(stmt.decl, candidates)
            if fn is not None:
                add(fn.name or "default", fn)
        elif isinstance(stmt, ast.ExprStmt) and \
                isinstance(stmt.expr, ast.Assign) and stmt.expr.op == "=":
            target_name = _is_exports_target(stmt.expr.target)
            if target_name is None:
                continue
            value = stmt.expr.value
            if target_name == "":
                fn = _resolve_function(value, candidates)
                if fn is not None:
                    add(fn.name or "default", fn)
                elif isinstance(value, ast.ObjectLit):
                    for prop in value.props:
                        if prop.key is None:
                            continue
                        add(prop.key, _resolve_function(prop.value, candidates))
            else:
                add(target_name, _resolve_function(value, candidates))
    return exports


# --- source discovery ----------------------------------------------------

def _function_doc_for(param: str, fn: ast.FunctionNode) -> str | None:
    """Parameter doc and enclosing-function doc, newline-joined when both
    exist."""
    parts = []
    pdoc = fn.param_docs.get(param)
    if pdoc:
        parts.append(pdoc)
    if fn.doc:
        parts.append(fn.doc)
    return "\n".join(parts) if parts else None


def _property_reads(fn: ast.FunctionNode, param: str) -> list[tuple[str, int]]:
    """Syntactic depth-1 property reads of ``param`` in the function body,
    in source order, respecting shadowing by nested functions. Destructuring
    a parameter counts as reading the destructured keys."""
    reads: list[tuple[str, int]] = []
    seen: set[str] = set()

    def add(prop: str, line: int) -> None:
        if prop not in seen:
            seen.add(prop)
            reads.append((prop, line))

    def visit(node: ast.Node, shadowed: bool, write_target: ast.Node | None
              ) -> None:
        if isinstance(node, ast.FunctionNode):
            inner_shadow = shadowed or any(
                p.name == param for p in node.params) or any(
                name == param
                for p in node.params if p.pattern is not None
                for name, _ in _collect_pattern_names(p.pattern))
            body = node.body
            visit(body, inner_shadow, None)
            return
        if isinstance(node, ast.Call):
            # `param.method(...)`: the method slot is not a data property.
            callee = node.callee
            if isinstance(callee, ast.Member) and not callee.computed and \
                    isinstance(callee.obj, ast.Ident) and \
                    callee.obj.name == param:
                for arg in node.args:
                    visit(arg, shadowed, None)
                return
            visit(callee, shadowed, None)
            for arg in node.args:
                visit(arg, shadowed, None)
            return
        if isinstance(node, ast.Member) and not node.computed and node.prop \
                and isinstance(node.obj, ast.Ident) \
                and node.obj.name == param and not shadowed \
                and node is not write_target:
            add(node.prop, node.line)
        if isinstance(node, ast.Assign):
            target = node.target if node.op == "=" else None
            visit(node.value, shadowed, None)
            if isinstance(node.target, ast.Member):
                if node.target is not target:
                    visit(node.target, shadowed, None)
                else:
                    visit(node.target.obj, shadowed, None)
                    if node.target.prop_expr is not None:
                        visit(node.target.prop_expr, shadowed, None)
            else:
                visit(node.target, shadowed, None)
            return
        if isinstance(node, ast.VarDecl):
            for decl in node.decls:
                if isinstance(decl.target, ast.ObjectPattern) and \
                        isinstance(decl.init, ast.Ident) and \
                        decl.init.name == param and not shadowed:
                    for prop in decl.target.props:
                        if prop.key is not None:
                            add(prop.key, decl.target.line)
                if decl.init is not None:
                    visit(decl.init, shadowed, None)
            return
        import dataclasses
        if isinstance(node, (ast.Node, ast.Declarator, ast.ObjectProp,
                             ast.SwitchCase, ast.ClassMethod,
                             ast.PatternProp)):
            for f in dataclasses.fields(node):
                value = getattr(node, f.name)
                items = value if isinstance(value, (list, tuple)) else [value]
                for item in items:
                    if isinstance(item, (ast.Node, ast.Declarator,
                                         ast.ObjectProp, ast.SwitchCase,
                                         ast.ClassMethod, ast.PatternProp)):
                        visit(item, shadowed, None)

    visit(fn.body, False, None)
    return reads


def find_sources(tree: ast.Program, family: QueryFamily,
                 catalog: SinkCatalog | None = None) -> list[SourceLabel]:
    """Source descriptors for one query family.

    Integrity sources are static. Logging sources are the variables and
    properties that actually reach a logging call, so they require running
    the propagation (a catalog is needed for the logging candidates).
    """
    if family is QueryFamily.INTEGRITY:
        labels: list[SourceLabel] = []
        order = 0
        for export in find_exports(tree):
            fn = export.node
            for param in fn.params:
                if param.name is None:
                    continue
                labels.append(SourceLabel(
                    kind=SourceKind.API_PARAM, name=param.name,
                    line=param.line, function_name=export.name,
                    doc_comment=_function_doc_for(param.name, fn),
                    order=order))
                order += 1
                for prop, line in _property_reads(fn, param.name):
                    labels.append(SourceLabel(
                        kind=SourceKind.PARAM_PROPERTY, name=prop, line=line,
                        function_name=export.name,
                        doc_comment=_function_doc_for(
                            f"{param.name}.{prop}", fn) or
                        (fn.doc or None),
                        order=order))
                    order += 1
        return labels
    if catalog is None:
        raise ValueError("logging source discovery requires a sink catalog")
    engine = _Engine(tree, family, catalog)
    engine.run()
    hit = {label for (label, _sink) in engine.sink_hits}
    return sorted(hit, key=lambda lab: lab.order)


# --- propagation engine --------------------------------------------------

@dataclass
class TaintState:
    """Monotone propagation state: label sets only ever grow."""

    var_taint: dict[tuple[int, str], set[SourceLabel]] = field(
        default_factory=dict)
    prop_taint: dict[tuple[int, str, str], set[SourceLabel]] = field(
        default_factory=dict)
    fn_returns: dict[int, set[SourceLabel]] = field(default_factory=dict)


_MAX_PASSES = 500


class _Engine:
    def __init__(self, tree: ast.Program, family: QueryFamily,
                 catalog: SinkCatalog,
                 integrity_sources: list[SourceLabel] | None = None):
        self.tree = tree
        self.family = family
        self.catalog = catalog
        self.specs = catalog.for_family(family)
        self.scopes, self.scope_of_fn = build_scopes(tree)
        self.state = TaintState()
        self.sink_hits: dict[tuple[SourceLabel, SinkType], int] = {}
        self.changed = False
        self.order = 0
        self.conf_var_labels: dict[tuple[int, str], SourceLabel] = {}
        self.conf_prop_labels: dict[str, SourceLabel] = {}
        self.integrity_labels: list[SourceLabel] = []
        self.prop_sources: dict[tuple[int, str, str], SourceLabel] = {}
        if family is QueryFamily.INTEGRITY:
            self._seed_integrity(integrity_sources)
        else:
            self._seed_logging_declared()

    def _next_order(self) -> int:
        self.order += 1
        return self.order

    # -- seeding --

    def _seed_integrity(self, provided: list[SourceLabel] | None) -> None:
        exports = find_exports(self.tree)
        wanted = None
        if provided is not None:
            wanted = {(lab.kind, lab.name, lab.function_name)
                      for lab in provided}
        order = 0
        for export in exports:
            fn = export.node
            scope = self.scope_of_fn[id(fn)]
            for param in fn.params:
                if param.name is None:
                    continue
                key = (SourceKind.API_PARAM, param.name, export.name)
                if wanted is None or key in wanted:
                    label = SourceLabel(
                        kind=SourceKind.API_PARAM, name=param.name,
                        line=param.line, function_name=export.name,
                        doc_comment=_function_doc_for(param.name, fn),
                        order=order)
                    order += 1
                    self.integrity_labels.append(label)
                    self._union((scope.id, param.name), {label})
                for prop, line in _property_reads(fn, param.name):
                    pkey = (SourceKind.PARAM_PROPERTY, prop, export.name)
                    if wanted is not None and pkey not in wanted:
                        continue
                    label = SourceLabel(
                        kind=SourceKind.PARAM_PROPERTY, name=prop, line=line,
                        function_name=export.name,
                        doc_comment=_function_doc_for(
                            f"{param.name}.{prop}", fn) or (fn.doc or None),
                        order=order)
                    order += 1
                    self.integrity_labels.append(label)
                    self.prop_sources[(scope.id, param.name, prop)] = label
        self.order = order

    def _seed_logging_declared(self) -> None:
        order = 0
        for scope in self.scopes:
            for name in sorted(scope.declared):
                line = scope.decl_lines.get(name, 1)
                label = SourceLabel(kind=SourceKind.LOGGED_VAR, name=name,
                                    line=line, order=order)
                order += 1
                self.conf_var_labels[(scope.id, name)] = label
                self._union((scope.id, name), {label})
        self.order = order

    def _conf_var_label(self, scope_id: int, name: str,
                        line: int) -> SourceLabel:
        key = (scope_id, name)
        label = self.conf_var_labels.get(key)
        if label is None:
            label = SourceLabel(kind=SourceKind.LOGGED_VAR, name=name,
                                line=line, order=self._next_order())
            self.conf_var_labels[key] = label
        return label

    def _conf_prop_label(self, prop: str, line: int) -> SourceLabel:
        label = self.conf_prop_labels.get(prop)
        if label is None:
            label = SourceLabel(kind=SourceKind.LOGGED_VAR, name=prop,
                                line=line, order=self._next_order())
            self.conf_prop_labels[prop] = label
        return label

    # -- state updates --

    def _union(self, key: tuple[int, str], labels: set[SourceLabel]) -> None:
        current = self.state.var_taint.setdefault(key, set())
        if not labels:
            return
        before = len(current)
        current |= labels
        if len(current) != before:
            self.changed = True

    def _union_prop(self, key: tuple[int, str, str],
                    labels: set[SourceLabel]) -> None:
        if not labels:
            return
        current = self.state.prop_taint.setdefault(key, set())
        before = len(current)
        current |= labels
        if len(current) != before:
            self.changed = True

    def _union_return(self, fn: ast.FunctionNode,
                      labels: set[SourceLabel]) -> None:
        if not labels:
            return
        current = self.state.fn_returns.setdefault(id(fn), set())
        before = len(current)
        current |= labels
        if len(current) != before:
            self.changed = True

    def _record_hit(self, labels: set[SourceLabel], sink_type: SinkType,
                    line: int) -> None:
        for label in labels:
            key = (label, sink_type)
            previous = self.sink_hits.get(key)
            if previous is None or line < previous:
                self.sink_hits[key] = line
                self.changed = True

    # -- evaluation --

    def run(self) -> None:
        for _ in range(_MAX_PASSES):
            self.changed = False
            for scope in self.scopes:
                body = scope.node.body
                if isinstance(scope.node, ast.FunctionNode):
                    if scope.node.expression_body:
                        labels = self.eval(body, scope)
                        self._union_return(scope.node, labels)
                        continue
                    stmts = body.stmts if isinstance(body, ast.Block) else []
                else:
                    stmts = body
                self.exec_stmts(stmts, scope)
            if not self.changed:
                return
        raise RuntimeError("taint propagation did not reach a fixpoint")

    def exec_stmts(self, stmts: list[ast.Node], scope: Scope) -> None:
        for stmt in stmts:
            self.exec_stmt(stmt, scope)

    def exec_stmt(self, stmt: ast.Node, scope: Scope) -> None:
        if isinstance(stmt, (ast.Empty, ast.Break, ast.Continue, ast.Import)):
            return
        if isinstance(stmt, ast.FunctionNode):
            return  # bodies run via their own scope
        if isinstance(stmt, (ast.ExportNamed, ast.ExportDefault)):
            if stmt.decl is not None and not isinstance(
                    stmt.decl, ast.FunctionNode):
                self.exec_stmt(stmt.decl, scope)
            return
        if isinstance(stmt, ast.VarDecl):
            for decl in stmt.decls:
                init_labels = self.eval(decl.init, scope) \
                    if decl.init is not None else set()
                self._bind_pattern(decl.target, decl.init, init_labels, scope)
            return
        if isinstance(stmt, ast.ExprStmt):
            self.eval(stmt.expr, scope)
            return
        if isinstance(stmt, ast.Block):
            self.exec_stmts(stmt.stmts, scope)
            return
        if isinstance(stmt, ast.If):
            self.eval(stmt.test, scope)
            self.exec_stmt(stmt.then, scope)
            if stmt.alt is not None:
                self.exec_stmt(stmt.alt, scope)
            return
        if isinstance(stmt, ast.For):
            if stmt.init is not None:
                self.exec_stmt(stmt.init, scope) \
                    if isinstance(stmt.init, ast.VarDecl) \
                    else self.eval(stmt.init, scope)
            if stmt.test is not None:
                self.eval(stmt.test, scope)
            if stmt.update is not None:
                self.eval(stmt.update, scope)
            self.exec_stmt(stmt.body, scope)
            return
        if isinstance(stmt, ast.ForIn):
            labels = self.eval(stmt.iterable, scope)
            self._bind_pattern(stmt.target, None, labels, scope)
            self.exec_stmt(stmt.body, scope)
            return
        if isinstance(stmt, (ast.While, ast.DoWhile)):
            self.eval(stmt.test, scope)
            self.exec_stmt(stmt.body, scope)
            return
        if isinstance(stmt, ast.Return):
            labels = self.eval(stmt.arg, scope) if stmt.arg is not None \
                else set()
            if isinstance(scope.node, ast.FunctionNode):
                self._union_return(scope.node, labels)
            return
        if isinstance(stmt, ast.Throw):
            self.eval(stmt.arg, scope)
            return
        if isinstance(stmt, ast.Try):
            self.exec_stmts(stmt.block.stmts, scope)
            if stmt.handler is not None:
                self.exec_stmts(stmt.handler.stmts, scope)
            if stmt.finalizer is not None:
                self.exec_stmts(stmt.finalizer.stmts, scope)
            return
        if isinstance(stmt, ast.Switch):
            self.eval(stmt.disc, scope)
            for case in stmt.cases:
                if case.test is not None:
                    self.eval(case.test, scope)
                self.exec_stmts(case.body, scope)
            return
        if isinstance(stmt, ast.With):
            self.eval(stmt.obj, scope)
            self.exec_stmt(stmt.body, scope)
            return
        if isinstance(stmt, ast.ClassDecl):
            if stmt.superclass is not None:
                self.eval(stmt.superclass, scope)
            return
        # Unknown statement kinds are ignored conservatively.

    def _bind_pattern(self, target: ast.Node, init: ast.Node | None,
                      labels: set[SourceLabel], scope: Scope) -> None:
        if isinstance(target, ast.Ident):
            binding = resolve(scope, target.name)
            self._union((binding.id, target.name), set(labels))
            return
        if isinstance(target, ast.ObjectPattern):
            init_is_param = isinstance(init, ast.Ident)
            for prop in target.props:
                extra: set[SourceLabel] = set(labels)
                if prop.key is not None and init_is_param:
                    binding = resolve(scope, init.name)
                    source = self.prop_sources.get(
                        (binding.id, init.name, prop.key))
                    if source is not None:
                        extra.add(source)
                    if self.family is QueryFamily.LOGGING:
                        extra.add(self._conf_prop_label(prop.key, target.line))
                    extra |= self.state.prop_taint.get(
                        (binding.id, init.name, prop.key), set())
                self._bind_pattern(prop.target, None, extra, scope)
            if target.rest is not None:
                self._bind_pattern(target.rest, None, set(labels), scope)
            return
        if isinstance(target, ast.ArrayPattern):
            for element in target.elements:
                if element is not None:
                    self._bind_pattern(element, None, set(labels), scope)
            if target.rest is not None:
                self._bind_pattern(target.rest, None, set(labels), scope)
            return
        if isinstance(target, ast.Member):
            self._assign_member(target, labels, scope)

    def _assign_member(self, target: ast.Member, labels: set[SourceLabel],
                       scope: Scope) -> None:
        if not target.computed and target.prop and \
                isinstance(target.obj, ast.Ident):
            binding = resolve(scope, target.obj.name)
            self._union_prop((binding.id, target.obj.name, target.prop),
                             labels)
            return
        root = target.obj
        while isinstance(root, ast.Member):
            root = root.obj
        if isinstance(root, ast.Ident):
            binding = resolve(scope, root.name)
            self._union((binding.id, root.name), labels)

    def _callee_path(self, node: ast.Node) -> tuple[str, ...]:
        if isinstance(node, ast.Ident):
            return (node.name,)
        if isinstance(node, ast.Member):
            base = self._callee_path(node.obj)
            if node.computed or not node.prop:
                return base + (UNKNOWN_SEGMENT,)
            return base + (node.prop,)
        return (UNKNOWN_SEGMENT,)

    def _resolve_local_function(self, callee: ast.Node,
                                scope: Scope) -> ast.FunctionNode | None:
        if not isinstance(callee, ast.Ident):
            return None
        current: Scope | None = scope
        while current is not None:
            if callee.name in current.fn_bindings:
                return current.fn_bindings[callee.name]
            if callee.name in current.declared:
                return None  # shadowed by a non-function binding
            current = current.parent
        return None

    def eval(self, expr: ast.Node, scope: Scope,
             as_callee: bool = False) -> set[SourceLabel]:
        if isinstance(expr, ast.Lit):
            return set()
        if isinstance(expr, ast.Ident):
            if expr.name in ("this", "super"):
                return set()
            binding = resolve(scope, expr.name)
            key = (binding.id, expr.name)
            labels = set(self.state.var_taint.get(key, ()))
            if self.family is QueryFamily.LOGGING and not as_callee:
                label = self._conf_var_label(binding.id, expr.name, expr.line)
                if label not in labels:
                    labels.add(label)
                    self._union(key, {label})
            return labels
        if isinstance(expr, ast.Member):
            base = self.eval(expr.obj, scope, as_callee=as_callee)
            labels = set(base)
            if not expr.computed and expr.prop:
                if isinstance(expr.obj, ast.Ident) and \
                        expr.obj.name not in ("this", "super"):
                    binding = resolve(scope, expr.obj.name)
                    labels |= self.state.prop_taint.get(
                        (binding.id, expr.obj.name, expr.prop), set())
                    source = self.prop_sources.get(
                        (binding.id, expr.obj.name, expr.prop))
                    if source is not None:
                        labels.add(source)
                if self.family is QueryFamily.LOGGING and not as_callee:
                    labels.add(self._conf_prop_label(expr.prop, expr.line))
            elif expr.prop_expr is not None:
                labels |= self.eval(expr.prop_expr, scope)
            return labels
        if isinstance(expr, ast.Call):
            return self._eval_call(expr, scope)
        if isinstance(expr, ast.Assign):
            value_labels = self.eval(expr.value, scope)
            if expr.op != "=":
                value_labels = value_labels | self.eval(expr.target, scope)
            if isinstance(expr.target, ast.Ident):
                binding = resolve(scope, expr.target.name)
                self._union((binding.id, expr.target.name), value_labels)
            elif isinstance(expr.target, ast.Member):
                if expr.op == "=":
                    self.eval(expr.target.obj, scope)
                    if expr.target.prop_expr is not None:
                        self.eval(expr.target.prop_expr, scope)
                self._assign_member(expr.target, value_labels, scope)
            return value_labels
        if isinstance(expr, ast.Binary):
            return self.eval(expr.left, scope) | self.eval(expr.right, scope)
        if isinstance(expr, ast.Unary):
            arg_labels = self.eval(expr.arg, scope)
            if expr.op in ("typeof", "void", "delete"):
                return set()
            return arg_labels
        if isinstance(expr, ast.Cond):
            self.eval(expr.test, scope)
            return self.eval(expr.cons, scope) | self.eval(expr.alt, scope)
        if isinstance(expr, ast.Seq):
            result: set[SourceLabel] = set()
            for sub in expr.exprs:
                result = self.eval(sub, scope)
            return result
        if isinstance(expr, ast.TemplateLit):
            labels = set()
            for sub in expr.exprs:
                labels |= self.eval(sub, scope)
            return labels
        if isinstance(expr, ast.ArrayLit):
            labels = set()
            for element in expr.elements:
                labels |= self.eval(element, scope)
            return labels
        if isinstance(expr, ast.ObjectLit):
            labels = set()
            for prop in expr.props:
                if isinstance(prop.value, ast.FunctionNode):
                    continue
                labels |= self.eval(prop.value, scope)
            return labels
        if isinstance(expr, ast.Spread):
            return self.eval(expr.arg, scope)
        if isinstance(expr, (ast.FunctionNode, ast.ClassDecl)):
            return set()
        if isinstance(expr, (ast.ObjectPattern, ast.ArrayPattern)):
            return set()
        return set()

    def _eval_call(self, call: ast.Call, scope: Scope) -> set[SourceLabel]:
        receiver_labels = self.eval(call.callee, scope, as_callee=True)
        arg_labels: list[set[SourceLabel]] = []
        flat: set[SourceLabel] = set()
        for arg in call.args:
            labels = self.eval(arg, scope)
            arg_labels.append(labels)
            flat |= labels

        path = self._callee_path(call.callee)
        if path and path[-1] in self.catalog.sanitizers:
            return set()
        if path and ".".join(path) in self.catalog.sanitizers:
            return set()

        for spec in self.specs:
            if not spec.matches(path):
                continue
            for index, labels in enumerate(arg_labels):
                if labels and spec.position_tainted(index):
                    self._record_hit(labels, spec.sink_type, call.line)

        local = self._resolve_local_function(call.callee, scope)
        if local is not None:
            fn_scope = self.scope_of_fn[id(local)]
            params = local.params
            for index, param in enumerate(params):
                if param.rest:
                    rest_labels: set[SourceLabel] = set()
                    for labels in arg_labels[index:]:
                        rest_labels |= labels
                    if param.name is not None:
                        self._union((fn_scope.id, param.name), rest_labels)
                    continue
                labels = arg_labels[index] if index < len(arg_labels) else set()
                if any(isinstance(a, ast.Spread) for a in call.args):
                    labels = labels | flat
                if param.name is not None:
                    self._union((fn_scope.id, param.name), labels)
                elif param.pattern is not None:
                    for name, _line in _collect_pattern_names(param.pattern):
                        self._union((fn_scope.id, name), labels)
            return set(self.state.fn_returns.get(id(local), ()))

        return receiver_labels | flat


# --- public entry points ---------------------------------------------------

def propagate(tree: ast.Program, sources: list[SourceLabel] | None,
              catalog: SinkCatalog, family: QueryFamily,
              file: str = "<module>", project: str = "") -> list[FlowRecord]:
    """Run taint propagation and emit flow records.

    Integrity: one record per (source, sink type) with the smallest reaching
    sink line, plus a None record for every source reaching no sink. Logging
    sources are discovered during propagation (``sources`` is ignored for
    that family) and only sink-reaching records are emitted.
    """
    engine = _Engine(tree, family, catalog,
                     integrity_sources=sources
                     if family is QueryFamily.INTEGRITY else None)
    engine.run()

    records: list[FlowRecord] = []
    if family is QueryFamily.INTEGRITY:
        for label in engine.integrity_labels:
            hits = sorted(
                ((sink, line) for (lab, sink), line in engine.sink_hits.items()
                 if lab == label),
                key=lambda t: _SINK_ORDER[t[0]])
            if hits:
                for sink_type, line in hits:
                    records.append(_make_record(label, sink_type, line,
                                                file, project))
            else:
                records.append(_make_record(label, SinkType.NONE, None,
                                            file, project))
    else:
        by_label: dict[SourceLabel, int] = {}
        for (label, sink_type), line in engine.sink_hits.items():
            if sink_type is SinkType.LOGGING:
                existing = by_label.get(label)
                if existing is None or line < existing:
                    by_label[label] = line
        for label in sorted(by_label, key=lambda lab: lab.order):
            records.append(_make_record(label, SinkType.LOGGING,
                                        by_label[label], file, project))

    unique: dict[tuple, FlowRecord] = {}
    for record in records:
        key = (record.project, record.file, record.line, record.source_name,
               record.sink_type, record.sink_line)
        unique.setdefault(key, record)
    ordered = sorted(
        unique.values(),
        key=lambda r: (r.line, r.source_name, _SINK_ORDER[r.sink_type],
                       r.sink_line or 0))
    return ordered


def _make_record(label: SourceLabel, sink_type: SinkType, sink_line: int | None,
                 file: str, project: str) -> FlowRecord:
    return FlowRecord(
        id=flow_id(project, file, label.line, label.name, sink_type,
                   sink_line),
        project=project,
        file=file,
        line=label.line,
        source_kind=label.kind,
        source_name=label.name,
        sink_type=sink_type,
        function_name=label.function_name,
        doc_comment=label.doc_comment,
        sink_line=sink_line,
    )


def analyze_module(source: str, family: QueryFamily, catalog: SinkCatalog,
                   file: str = "<module>", project: str = ""
                   ) -> list[FlowRecord]:
    """Parse and analyze one JavaScript module; records are unfiltered (the
    short-name filter applies at scan level)."""
    tree = parse_module(source)
    if family is QueryFamily.INTEGRITY:
        sources = find_sources(tree, family)
        return propagate(tree, sources, catalog, family, file, project)
    return propagate(tree, None, catalog, family, file, project)
