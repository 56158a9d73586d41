"""Tokenizer and recursive-descent parser for the supported JS subset.

Covers functions (declarations, expressions, arrows, async), CommonJS and ES
module exports, variable declarations with basic destructuring, the usual
expression grammar (calls, members, templates, containers, operators),
control flow (if/for/while/switch/try/with), and classes parsed loosely.
Semicolons are optional at line breaks (pragmatic ASI). Block comments are
collected so callers can attach JSDoc to functions.
"""

from __future__ import annotations

from dataclasses import dataclass

from flowlens.taint import jsast as ast


class JsSyntaxError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col + 1}")
        self.line = line
        self.col = col


# --- lexer ---------------------------------------------------------------

_PUNCTUATORS = [
    ">>>=", "===", "!==", "**=", "<<=", ">>=", ">>>", "...",
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "&&=", "||=", "??=",
    "**", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
]
_PUNCTUATORS.sort(key=len, reverse=True)

_KEYWORDS = {
    "function", "return", "var", "let", "const", "if", "else", "for",
    "while", "do", "new", "typeof", "delete", "void", "in", "of",
    "instanceof", "this", "null", "true", "false", "class", "extends",
    "export", "default", "import", "from", "try", "catch", "finally",
    "throw", "switch", "case", "break", "continue", "async", "await",
    "with", "static", "get", "set", "yield", "super", "undefined",
}

# Tokens after which a '/' starts a regex literal rather than division.
_REGEX_PRECEDING_KEYWORDS = {
    "return", "typeof", "instanceof", "in", "of", "new", "delete", "void",
    "throw", "case", "do", "else", "yield", "await",
}

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f",
            "v": "\v", "0": "\0"}


@dataclass
class Token:
    kind: str      # name num str regex punct template_full template_head
                   # template_middle template_tail eof
    value: str
    line: int
    col: int

    @property
    def is_keyword(self) -> bool:
        return self.kind == "name" and self.value in _KEYWORDS


@dataclass
class Comment:
    text: str
    start_line: int
    end_line: int
    block: bool


class _Lexer:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 0
        self.tokens: list[Token] = []
        self.comments: list[Comment] = []
        # Brace depths at which an open template substitution resumes.
        self.template_marks: list[int] = []
        self.brace_depth = 0

    def error(self, message: str) -> JsSyntaxError:
        return JsSyntaxError(message, self.line, self.col)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.src) and self.src[self.pos] == "\n":
                self.line += 1
                self.col = 0
            else:
                self.col += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def run(self) -> tuple[list[Token], list[Comment]]:
        while self.pos < len(self.src):
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
                continue
            if ch == "/" and self._peek(1) == "/":
                self._line_comment()
                continue
            if ch == "/" and self._peek(1) == "*":
                self._block_comment()
                continue
            start_line, start_col = self.line, self.col
            if ch == "`":
                self._template(start_line, start_col)
                continue
            if ch == "}" and self.template_marks and \
                    self.brace_depth == self.template_marks[-1]:
                self._template_continue(start_line, start_col)
                continue
            if ch in "'\"":
                self._string(ch, start_line, start_col)
                continue
            if ch.isdigit() or (ch == "." and self._peek(1).isdigit()):
                self._number(start_line, start_col)
                continue
            if ch.isalpha() or ch in "_$":
                self._name(start_line, start_col)
                continue
            if ch == "/" and self._regex_allowed():
                self._regex(start_line, start_col)
                continue
            self._punct(start_line, start_col)
        self.tokens.append(Token("eof", "", self.line, self.col))
        return self.tokens, self.comments

    def _line_comment(self) -> None:
        start = self.line
        self._advance(2)
        begin = self.pos
        while self.pos < len(self.src) and self._peek() != "\n":
            self._advance()
        self.comments.append(
            Comment(self.src[begin:self.pos], start, start, block=False))

    def _block_comment(self) -> None:
        start = self.line
        self._advance(2)
        begin = self.pos
        while self.pos < len(self.src):
            if self._peek() == "*" and self._peek(1) == "/":
                text = self.src[begin:self.pos]
                end = self.line
                self._advance(2)
                self.comments.append(Comment(text, start, end, block=True))
                return
            self._advance()
        raise self.error("unterminated block comment")

    def _string(self, quote: str, line: int, col: int) -> None:
        self._advance()
        out: list[str] = []
        while True:
            if self.pos >= len(self.src):
                raise self.error("unterminated string literal")
            ch = self._peek()
            if ch == "\n":
                raise self.error("unterminated string literal")
            if ch == "\\":
                nxt = self._peek(1)
                out.append(_ESCAPES.get(nxt, nxt))
                self._advance(2)
                continue
            if ch == quote:
                self._advance()
                break
            out.append(ch)
            self._advance()
        self.tokens.append(Token("str", "".join(out), line, col))

    def _number(self, line: int, col: int) -> None:
        begin = self.pos
        if self._peek() == "0" and self._peek(1) in "xXoObB":
            self._advance(2)
            while self._peek().isalnum():
                self._advance()
        else:
            while self._peek().isdigit():
                self._advance()
            if self._peek() == ".":
                self._advance()
                while self._peek().isdigit():
                    self._advance()
            if self._peek() in "eE":
                self._advance()
                if self._peek() in "+-":
                    self._advance()
                while self._peek().isdigit():
                    self._advance()
            if self._peek() == "n":
                self._advance()
        self.tokens.append(Token("num", self.src[begin:self.pos], line, col))

    def _name(self, line: int, col: int) -> None:
        begin = self.pos
        while self.pos < len(self.src) and \
                (self._peek().isalnum() or self._peek() in "_$"):
            self._advance()
        self.tokens.append(Token("name", self.src[begin:self.pos], line, col))

    def _regex_allowed(self) -> bool:
        for tok in reversed(self.tokens):
            if tok.kind in ("str", "num", "regex", "template_full",
                            "template_tail"):
                return False
            if tok.kind == "name":
                return tok.value in _REGEX_PRECEDING_KEYWORDS
            if tok.kind == "punct":
                return tok.value not in (")", "]", "}", "++", "--")
            return True
        return True

    def _regex(self, line: int, col: int) -> None:
        begin = self.pos
        self._advance()
        in_class = False
        while True:
            if self.pos >= len(self.src) or self._peek() == "\n":
                raise self.error("unterminated regular expression")
            ch = self._peek()
            if ch == "\\":
                self._advance(2)
                continue
            if ch == "[":
                in_class = True
            elif ch == "]":
                in_class = False
            elif ch == "/" and not in_class:
                self._advance()
                break
            self._advance()
        while self.pos < len(self.src) and self._peek().isalpha():
            self._advance()
        self.tokens.append(Token("regex", self.src[begin:self.pos], line, col))

    def _template_chunk(self) -> tuple[str, bool]:
        """Scan template text until `${` (True) or closing backtick (False)."""
        out: list[str] = []
        while True:
            if self.pos >= len(self.src):
                raise self.error("unterminated template literal")
            ch = self._peek()
            if ch == "\\":
                nxt = self._peek(1)
                out.append(_ESCAPES.get(nxt, nxt))
                self._advance(2)
                continue
            if ch == "$" and self._peek(1) == "{":
                self._advance(2)
                return "".join(out), True
            if ch == "`":
                self._advance()
                return "".join(out), False
            out.append(ch)
            self._advance()

    def _template(self, line: int, col: int) -> None:
        self._advance()  # backtick
        text, has_expr = self._template_chunk()
        if has_expr:
            self.tokens.append(Token("template_head", text, line, col))
            self.template_marks.append(self.brace_depth)
        else:
            self.tokens.append(Token("template_full", text, line, col))

    def _template_continue(self, line: int, col: int) -> None:
        self._advance()  # the '}' resuming the template
        text, has_expr = self._template_chunk()
        if has_expr:
            self.tokens.append(Token("template_middle", text, line, col))
        else:
            self.template_marks.pop()
            self.tokens.append(Token("template_tail", text, line, col))

    def _punct(self, line: int, col: int) -> None:
        for p in _PUNCTUATORS:
            if self.src.startswith(p, self.pos):
                if p == "{":
                    self.brace_depth += 1
                elif p == "}":
                    self.brace_depth -= 1
                self._advance(len(p))
                self.tokens.append(Token("punct", p, line, col))
                return
        raise self.error(f"unexpected character {self._peek()!r}")


def tokenize(source: str) -> tuple[list[Token], list[Comment]]:
    return _Lexer(source).run()


# --- parser --------------------------------------------------------------

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "**=",
               "<<=", ">>=", ">>>=", "&&=", "||=", "??="}

_BINARY_LEVELS = [
    {"??", "||"},
    {"&&"},
    {"|"},
    {"^"},
    {"&"},
    {"==", "!=", "===", "!=="},
    {"<", ">", "<=", ">=", "instanceof", "in"},
    {"<<", ">>", ">>>"},
    {"+", "-"},
    {"*", "/", "%"},
]

_UNARY_OPS = {"!", "~", "+", "-", "typeof", "void", "delete", "await"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers --

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind in ("punct", "name") and tok.value == value

    def at_kind(self, kind: str) -> bool:
        return self.peek().kind == kind

    def match(self, value: str) -> bool:
        if self.at(value):
            self.next()
            return True
        return False

    def expect(self, value: str) -> Token:
        if not self.at(value):
            tok = self.peek()
            raise JsSyntaxError(
                f"expected {value!r}, found {tok.value or tok.kind!r}",
                tok.line, tok.col)
        return self.next()

    def expect_name(self) -> Token:
        tok = self.peek()
        if tok.kind != "name":
            raise JsSyntaxError(
                f"expected identifier, found {tok.value or tok.kind!r}",
                tok.line, tok.col)
        return self.next()

    def error_here(self, message: str) -> JsSyntaxError:
        tok = self.peek()
        return JsSyntaxError(message, tok.line, tok.col)

    def _terminate(self) -> None:
        """Consume a statement terminator, applying pragmatic ASI."""
        if self.match(";"):
            return
        tok = self.peek()
        if tok.kind == "eof" or self.at("}"):
            return
        prev = self.tokens[self.pos - 1]
        if tok.line > prev.line:
            return
        raise self.error_here(f"expected ';' before {tok.value!r}")

    # -- program / statements --

    def parse_program(self) -> ast.Program:
        body: list[ast.Node] = []
        while not self.at_kind("eof"):
            body.append(self.parse_statement())
        return ast.Program(1, 0, body)

    def parse_statement(self) -> ast.Node:
        tok = self.peek()
        if tok.kind == "punct":
            if tok.value == "{":
                return self.parse_block()
            if tok.value == ";":
                self.next()
                return ast.Empty(tok.line, tok.col)
        if tok.kind == "name":
            v = tok.value
            if v == "function":
                return self.parse_function(is_declaration=True)
            if v == "async" and self.peek(1).value == "function" \
                    and self.peek(1).line == tok.line:
                return self.parse_function(is_declaration=True)
            if v in ("var", "let", "const") and self._starts_binding(1):
                decl = self.parse_var_decl()
                self._terminate()
                return decl
            if v == "if":
                return self.parse_if()
            if v == "for":
                return self.parse_for()
            if v == "while":
                return self.parse_while()
            if v == "do":
                return self.parse_do_while()
            if v == "return":
                return self.parse_return()
            if v == "throw":
                self.next()
                arg = self.parse_expression()
                self._terminate()
                return ast.Throw(tok.line, tok.col, arg)
            if v == "try":
                return self.parse_try()
            if v == "switch":
                return self.parse_switch()
            if v == "with":
                return self.parse_with()
            if v == "break":
                self.next()
                if self.peek().kind == "name" and not self.peek().is_keyword \
                        and self.peek().line == tok.line:
                    self.next()
                self._terminate()
                return ast.Break(tok.line, tok.col)
            if v == "continue":
                self.next()
                if self.peek().kind == "name" and not self.peek().is_keyword \
                        and self.peek().line == tok.line:
                    self.next()
                self._terminate()
                return ast.Continue(tok.line, tok.col)
            if v == "class":
                return self.parse_class()
            if v == "export":
                return self.parse_export()
            if v == "import":
                return self.parse_import()
            if not tok.is_keyword and self.peek(1).value == ":" \
                    and self.peek(1).kind == "punct":
                self.next()
                self.next()
                return self.parse_statement()
        expr = self.parse_expression()
        self._terminate()
        return ast.ExprStmt(tok.line, tok.col, expr)

    def _starts_binding(self, offset: int) -> bool:
        tok = self.peek(offset)
        if tok.kind == "name" and not tok.is_keyword:
            return True
        return tok.kind == "punct" and tok.value in ("{", "[")

    def parse_block(self) -> ast.Block:
        start = self.expect("{")
        stmts: list[ast.Node] = []
        while not self.at("}"):
            if self.at_kind("eof"):
                raise self.error_here("unterminated block")
            stmts.append(self.parse_statement())
        self.expect("}")
        return ast.Block(start.line, start.col, stmts)

    def parse_var_decl(self, no_in: bool = False,
                       single: bool = False) -> ast.VarDecl:
        kw = self.next()
        decls: list[ast.Declarator] = []
        while True:
            target = self.parse_binding_target()
            init = None
            if self.at("="):
                self.next()
                init = self.parse_assign(no_in=no_in)
            decls.append(ast.Declarator(target, init))
            if single or not self.match(","):
                break
        return ast.VarDecl(kw.line, kw.col, kw.value, decls)

    def parse_binding_target(self) -> ast.Node:
        tok = self.peek()
        if self.at("{"):
            return self.parse_object_pattern()
        if self.at("["):
            return self.parse_array_pattern()
        name = self.expect_name()
        return ast.Ident(name.line, name.col, name.value)

    def parse_object_pattern(self) -> ast.ObjectPattern:
        start = self.expect("{")
        props: list[ast.PatternProp] = []
        rest: ast.Ident | None = None
        while not self.at("}"):
            if self.match("..."):
                n = self.expect_name()
                rest = ast.Ident(n.line, n.col, n.value)
            else:
                key_tok = self.peek()
                if key_tok.kind in ("str", "num"):
                    self.next()
                    key = str(key_tok.value)
                elif self.at("["):
                    self.next()
                    self.parse_assign()
                    self.expect("]")
                    key = None
                else:
                    key = self.expect_name().value
                if self.match(":"):
                    target = self.parse_binding_target()
                elif key is not None:
                    target = ast.Ident(key_tok.line, key_tok.col, key)
                else:
                    raise self.error_here("computed pattern key needs a target")
                default = None
                if self.match("="):
                    default = self.parse_assign()
                props.append(ast.PatternProp(key, target, default))
            if not self.match(","):
                break
        self.expect("}")
        return ast.ObjectPattern(start.line, start.col, props, rest)

    def parse_array_pattern(self) -> ast.ArrayPattern:
        start = self.expect("[")
        elements: list[ast.Node | None] = []
        rest: ast.Ident | None = None
        while not self.at("]"):
            if self.at(","):
                self.next()
                elements.append(None)
                continue
            if self.match("..."):
                n = self.expect_name()
                rest = ast.Ident(n.line, n.col, n.value)
            else:
                target = self.parse_binding_target()
                if self.match("="):
                    self.parse_assign()
                elements.append(target)
            if not self.match(","):
                break
        self.expect("]")
        return ast.ArrayPattern(start.line, start.col, elements, rest)

    def parse_if(self) -> ast.If:
        start = self.expect("if")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        then = self.parse_statement()
        alt = None
        if self.at("else"):
            self.next()
            alt = self.parse_statement()
        return ast.If(start.line, start.col, test, then, alt)

    def parse_for(self) -> ast.Node:
        start = self.expect("for")
        self.expect("(")
        init: ast.Node | None = None
        decl_kind: str | None = None
        if self.at(";"):
            pass
        elif self.peek().value in ("var", "let", "const") and \
                self._starts_binding(1):
            decl_kind = self.peek().value
            init = self.parse_var_decl(no_in=True, single=False)
        else:
            init = self.parse_expression(no_in=True)
        if self.at("in") or self.at("of"):
            of = self.next().value == "of"
            iterable = self.parse_expression()
            self.expect(")")
            body = self.parse_statement()
            if isinstance(init, ast.VarDecl):
                target: ast.Node = init.decls[0].target
            elif init is not None:
                target = init
            else:
                raise self.error_here("for-in/of requires a target")
            return ast.ForIn(start.line, start.col, decl_kind, target,
                             iterable, body, of=of)
        self.expect(";")
        test = None if self.at(";") else self.parse_expression()
        self.expect(";")
        update = None if self.at(")") else self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return ast.For(start.line, start.col, init, test, update, body)

    def parse_while(self) -> ast.While:
        start = self.expect("while")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return ast.While(start.line, start.col, test, body)

    def parse_do_while(self) -> ast.DoWhile:
        start = self.expect("do")
        body = self.parse_statement()
        self.expect("while")
        self.expect("(")
        test = self.parse_expression()
        self.expect(")")
        self._terminate()
        return ast.DoWhile(start.line, start.col, body, test)

    def parse_return(self) -> ast.Return:
        start = self.expect("return")
        arg = None
        tok = self.peek()
        if not (self.at(";") or self.at("}") or tok.kind == "eof"
                or tok.line > start.line):
            arg = self.parse_expression()
        self._terminate()
        return ast.Return(start.line, start.col, arg)

    def parse_try(self) -> ast.Try:
        start = self.expect("try")
        block = self.parse_block()
        catch_param = None
        handler = None
        finalizer = None
        if self.at("catch"):
            self.next()
            if self.match("("):
                if self.at("{") or self.at("["):
                    self.parse_binding_target()
                else:
                    catch_param = self.expect_name().value
                self.expect(")")
            handler = self.parse_block()
        if self.at("finally"):
            self.next()
            finalizer = self.parse_block()
        if handler is None and finalizer is None:
            raise self.error_here("try requires catch or finally")
        return ast.Try(start.line, start.col, block, catch_param, handler,
                       finalizer)

    def parse_switch(self) -> ast.Switch:
        start = self.expect("switch")
        self.expect("(")
        disc = self.parse_expression()
        self.expect(")")
        self.expect("{")
        cases: list[ast.SwitchCase] = []
        while not self.at("}"):
            if self.at("case"):
                self.next()
                test = self.parse_expression()
            else:
                self.expect("default")
                test = None
            self.expect(":")
            body: list[ast.Node] = []
            while not (self.at("case") or self.at("default") or self.at("}")):
                body.append(self.parse_statement())
            cases.append(ast.SwitchCase(test, body))
        self.expect("}")
        return ast.Switch(start.line, start.col, disc, cases)

    def parse_with(self) -> ast.With:
        start = self.expect("with")
        self.expect("(")
        obj = self.parse_expression()
        self.expect(")")
        body = self.parse_statement()
        return ast.With(start.line, start.col, obj, body)

    def parse_class(self) -> ast.ClassDecl:
        start = self.expect("class")
        name = None
        if self.peek().kind == "name" and not self.peek().is_keyword:
            name = self.next().value
        superclass = None
        if self.at("extends"):
            self.next()
            superclass = self.parse_call_member()
        self.expect("{")
        methods: list[ast.ClassMethod] = []
        while not self.at("}"):
            if self.match(";"):
                continue
            for modifier in ("static", "async", "get", "set"):
                if self.at(modifier) and self.peek(1).value not in ("(", "="):
                    self.next()
            self.match("*")
            tok = self.peek()
            if self.at("["):
                self.next()
                self.parse_assign()
                self.expect("]")
                mname = None
            else:
                mname = self.next().value if tok.kind in ("name", "str", "num") \
                    else None
                if mname is None:
                    raise self.error_here("expected class member name")
            if self.at("("):
                func = self._finish_function(tok.line, tok.col, mname,
                                             is_arrow=False)
                methods.append(ast.ClassMethod(mname, func))
            else:
                if self.match("="):
                    self.parse_assign()
                self._terminate()
        self.expect("}")
        return ast.ClassDecl(start.line, start.col, name, superclass, methods)

    def parse_export(self) -> ast.Node:
        start = self.expect("export")
        if self.at("default"):
            self.next()
            if self.at("function") or (self.at("async")
                                       and self.peek(1).value == "function"):
                decl: ast.Node = self.parse_function(is_declaration=False)
            elif self.at("class"):
                decl = self.parse_class()
            else:
                decl = self.parse_assign()
                self._terminate()
            return ast.ExportDefault(start.line, start.col, decl)
        if self.at("{"):
            self.next()
            specifiers: list[tuple[str, str]] = []
            while not self.at("}"):
                local = self.expect_name().value
                exported = local
                if self.at("as"):
                    self.next()
                    exported = self.expect_name().value
                specifiers.append((local, exported))
                if not self.match(","):
                    break
            self.expect("}")
            if self.at("from"):
                self.next()
                self.next()  # module source string
                specifiers = []
            self._terminate()
            return ast.ExportNamed(start.line, start.col, None, specifiers)
        if self.at("function") or self.at("class") or \
                (self.at("async") and self.peek(1).value == "function") or \
                self.peek().value in ("var", "let", "const"):
            if self.peek().value in ("var", "let", "const"):
                decl = self.parse_var_decl()
                self._terminate()
            elif self.at("class"):
                decl = self.parse_class()
            else:
                decl = self.parse_function(is_declaration=True)
            return ast.ExportNamed(start.line, start.col, decl, [])
        raise self.error_here("unsupported export form")

    def parse_import(self) -> ast.Import:
        start = self.expect("import")
        source = ""
        if self.at_kind("str"):
            source = self.next().value
        else:
            while not self.at("from"):
                if self.at_kind("eof") or self.peek().line > start.line:
                    raise self.error_here("malformed import")
                self.next()
            self.next()
            source = self.next().value
        self._terminate()
        return ast.Import(start.line, start.col, source)

    # -- functions --

    def parse_function(self, is_declaration: bool) -> ast.FunctionNode:
        tok = self.peek()
        is_async = False
        if self.at("async"):
            self.next()
            is_async = True
        self.expect("function")
        self.match("*")
        name = None
        if self.peek().kind == "name" and not self.peek().is_keyword:
            name = self.next().value
        if is_declaration and name is None:
            raise self.error_here("function declaration requires a name")
        return self._finish_function(tok.line, tok.col, name,
                                     is_arrow=False, is_async=is_async)

    def _finish_function(self, line: int, col: int, name: str | None,
                         is_arrow: bool, is_async: bool = False
                         ) -> ast.FunctionNode:
        params = self.parse_params()
        body = self.parse_block()
        return ast.FunctionNode(line, col, name, params, body,
                                is_arrow=is_arrow, is_async=is_async)

    def parse_params(self) -> list[ast.Param]:
        self.expect("(")
        params: list[ast.Param] = []
        while not self.at(")"):
            tok = self.peek()
            rest = bool(self.match("..."))
            if self.at("{"):
                pattern = self.parse_object_pattern()
                params.append(ast.Param(tok.line, tok.col, None,
                                        pattern=pattern, rest=rest))
            elif self.at("["):
                pattern = self.parse_array_pattern()
                params.append(ast.Param(tok.line, tok.col, None,
                                        pattern=pattern, rest=rest))
            else:
                n = self.expect_name()
                default = None
                if self.match("="):
                    default = self.parse_assign()
                params.append(ast.Param(n.line, n.col, n.value,
                                        default=default, rest=rest))
            if not self.match(","):
                break
        self.expect(")")
        return params

    # -- expressions --

    def parse_expression(self, no_in: bool = False) -> ast.Node:
        first = self.parse_assign(no_in=no_in)
        if not self.at(","):
            return first
        exprs = [first]
        while self.match(","):
            exprs.append(self.parse_assign(no_in=no_in))
        return ast.Seq(first.line, first.col, exprs)

    def _arrow_after_parens(self) -> bool:
        """At '(' — does the matching ')' lead to '=>'?"""
        depth = 0
        i = self.pos
        while i < len(self.tokens):
            tok = self.tokens[i]
            if tok.kind == "punct":
                if tok.value in ("(", "[", "{"):
                    depth += 1
                elif tok.value in (")", "]", "}"):
                    depth -= 1
                    if depth == 0:
                        nxt = self.tokens[i + 1] if i + 1 < len(self.tokens) \
                            else None
                        return nxt is not None and nxt.kind == "punct" \
                            and nxt.value == "=>"
            elif tok.kind == "eof":
                return False
            i += 1
        return False

    def parse_assign(self, no_in: bool = False) -> ast.Node:
        tok = self.peek()
        # Arrow functions.
        if tok.kind == "name" and tok.value == "async":
            nxt = self.peek(1)
            if nxt.line == tok.line and (
                    (nxt.kind == "name" and not nxt.is_keyword
                     and self.peek(2).value == "=>")
                    or (nxt.value == "(" and self._at_async_arrow())):
                self.next()
                return self._parse_arrow(tok.line, tok.col, is_async=True)
        if tok.kind == "name" and not tok.is_keyword \
                and self.peek(1).kind == "punct" and self.peek(1).value == "=>":
            return self._parse_arrow(tok.line, tok.col, is_async=False)
        if tok.kind == "punct" and tok.value == "(" \
                and self._arrow_after_parens():
            return self._parse_arrow(tok.line, tok.col, is_async=False)

        left = self.parse_conditional(no_in=no_in)
        op_tok = self.peek()
        if op_tok.kind == "punct" and op_tok.value in _ASSIGN_OPS:
            if not isinstance(left, (ast.Ident, ast.Member)):
                raise JsSyntaxError("invalid assignment target",
                                    op_tok.line, op_tok.col)
            self.next()
            value = self.parse_assign(no_in=no_in)
            return ast.Assign(left.line, left.col, op_tok.value, left, value)
        return left

    def _at_async_arrow(self) -> bool:
        saved = self.pos
        self.pos += 1
        try:
            return self._arrow_after_parens()
        finally:
            self.pos = saved

    def _parse_arrow(self, line: int, col: int, is_async: bool) -> ast.Node:
        if self.at("("):
            params = self.parse_params()
        else:
            n = self.expect_name()
            params = [ast.Param(n.line, n.col, n.value)]
        self.expect("=>")
        if self.at("{"):
            body: ast.Node = self.parse_block()
            expression_body = False
        else:
            body = self.parse_assign()
            expression_body = True
        return ast.FunctionNode(line, col, None, params, body, is_arrow=True,
                                is_async=is_async,
                                expression_body=expression_body)

    def parse_conditional(self, no_in: bool = False) -> ast.Node:
        test = self.parse_binary(0, no_in=no_in)
        if self.at("?") and not self.at("?."):
            self.next()
            cons = self.parse_assign()
            self.expect(":")
            alt = self.parse_assign(no_in=no_in)
            return ast.Cond(test.line, test.col, test, cons, alt)
        return test

    def parse_binary(self, level: int, no_in: bool = False) -> ast.Node:
        if level >= len(_BINARY_LEVELS):
            return self.parse_exponent(no_in=no_in)
        left = self.parse_binary(level + 1, no_in=no_in)
        ops = _BINARY_LEVELS[level]
        while True:
            tok = self.peek()
            value = tok.value
            if value not in ops:
                break
            if value in ("instanceof", "in") and tok.kind != "name":
                break
            if value == "in" and no_in:
                break
            if value in ("<", ">") and tok.kind != "punct":
                break
            self.next()
            right = self.parse_binary(level + 1, no_in=no_in)
            left = ast.Binary(left.line, left.col, value, left, right)
        return left

    def parse_exponent(self, no_in: bool = False) -> ast.Node:
        base = self.parse_unary()
        if self.at("**"):
            self.next()
            exp = self.parse_exponent(no_in=no_in)
            return ast.Binary(base.line, base.col, "**", base, exp)
        return base

    def parse_unary(self) -> ast.Node:
        tok = self.peek()
        if (tok.kind == "punct" and tok.value in ("!", "~", "+", "-")) or \
                (tok.kind == "name" and tok.value in
                 ("typeof", "void", "delete", "await")):
            self.next()
            arg = self.parse_unary()
            return ast.Unary(tok.line, tok.col, tok.value, arg, prefix=True)
        if tok.kind == "punct" and tok.value in ("++", "--"):
            self.next()
            arg = self.parse_unary()
            return ast.Unary(tok.line, tok.col, tok.value, arg, prefix=True)
        return self.parse_postfix()

    def parse_postfix(self) -> ast.Node:
        expr = self.parse_call_member()
        tok = self.peek()
        if tok.kind == "punct" and tok.value in ("++", "--") \
                and tok.line == self.tokens[self.pos - 1].line:
            self.next()
            return ast.Unary(expr.line, expr.col, tok.value, expr,
                             prefix=False)
        return expr

    def parse_call_member(self) -> ast.Node:
        if self.at("new"):
            start = self.next()
            callee = self._member_chain(self.parse_primary(), calls=False)
            args: list[ast.Node] = []
            if self.at("("):
                args = self.parse_args()
            node: ast.Node = ast.Call(start.line, start.col, callee, args,
                                      is_new=True)
            return self._member_chain(node, calls=True)
        return self._member_chain(self.parse_primary(), calls=True)

    def _member_chain(self, base: ast.Node, calls: bool) -> ast.Node:
        while True:
            tok = self.peek()
            if self.at(".") or self.at("?."):
                self.next()
                if self.at("(") and tok.value == "?.":
                    if not calls:
                        break
                    args = self.parse_args()
                    base = ast.Call(base.line, base.col, base, args)
                    continue
                name = self.next()
                if name.kind != "name":
                    raise JsSyntaxError("expected property name",
                                        name.line, name.col)
                base = ast.Member(base.line, base.col, base, name.value)
            elif self.at("["):
                self.next()
                index = self.parse_expression()
                self.expect("]")
                base = ast.Member(base.line, base.col, base, None,
                                  computed=True, prop_expr=index)
            elif calls and self.at("("):
                args = self.parse_args()
                base = ast.Call(base.line, base.col, base, args)
            elif self.peek().kind in ("template_full", "template_head"):
                quasi = self.parse_template()
                base = ast.Call(base.line, base.col, base,
                                list(quasi.exprs) or [quasi])
            else:
                break
        return base

    def parse_args(self) -> list[ast.Node]:
        self.expect("(")
        args: list[ast.Node] = []
        while not self.at(")"):
            if self.match("..."):
                tok = self.tokens[self.pos - 1]
                args.append(ast.Spread(tok.line, tok.col, self.parse_assign()))
            else:
                args.append(self.parse_assign())
            if not self.match(","):
                break
        self.expect(")")
        return args

    def parse_template(self) -> ast.TemplateLit:
        tok = self.next()
        if tok.kind == "template_full":
            return ast.TemplateLit(tok.line, tok.col, [tok.value], [])
        assert tok.kind == "template_head"
        strings = [tok.value]
        exprs: list[ast.Node] = []
        while True:
            exprs.append(self.parse_expression())
            part = self.next()
            if part.kind == "template_middle":
                strings.append(part.value)
                continue
            if part.kind == "template_tail":
                strings.append(part.value)
                return ast.TemplateLit(tok.line, tok.col, strings, exprs)
            raise JsSyntaxError("malformed template literal",
                                part.line, part.col)

    def parse_primary(self) -> ast.Node:
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            return ast.Lit(tok.line, tok.col, tok.value, tok.value)
        if tok.kind == "str":
            self.next()
            return ast.Lit(tok.line, tok.col, tok.value,
                           repr(tok.value))
        if tok.kind == "regex":
            self.next()
            return ast.Lit(tok.line, tok.col, tok.value, tok.value)
        if tok.kind in ("template_full", "template_head"):
            return self.parse_template()
        if tok.kind == "punct":
            if tok.value == "(":
                self.next()
                expr = self.parse_expression()
                self.expect(")")
                return expr
            if tok.value == "[":
                return self.parse_array_literal()
            if tok.value == "{":
                return self.parse_object_literal()
        if tok.kind == "name":
            if tok.value == "function" or (
                    tok.value == "async" and self.peek(1).value == "function"
                    and self.peek(1).line == tok.line):
                return self.parse_function(is_declaration=False)
            if tok.value == "class":
                return self.parse_class()
            if tok.value in ("true", "false", "null", "undefined"):
                self.next()
                return ast.Lit(tok.line, tok.col, tok.value, tok.value)
            if tok.value == "this":
                self.next()
                return ast.Ident(tok.line, tok.col, "this")
            if tok.value == "super":
                self.next()
                return ast.Ident(tok.line, tok.col, "super")
            if tok.value == "yield":
                self.next()
                if not (self.at(";") or self.at(")") or self.at("}")
                        or self.at(",") or self.at("]")
                        or self.peek().kind == "eof"
                        or self.peek().line > tok.line):
                    self.match("*")
                    arg = self.parse_assign()
                    return ast.Unary(tok.line, tok.col, "yield", arg)
                return ast.Lit(tok.line, tok.col, "undefined", "undefined")
            if tok.is_keyword and tok.value not in ("of", "from", "as",
                                                    "get", "set", "static",
                                                    "async", "await", "let",
                                                    "undefined"):
                raise JsSyntaxError(f"unexpected keyword {tok.value!r}",
                                    tok.line, tok.col)
            self.next()
            return ast.Ident(tok.line, tok.col, tok.value)
        raise JsSyntaxError(f"unexpected token {tok.value or tok.kind!r}",
                            tok.line, tok.col)

    def parse_array_literal(self) -> ast.ArrayLit:
        start = self.expect("[")
        elements: list[ast.Node] = []
        while not self.at("]"):
            if self.at(","):
                self.next()
                continue
            if self.match("..."):
                tok = self.tokens[self.pos - 1]
                elements.append(ast.Spread(tok.line, tok.col,
                                           self.parse_assign()))
            else:
                elements.append(self.parse_assign())
            if not self.at("]"):
                if not self.match(","):
                    break
        self.expect("]")
        return ast.ArrayLit(start.line, start.col, elements)

    def parse_object_literal(self) -> ast.ObjectLit:
        start = self.expect("{")
        props: list[ast.ObjectProp] = []
        while not self.at("}"):
            tok = self.peek()
            if self.match("..."):
                spread_tok = self.tokens[self.pos - 1]
                props.append(ast.ObjectProp(
                    tok.line, tok.col, None,
                    ast.Spread(spread_tok.line, spread_tok.col,
                               self.parse_assign()),
                    computed=True))
            else:
                is_method_modifier = False
                if tok.value in ("get", "set", "async") and \
                        self.peek(1).kind in ("name", "str", "num") and \
                        self.peek(1).value != ":" and \
                        not (self.peek(1).kind == "punct"):
                    self.next()
                    is_method_modifier = True
                    tok = self.peek()
                self.match("*")
                computed = False
                if self.at("["):
                    self.next()
                    self.parse_assign()
                    self.expect("]")
                    key = None
                    computed = True
                else:
                    key_tok = self.next()
                    if key_tok.kind not in ("name", "str", "num"):
                        raise JsSyntaxError("expected property key",
                                            key_tok.line, key_tok.col)
                    key = str(key_tok.value)
                if self.at("("):
                    func = self._finish_function(tok.line, tok.col, key,
                                                 is_arrow=False)
                    props.append(ast.ObjectProp(tok.line, tok.col, key, func,
                                                computed=computed,
                                                method=True))
                elif self.match(":"):
                    value = self.parse_assign()
                    props.append(ast.ObjectProp(tok.line, tok.col, key, value,
                                                computed=computed))
                elif key is not None and not is_method_modifier:
                    shorthand = ast.Ident(tok.line, tok.col, key)
                    if self.match("="):
                        self.parse_assign()
                    props.append(ast.ObjectProp(tok.line, tok.col, key,
                                                shorthand))
                else:
                    raise self.error_here("malformed object property")
            if not self.match(","):
                break
        self.expect("}")
        return ast.ObjectLit(start.line, start.col, props)


# --- doc-comment attachment ----------------------------------------------

def _clean_doc(text: str) -> tuple[str, dict[str, str]]:
    """Strip comment decoration; split free text from @param entries."""
    import re
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("*"):
            line = line[1:].strip()
        lines.append(line)
    cleaned = "\n".join(lines).strip()
    # Tags may start mid-line in single-line comments; split at each @tag.
    chunks = re.split(r"(?:(?<=\s)|(?<=^))(?=@\w)", cleaned)
    description = " ".join(chunks[0].split()) if chunks else ""
    params: dict[str, str] = {}
    param_re = re.compile(
        r"@param\s+(?:\{[^}]*\}\s*)?\[?([\w$.]+)(?:=[^\]]*)?\]?\s*(?:-\s*)?(.*)",
        re.S)
    for chunk in chunks[1:]:
        m = param_re.match(chunk.strip())
        if m:
            name = m.group(1)
            desc = " ".join(m.group(2).split())
            if desc:
                params[name] = desc
    return description, params


def iter_nodes(node: object):
    """Depth-first traversal over every AST node reachable from ``node``."""
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, ast.Node):
            yield current
        if isinstance(current, (list, tuple)):
            stack.extend(x for x in current if x is not None)
            continue
        if isinstance(current, (ast.Node, ast.Declarator, ast.ObjectProp,
                                ast.SwitchCase, ast.ClassMethod,
                                ast.PatternProp)):
            import dataclasses
            for f in dataclasses.fields(current):
                value = getattr(current, f.name)
                if isinstance(value, (ast.Node, list, tuple, ast.Declarator,
                                      ast.ObjectProp, ast.SwitchCase,
                                      ast.ClassMethod, ast.PatternProp)):
                    stack.append(value)


def _attach_docs(program: ast.Program, comments: list[Comment]) -> None:
    by_end_line: dict[int, Comment] = {}
    for comment in comments:
        if comment.block:
            by_end_line[comment.end_line] = comment
    for node in iter_nodes(program):
        if not isinstance(node, ast.FunctionNode):
            continue
        comment = by_end_line.get(node.line - 1) or by_end_line.get(node.line)
        if comment is None:
            continue
        description, params = _clean_doc(comment.text)
        node.doc = description or None
        node.param_docs = params


def parse_module(source: str) -> ast.Program:
    """Parse one JavaScript file into a positioned AST.

    Raises JsSyntaxError with line/column on malformed input. Doc comments
    are attached to the functions they immediately precede.
    """
    tokens, comments = tokenize(source)
    program = _Parser(tokens).parse_program()
    _attach_docs(program, comments)
    return program
