"""Recursive-descent parser for ``.tmc`` files.

Grammar summary (``#`` starts a comment)::

    file      := item*
    item      := model | toric | pipeline | transition | expect
    model     := "model" IDENT "{" mdecl* "}"
    mdecl     := ("torus" | "affine" | "formal" ["(" INT ")"]) names ";"
               | "potential" expr ";" | "sigma" IDENT "=" expr ";"
               | "constraint" expr ";" | "grade" IDENT "=" rational ";"
    toric     := "toric" IDENT "{" tdecl* "}"
    tdecl     := "dual" names ";" | "ray" INT* ";" | "action" IDENT "=" INT* ";"
               | "primal" ("torus" | "affine") names ";" | "primal-potential" expr ";"
    pipeline  := "pipeline" IDENT "on" IDENT ["primal" IDENT] "{" step* "}"
    transition:= "transition" IDENT ":" IDENT "->" IDENT "{" image ("," image)* "}" ";"
    expect    := "expect" KIND ... ";"
    expr      := term (("+" | "-") term)*
    term      := unary (("*" | "/") unary)*
    unary     := "-" unary | power
    power     := atom ["^" ["-"] INT]
    atom      := INT | IDENT | "(" expr ")"
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ParseError
from . import ast as A
from .lexer import Token, tokenize

DOMAINS = ("torus", "affine", "formal")


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("SYM", "IDENT") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "IDENT":
            self.error(f"expected {what}")
        return self.advance().text

    def integer(self) -> int:
        neg = self.accept("-")
        if self.tok.kind != "INT":
            self.error("expected an integer")
        v = int(self.advance().text)
        return -v if neg else v

    def rational(self) -> Fraction:
        v = Fraction(self.integer())
        if self.accept("/"):
            if self.tok.kind != "INT":
                self.error("expected a denominator")
            d = int(self.advance().text)
            if d == 0:
                self.error("zero denominator", self.tokens[self.i - 1])
            v /= d
        return v

    def names(self) -> tuple[str, ...]:
        out = [self.ident()]
        while self.accept(","):
            out.append(self.ident())
        return tuple(out)

    def ints_until(self, stop: str) -> tuple[int, ...]:
        out = []
        while not self.at(stop):
            out.append(self.integer())
            self.accept(",")
        return tuple(out)

    # expressions

    def expr(self):
        t = self.tok
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            node = A.BinOp(op, node, self.term(), pos=(t.line, t.col))
        return node

    def term(self):
        t = self.tok
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            node = A.BinOp(op, node, self.unary(), pos=(t.line, t.col))
        return node

    def unary(self):
        t = self.tok
        if self.accept("-"):
            return A.Neg(self.unary(), pos=(t.line, t.col))
        return self.power()

    def power(self):
        t = self.tok
        base = self.atom()
        if self.accept("^"):
            return A.Pow(base, self.integer(), pos=(t.line, t.col))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "INT":
            self.advance()
            return A.Num(int(t.text), pos=(t.line, t.col))
        if t.kind == "IDENT":
            self.advance()
            return A.Name(t.text, pos=(t.line, t.col))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected an expression")

    # items

    def parse(self) -> A.FileAst:
        items = []
        while self.tok.kind != "EOF":
            items.append(self.item())
        return A.FileAst(tuple(items))

    def item(self):
        t = self.tok
        if self.at("model"):
            return self.model()
        if self.at("toric"):
            return self.toric()
        if self.at("pipeline"):
            return self.pipeline()
        if self.at("transition"):
            return self.transition()
        if self.at("expect"):
            return self.expectation()
        self.error("expected 'model', 'toric', 'pipeline', 'transition' or 'expect'", t)

    def var_decl(self) -> A.VarDecl:
        t = self.tok
        domain = self.ident()
        if domain not in DOMAINS:
            self.error("expected a variable domain", t)
        order = None
        if domain == "formal" and self.accept("("):
            if self.tok.kind != "INT":
                self.error("expected the formal order")
            order = int(self.advance().text)
            self.expect(")")
        names = [self.ident()]
        # a comma followed by a domain keyword starts the next declaration
        while self.at(",") and not (self.peek().kind == "IDENT" and self.peek().text in DOMAINS):
            self.advance()
            names.append(self.ident())
        return A.VarDecl(domain, tuple(names), order, pos=(t.line, t.col))

    def model(self) -> A.ModelItem:
        t = self.expect("model")
        name = self.ident("model name")
        self.expect("{")
        decls = []
        while not self.accept("}"):
            d = self.tok
            pos = (d.line, d.col)
            if self.tok.kind == "IDENT" and self.tok.text in DOMAINS:
                decls.append(self.var_decl())
            elif self.accept("potential"):
                decls.append(A.PotentialDecl(self.expr(), pos=pos))
            elif self.accept("sigma"):
                n = self.ident("sigma name")
                self.expect("=")
                decls.append(A.SigmaDecl(n, self.expr(), pos=pos))
            elif self.accept("constraint"):
                decls.append(A.ConstraintDecl(self.expr(), pos=pos))
            elif self.accept("grade"):
                n = self.ident()
                self.expect("=")
                decls.append(A.GradeDecl(n, self.rational(), pos=pos))
            else:
                self.error("expected a model declaration")
            self.expect(";")
        return A.ModelItem(name, tuple(decls), pos=(t.line, t.col))

    def toric(self) -> A.ToricItem:
        t = self.expect("toric")
        name = self.ident("toric name")
        self.expect("{")
        dual, rays, actions, pvars, ppot = (), [], [], [], None
        while not self.accept("}"):
            if self.accept("dual"):
                dual = self.names()
            elif self.accept("ray"):
                rays.append(self.ints_until(";"))
            elif self.accept("action"):
                n = self.ident()
                self.expect("=")
                actions.append((n, self.ints_until(";")))
            elif self.accept("primal"):
                d = self.tok
                decl = self.var_decl()
                if decl.domain == "formal":
                    self.error("primal variables are torus or affine", d)
                pvars.append(decl)
            elif self.accept("primal-potential"):
                ppot = self.expr()
            else:
                self.error("expected a toric declaration")
            self.expect(";")
        return A.ToricItem(name, dual, tuple(rays), tuple(actions), tuple(pvars), ppot,
                           pos=(t.line, t.col))

    def images(self, arrow: str = "->") -> tuple[tuple[str, object], ...]:
        out = []
        while True:
            n = self.ident()
            self.expect(arrow)
            out.append((n, self.expr()))
            if not self.accept(","):
                break
        return tuple(out)

    def pipeline(self) -> A.PipelineItem:
        t = self.expect("pipeline")
        name = self.ident("pipeline name")
        self.expect("on")
        source = self.ident("source name")
        primal = self.ident("primal model name") if self.accept("primal") else None
        self.expect("{")
        steps = []
        while not self.accept("}"):
            steps.append(self.step())
            self.expect(";")
        return A.PipelineItem(name, source, primal, tuple(steps), pos=(t.line, t.col))

    def step(self):
        t = self.tok
        pos = (t.line, t.col)
        if self.accept("change"):
            self.expect("{")
            imgs = self.images()
            self.expect("}")
            declare = []
            if self.accept("with"):
                declare.append(self.var_decl())
                while self.accept(","):
                    declare.append(self.var_decl())
            return A.ChangeStep(imgs, tuple(declare), pos=pos)
        if self.accept("dual-change"):
            self.expect("{")
            imgs = self.images()
            self.expect("}")
            pairing = []
            if self.accept("pair"):
                while True:
                    a = self.ident()
                    self.expect("=")
                    pairing.append((a, self.ident()))
                    if not self.accept(","):
                        break
            return A.DualChangeStep(imgs, tuple(pairing), pos=pos)
        if self.accept("compactify"):
            return A.CompactifyStep(self.names(), pos=pos)
        if self.accept("knorrer-reduce"):
            return A.KnorrerReduceStep(self.ident(), pos=pos)
        if self.accept("knorrer-expand"):
            e = self.expr()
            self.expect("as")
            return A.KnorrerExpandStep(e, self.ident(), pos=pos)
        if self.accept("eliminate"):
            if self.tok.kind != "INT":
                self.error("expected a constraint index")
            index = int(self.advance().text)
            self.expect("for")
            var = self.ident()
            promote = self.names() if self.accept("promote") else ()
            return A.EliminateStep(index, var, promote, pos=pos)
        if self.accept("slice"):
            sigma = self.ident()
            self.expect("=")
            if self.accept("generic"):
                param = self.ident() if self.accept("as") else None
                return A.SliceStep(sigma, None, param, pos=pos)
            return A.SliceStep(sigma, self.rational(), pos=pos)
        if self.accept("complete"):
            sigma = self.ident()
            self.expect("=")
            value = self.rational()
            order = var = None
            if self.accept("order"):
                if self.tok.kind != "INT":
                    self.error("expected the formal order")
                order = int(self.advance().text)
            if self.accept("as"):
                var = self.ident()
            return A.CompleteStep(sigma, value, order, var, pos=pos)
        if self.accept("add-term"):
            return A.AddTermStep(self.expr(), pos=pos)
        if self.accept("absorb-units"):
            return A.AbsorbUnitsStep(pos=pos)
        self.error("expected a pipeline step")

    def transition(self) -> A.TransitionItem:
        t = self.expect("transition")
        name = self.ident("transition name")
        self.expect(":")
        src = self.ident()
        self.expect("->")
        dst = self.ident()
        self.expect("{")
        imgs = self.images()
        self.expect("}")
        self.expect(";")
        return A.TransitionItem(name, src, dst, imgs, pos=(t.line, t.col))

    def over(self) -> tuple[str, ...]:
        return self.names() if self.accept("over") else ()

    def expectation(self) -> A.Expect:
        t = self.expect("expect")
        pos = (t.line, t.col)
        k = self.tok
        kind = self.ident("expectation kind")
        if kind == "potential-equals":
            subj = self.ident()
            self.expect("=")
            node = A.Expect(kind, subj, expr=self.expr(), pos=pos)
        elif kind == "sigma-equals":
            subj = self.ident()
            name = self.ident("sigma name")
            self.expect("=")
            node = A.Expect(kind, subj, name=name, expr=self.expr(), pos=pos)
        elif kind == "constraints-equal":
            subj = self.ident()
            self.expect("=")
            if self.accept("none"):
                exprs = ()
            else:
                exprs = [self.expr()]
                while self.accept(","):
                    exprs.append(self.expr())
            node = A.Expect(kind, subj, exprs=tuple(exprs), pos=pos)
        elif kind == "vars":
            subj = self.ident()
            self.expect("=")
            specs = []
            while True:
                n = self.ident()
                self.expect(":")
                d = self.tok
                dom = self.ident("domain")
                if dom not in DOMAINS:
                    self.error("expected a variable domain", d)
                if dom == "formal":
                    self.expect("(")
                    if self.tok.kind != "INT":
                        self.error("expected the formal order")
                    dom = f"formal({self.advance().text})"
                    self.expect(")")
                specs.append((n, dom))
                if not self.accept(","):
                    break
            node = A.Expect(kind, subj, exprs=tuple(specs), pos=pos)
        elif kind in ("crit-empty", "crit-nonempty"):
            subj = self.ident()
            node = A.Expect(kind, subj, over=self.over(), pos=pos)
        elif kind == "crit-contained-in":
            subj = self.ident()
            e = self.expr()
            node = A.Expect(kind, subj, expr=e, over=self.over(), pos=pos)
        elif kind == "critical-values":
            subj = self.ident()
            self.expect("over")
            over = self.names()
            self.expect("=")
            o = self.tok
            outcome = self.ident("critical value outcome")
            e = None
            if outcome == "hypersurface":
                e = self.expr()
            elif outcome not in ("all", "empty", "subvariety"):
                self.error("expected 'hypersurface', 'all', 'empty' or 'subvariety'", o)
            node = A.Expect(kind, subj, expr=e, over=over, outcome=outcome, pos=pos)
        elif kind == "grading":
            subj = self.ident()
            if self.accept("infeasible"):
                node = A.Expect(kind, subj, outcome="infeasible", pos=pos)
            else:
                weights = []
                while self.tok.kind == "IDENT" and not self.at("dof"):
                    n = self.ident()
                    self.expect("=")
                    weights.append((n, self.rational()))
                    self.accept(",")
                ints = ()
                if self.accept("dof"):
                    if self.tok.kind != "INT":
                        self.error("expected an integer")
                    ints = (int(self.advance().text),)
                node = A.Expect(kind, subj, weights=tuple(weights), ints=ints, outcome="feasible", pos=pos)
        elif kind == "sign":
            k_ = self.integer()
            self.expect("=")
            node = A.Expect(kind, ints=(k_, self.integer()), pos=pos)
        elif kind == "compatible":
            node = A.Expect(kind, self.ident("transition name"), pos=pos)
        elif kind == "crit-points":
            subj = self.ident()
            self.expect("=")
            if self.tok.kind != "INT":
                self.error("expected a point count")
            count = int(self.advance().text)
            outcome = "nondegenerate" if self.accept("nondegenerate") else None
            node = A.Expect(kind, subj, ints=(count,), outcome=outcome, pos=pos)
        else:
            self.error("unknown expectation kind", k)
        self.expect(";")
        return node


def parse_model_file(text: str) -> A.FileAst:
    return Parser(text).parse()


def parse_expr(text: str):
    p = Parser(text)
    e = p.expr()
    if p.tok.kind != "EOF":
        p.error("unexpected text after expression")
    return e
