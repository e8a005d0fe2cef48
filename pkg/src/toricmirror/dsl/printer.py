"""Pretty-printer producing text that parses back to the same syntax tree."""

from __future__ import annotations

from fractions import Fraction

from . import ast as A

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node) -> int:
    if isinstance(node, A.BinOp):
        return _PREC[node.op]
    if isinstance(node, A.Neg):
        return 3
    if isinstance(node, A.Pow):
        return 4
    return 5


def print_expr(node, need: int = 0) -> str:
    if isinstance(node, A.Num):
        s = str(node.value)
    elif isinstance(node, A.Name):
        s = node.name
    elif isinstance(node, A.Neg):
        s = "-" + print_expr(node.operand, 3)
    elif isinstance(node, A.Pow):
        s = f"{print_expr(node.base, 5)}^{node.exponent}"
    elif isinstance(node, A.BinOp):
        p = _PREC[node.op]
        left = print_expr(node.left, p)
        right = print_expr(node.right, p + 1)
        s = f"{left} {node.op} {right}" if p == 1 else f"{left}{node.op}{right}"
    else:
        raise TypeError(f"not an expression node: {node!r}")
    return f"({s})" if _prec(node) < need else s


def _rat(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _var_decl(d: A.VarDecl) -> str:
    head = d.domain if d.order is None else f"{d.domain}({d.order})"
    return f"{head} {', '.join(d.names)}"


def _images(images) -> str:
    return ", ".join(f"{n} -> {print_expr(e)}" for n, e in images)


def print_step(s) -> str:
    if isinstance(s, A.ChangeStep):
        out = f"change {{ {_images(s.images)} }}"
        if s.declare:
            out += " with " + ", ".join(_var_decl(d) for d in s.declare)
        return out
    if isinstance(s, A.DualChangeStep):
        out = f"dual-change {{ {_images(s.images)} }}"
        if s.pairing:
            out += " pair " + ", ".join(f"{a} = {b}" for a, b in s.pairing)
        return out
    if isinstance(s, A.CompactifyStep):
        return "compactify " + ", ".join(s.names)
    if isinstance(s, A.KnorrerReduceStep):
        return f"knorrer-reduce {s.var}"
    if isinstance(s, A.KnorrerExpandStep):
        return f"knorrer-expand {print_expr(s.expr)} as {s.var}"
    if isinstance(s, A.EliminateStep):
        out = f"eliminate {s.index} for {s.var}"
        if s.promote:
            out += " promote " + ", ".join(s.promote)
        return out
    if isinstance(s, A.SliceStep):
        if s.value is None:
            return f"slice {s.sigma} = generic" + (f" as {s.param}" if s.param else "")
        return f"slice {s.sigma} = {_rat(s.value)}"
    if isinstance(s, A.CompleteStep):
        out = f"complete {s.sigma} = {_rat(s.value)}"
        if s.order is not None:
            out += f" order {s.order}"
        if s.var is not None:
            out += f" as {s.var}"
        return out
    if isinstance(s, A.AddTermStep):
        return f"add-term {print_expr(s.expr)}"
    if isinstance(s, A.AbsorbUnitsStep):
        return "absorb-units"
    raise TypeError(f"not a step: {s!r}")


def print_expect(e: A.Expect) -> str:
    k = e.kind
    over = (" over " + ", ".join(e.over)) if e.over else ""
    if k == "potential-equals":
        body = f"{e.subject} = {print_expr(e.expr)}"
    elif k == "sigma-equals":
        body = f"{e.subject} {e.name} = {print_expr(e.expr)}"
    elif k == "constraints-equal":
        body = f"{e.subject} = " + (", ".join(print_expr(x) for x in e.exprs) or "none")
    elif k == "vars":
        body = f"{e.subject} = " + ", ".join(f"{n}: {d}" for n, d in e.exprs)
    elif k in ("crit-empty", "crit-nonempty"):
        body = f"{e.subject}{over}"
    elif k == "crit-contained-in":
        body = f"{e.subject} {print_expr(e.expr)}{over}"
    elif k == "critical-values":
        tail = e.outcome + (f" {print_expr(e.expr)}" if e.expr is not None else "")
        body = f"{e.subject}{over} = {tail}"
    elif k == "grading":
        if e.outcome == "infeasible":
            body = f"{e.subject} infeasible"
        else:
            parts = [f"{n} = {_rat(w)}" for n, w in e.weights]
            body = f"{e.subject} " + ", ".join(parts)
            if e.ints:
                body += f" dof {e.ints[0]}"
    elif k == "sign":
        body = f"{e.ints[0]} = {e.ints[1]}"
    elif k == "compatible":
        body = e.subject
    elif k == "crit-points":
        body = f"{e.subject} = {e.ints[0]}" + (" nondegenerate" if e.outcome else "")
    else:
        raise TypeError(f"unknown expectation kind {k!r}")
    return f"expect {k} {body};"


def print_item(item) -> str:
    if isinstance(item, A.ModelItem):
        lines = [f"model {item.name} {{"]
        for d in item.decls:
            if isinstance(d, A.VarDecl):
                lines.append(f"  {_var_decl(d)};")
            elif isinstance(d, A.PotentialDecl):
                lines.append(f"  potential {print_expr(d.expr)};")
            elif isinstance(d, A.SigmaDecl):
                lines.append(f"  sigma {d.name} = {print_expr(d.expr)};")
            elif isinstance(d, A.ConstraintDecl):
                lines.append(f"  constraint {print_expr(d.expr)};")
            elif isinstance(d, A.GradeDecl):
                lines.append(f"  grade {d.name} = {_rat(d.weight)};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(item, A.ToricItem):
        lines = [f"toric {item.name} {{"]
        if item.dual:
            lines.append(f"  dual {', '.join(item.dual)};")
        for r in item.rays:
            lines.append("  ray " + " ".join(map(str, r)) + ";")
        for n, l in item.actions:
            lines.append(f"  action {n} = " + " ".join(map(str, l)) + ";")
        for d in item.primal_vars:
            lines.append(f"  primal {_var_decl(d)};")
        if item.primal_potential is not None:
            lines.append(f"  primal-potential {print_expr(item.primal_potential)};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(item, A.PipelineItem):
        head = f"pipeline {item.name} on {item.source}"
        if item.primal:
            head += f" primal {item.primal}"
        lines = [head + " {"]
        lines += [f"  {print_step(s)};" for s in item.steps]
        lines.append("}")
        return "\n".join(lines)
    if isinstance(item, A.TransitionItem):
        return f"transition {item.name}: {item.source} -> {item.target} {{ {_images(item.images)} }};"
    if isinstance(item, A.Expect):
        return print_expect(item)
    raise TypeError(f"not an item: {item!r}")


def print_file(f: A.FileAst) -> str:
    if not f.items:
        return ""
    out = []
    for prev, item in zip((None,) + f.items[:-1], f.items):
        if prev is not None:
            both = isinstance(prev, A.Expect) and isinstance(item, A.Expect)
            out.append("\n" if both else "\n\n")
        out.append(print_item(item))
    return "".join(out) + "\n"
