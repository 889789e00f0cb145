"""S-expression reader and printer for the expression language.

Grammar, one page.  Atoms are whitespace separated, ';' starts a comment
running to end of line.

  line     = (fin N) | (omega-succ) | (omega1-succ) | (rev line)
           | (finsum line line ...) | (omega-sum line) | (omega1-sum line)
           | (center-sum line) | (center-sum1 line) | (dup line set)
           | (example io-minus1) | (example io-n N)
           | (example trunc N) | (example point-trunc N)
  set      = (nest N) | (pts point ...) | (union set set)
           | (geo RAT side) | (affine set RAT RAT)
           | (center-points line) | (dup-points line) | (m-points line)
           | (approach line point side)
  quotient = (canonical line set)
  function = (fun line RAT term ...)
  term     = (ramp RAT point point) | (pull RAT line point point)
  point    = step | (path step ...)           a bare step means one step
  step     = (idx N) | (ord ORD) | (desc ORD)
           | center | top | rev | lo | hi | plain
  side     = left | right
  ORD      = ordinal literal: 0, 3, w, w+1, w*2, w^2*3+w+4
  RAT      = integer or p/q
"""

from fractions import Fraction

import ordlines.ordinals as od
import ordlines.lines as ln
import ordlines.sets as se
import ordlines.functions as fu
import ordlines.quotients as qt
import ordlines.scattered as sc


class ParseError(Exception):
    def __init__(self, line, col, expected):
        super().__init__(f"line {line}, col {col}: expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


# ------------------------------------------------------------- reading

def _tokens(text):
    out = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == '\n':
            line, col = line + 1, 1
            i += 1
        elif ch in ' \t\r':
            col += 1
            i += 1
        elif ch == ';':
            while i < len(text) and text[i] != '\n':
                i += 1
        elif ch in '()':
            out.append((ch, line, col))
            col += 1
            i += 1
        else:
            j = i
            while j < len(text) and text[j] not in ' \t\r\n();':
                j += 1
            out.append((text[i:j], line, col))
            col += j - i
            i = j
    return out


def _read(toks, i, eline, ecol):
    if i >= len(toks):
        raise ParseError(eline, ecol, "an expression")
    t, line, col = toks[i]
    if t == '(':
        items = []
        i += 1
        while True:
            if i >= len(toks):
                raise ParseError(line, col, "a closing parenthesis")
            if toks[i][0] == ')':
                return ('list', items, line, col), i + 1
            node, i = _read(toks, i, line, col)
            items.append(node)
    if t == ')':
        raise ParseError(line, col, "an expression, not ')'")
    return ('atom', t, line, col), i + 1


def read(text):
    """One expression tree from text; trailing garbage is an error."""
    toks = _tokens(text)
    node, i = _read(toks, 0, 1, 1)
    if i != len(toks):
        t, line, col = toks[i]
        raise ParseError(line, col, "end of input")
    return build(node)


def _fail(node, expected):
    raise ParseError(node[2], node[3], expected)


def _atom(node, what):
    if node[0] != 'atom':
        _fail(node, what)
    return node[1]


def _items(node, what):
    if node[0] != 'list' or not node[1] or node[1][0][0] != 'atom':
        _fail(node, what)
    return node[1][0][1], node[1][1:]


def _nat(node):
    s = _atom(node, "a number")
    if not s.isdigit():
        _fail(node, "a number")
    return int(s)


def _rat(node):
    s = _atom(node, "a rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        _fail(node, "a rational")


def _ord(node):
    s = _atom(node, "an ordinal literal")
    try:
        return od.parse_cnf(s)
    except ValueError:
        _fail(node, "an ordinal literal")


def _side(node):
    s = _atom(node, "left or right")
    if s == 'left':
        return ln.LEFT
    if s == 'right':
        return ln.RIGHT
    _fail(node, "left or right")


_BARE_STEPS = {'center': ln.CENTER, 'top': ln.TOP, 'rev': ln.REVSTEP,
               'lo': ln.LO, 'hi': ln.HI, 'plain': ln.PLAIN}


def _step(node):
    if node[0] == 'atom':
        if node[1] in _BARE_STEPS:
            return _BARE_STEPS[node[1]]
        _fail(node, "a step")
    head, args = _items(node, "a step")
    if head == 'idx' and len(args) == 1:
        return ('idx', _nat(args[0]))
    if head in ('ord', 'desc') and len(args) == 1:
        return (head, _ord(args[0]))
    _fail(node, "a step")


def _point(node):
    if (node[0] == 'list' and node[1] and node[1][0][0] == 'atom'
            and node[1][0][1] == 'path'):
        return tuple(_step(s) for s in node[1][1:])
    return (_step(node),)


def _pts_member(node):
    # interval-ambient sets list plain rationals, line ambients list paths
    if node[0] == 'atom' and node[1] not in _BARE_STEPS:
        return _rat(node)
    return _point(node)


def _arity(node, args, n, what):
    if len(args) != n:
        _fail(node, what)
    return args


_EXAMPLES = {'io-minus1': (sc.IoMinus1, 0), 'io-n': (sc.IoN, 1),
             'trunc': (sc.IoInfinityTrunc, 1),
             'point-trunc': (sc.PointIoInfinityTrunc, 1)}


def build(node):
    """Domain object for a parsed node: line, set, quotient or function."""
    if node[0] != 'list':
        _fail(node, "a parenthesized expression")
    head, args = _items(node, "an expression")
    if head == 'fin':
        return ln.Fin(_nat(_arity(node, args, 1, "(fin N)")[0]))
    if head == 'omega-succ':
        _arity(node, args, 0, "(omega-succ)")
        return ln.OmegaSucc()
    if head == 'omega1-succ':
        _arity(node, args, 0, "(omega1-succ)")
        return ln.Omega1Succ()
    if head == 'rev':
        return ln.Rev(build(_arity(node, args, 1, "(rev line)")[0]))
    if head == 'finsum':
        if not args:
            _fail(node, "(finsum line ...)")
        return ln.FinSum(tuple(build(a) for a in args))
    if head == 'omega-sum':
        return ln.OmegaSum(build(_arity(node, args, 1, "(omega-sum line)")[0]))
    if head == 'omega1-sum':
        return ln.Omega1Sum(
            build(_arity(node, args, 1, "(omega1-sum line)")[0]))
    if head == 'center-sum':
        return ln.CenterSum(
            build(_arity(node, args, 1, "(center-sum line)")[0]))
    if head == 'center-sum1':
        return ln.CenterSum1(
            build(_arity(node, args, 1, "(center-sum1 line)")[0]))
    if head == 'dup':
        _arity(node, args, 2, "(dup line set)")
        return ln.DupSet(build(args[0]), build(args[1]))
    if head == 'example':
        if not args:
            _fail(node, "(example tag ...)")
        tag = _atom(args[0], "an example tag")
        if tag not in _EXAMPLES:
            _fail(args[0], "a known example tag")
        cls, k = _EXAMPLES[tag]
        _arity(node, args, 1 + k, f"(example {tag}{' N' * k})")
        return sc.example_line(cls(*(_nat(a) for a in args[1:])))
    if head == 'nest':
        return se.Nest(_nat(_arity(node, args, 1, "(nest N)")[0]))
    if head == 'pts':
        return se.FinitePts(tuple(_pts_member(a) for a in args))
    if head == 'union':
        _arity(node, args, 2, "(union set set)")
        return se.Union(build(args[0]), build(args[1]))
    if head == 'geo':
        _arity(node, args, 2, "(geo rat side)")
        return se.GeoSeq(_rat(args[0]), _side(args[1]))
    if head == 'affine':
        _arity(node, args, 3, "(affine set rat rat)")
        return se.AffineImage(build(args[0]), _rat(args[1]), _rat(args[2]))
    if head == 'center-points':
        return se.CenterPoints(
            build(_arity(node, args, 1, "(center-points line)")[0]))
    if head == 'dup-points':
        return se.DupPoints(
            build(_arity(node, args, 1, "(dup-points line)")[0]))
    if head == 'm-points':
        return se.MPoints(
            build(_arity(node, args, 1, "(m-points line)")[0]))
    if head == 'approach':
        _arity(node, args, 3, "(approach line point side)")
        return se.ApproachPts(build(args[0]), _point(args[1]),
                              _side(args[2]))
    if head == 'canonical':
        _arity(node, args, 2, "(canonical line set)")
        return qt.Canonical(build(args[0]), build(args[1]))
    if head == 'fun':
        if len(args) < 2:
            _fail(node, "(fun line rat term ...)")
        line = build(args[0])
        return fu.fn(line, _rat(args[1]),
                     tuple(_term(a) for a in args[2:]))
    _fail(node, "a known constructor")


def _term(node):
    head, args = _items(node, "a ramp term")
    if head == 'ramp':
        _arity(node, args, 3, "(ramp rat point point)")
        return (_rat(args[0]), 'ramp', _point(args[1]), _point(args[2]))
    if head == 'pull':
        _arity(node, args, 4, "(pull rat line point point)")
        return (_rat(args[0]), 'pull', build(args[1]),
                _point(args[2]), _point(args[3]))
    _fail(node, "a ramp term")


# ------------------------------------------------------------ printing

def _show_step(s):
    for name, v in _BARE_STEPS.items():
        if s == v:
            return name
    kind, arg = s
    if kind == 'idx':
        return f"(idx {arg})"
    return f"({kind} {od.cnf_str(arg)})"


def show_point(p):
    if len(p) == 1:
        return _show_step(p[0])
    return "(path " + " ".join(_show_step(s) for s in p) + ")"


def show(obj):
    """Canonical text for a line, set, quotient or function expression."""
    if isinstance(obj, ln.Fin):
        return f"(fin {obj.n})"
    if isinstance(obj, ln.OmegaSucc):
        return "(omega-succ)"
    if isinstance(obj, ln.Omega1Succ):
        return "(omega1-succ)"
    if isinstance(obj, ln.Rev):
        return f"(rev {show(obj.inner)})"
    if isinstance(obj, ln.FinSum):
        return "(finsum " + " ".join(show(p) for p in obj.parts) + ")"
    if isinstance(obj, ln.OmegaSum):
        return f"(omega-sum {show(obj.summand)})"
    if isinstance(obj, ln.Omega1Sum):
        return f"(omega1-sum {show(obj.summand)})"
    if isinstance(obj, ln.CenterSum):
        return f"(center-sum {show(obj.summand)})"
    if isinstance(obj, ln.CenterSum1):
        return f"(center-sum1 {show(obj.summand)})"
    if isinstance(obj, ln.DupSet):
        return f"(dup {show(obj.base)} {show(obj.dup)})"
    if isinstance(obj, se.Nest):
        return f"(nest {obj.depth})"
    if isinstance(obj, se.FinitePts):
        parts = [str(p) if isinstance(p, Fraction) else show_point(p)
                 for p in obj.points]
        return "(pts" + "".join(" " + s for s in parts) + ")"
    if isinstance(obj, se.Union):
        return f"(union {show(obj.a)} {show(obj.b)})"
    if isinstance(obj, se.GeoSeq):
        side = 'left' if obj.side == ln.LEFT else 'right'
        return f"(geo {obj.limit} {side})"
    if isinstance(obj, se.AffineImage):
        return f"(affine {show(obj.inner)} {obj.scale} {obj.shift})"
    if isinstance(obj, se.CenterPoints):
        return f"(center-points {show(obj.line)})"
    if isinstance(obj, se.DupPoints):
        return f"(dup-points {show(obj.line)})"
    if isinstance(obj, se.MPoints):
        return f"(m-points {show(obj.line)})"
    if isinstance(obj, se.ApproachPts):
        side = 'left' if obj.side == ln.LEFT else 'right'
        return f"(approach {show(obj.line)} {show_point(obj.point)} {side})"
    if isinstance(obj, qt.Canonical):
        return f"(canonical {show(obj.base)} {show(obj.dup)})"
    if isinstance(obj, fu.FunctionExpr):
        out = f"(fun {show(obj.line)} {obj.const}"
        for t in obj.terms:
            if t[1] == 'ramp':
                out += (f" (ramp {t[0]} {show_point(t[2])}"
                        f" {show_point(t[3])})")
            else:
                out += (f" (pull {t[0]} {show(t[2])} {show_point(t[3])}"
                        f" {show_point(t[4])})")
        return out + ")"
    raise TypeError(f"cannot print {type(obj).__name__}")
