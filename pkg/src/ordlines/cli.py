"""Command line driver.

Verbs:

  analyze LINE      point inventory and decomposability of a line
  io EXPR           internal order of a set, a line's heavy points, or Q
  decide QUOTIENT   averaging operator verdict with certified norm bounds
  project QUOTIENT  bounded projection construction summary
  witness QUOTIENT  lower bound certificate for the projection norm
  oracle TARGET     exact finite minimization; (fin N) sweeps every interval
                    partition, a JSON object solves one instance
  gallery           the standard example lines with their invariants
  embed LINE        order embedding of a countable line into the rationals

Flags: --json, --cap N, --delta P/Q, --budget N, --out FILE.  The target is
the first non-flag argument: an inline expression, a path to a file holding
one, or '-' for stdin.  Exit status is 0 on success, 2 when a certificate
check fails, 1 on usage or input errors.  JSON reports are deterministic:
fixed key order, rationals rendered exactly as p/q, no floats.
"""

import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import ordlines.lines as ln
import ordlines.sets as se
import ordlines.internal_order as io
import ordlines.functions as fu
import ordlines.quotients as qt
import ordlines.projection as pj
import ordlines.finite_oracle as fo
import ordlines.scattered as sc
import ordlines.sexpr as sx

VERBS = ('analyze', 'io', 'decide', 'project', 'witness',
         'oracle', 'gallery', 'embed')

_LINES = (ln.Fin, ln.OmegaSucc, ln.Omega1Succ, ln.Rev, ln.FinSum,
          ln.OmegaSum, ln.Omega1Sum, ln.CenterSum, ln.CenterSum1, ln.DupSet)
_QUOTIENTS = (qt.Canonical, qt.ExplicitFibers)


class Usage(Exception):
    pass


@dataclass
class Command:
    verb: str
    target: object
    cap: int = None          # verb default when unset
    delta: Fraction = Fraction(1, 10)
    budget: int = 24
    as_json: bool = False
    out: str = None


def _cap(cmd):
    return cmd.cap if cmd.cap is not None else io.DEFAULT_CAP


def _int_opt(flag, v):
    if not v.isdigit():
        raise Usage(f"{flag} needs a number, got {v!r}")
    return int(v)


def _target_text(arg):
    if arg == '-':
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def parse_command(argv):
    args = list(argv)
    if not args:
        raise Usage("a verb is required: " + " | ".join(VERBS))
    verb = args.pop(0)
    if verb not in VERBS:
        raise Usage(f"unknown verb {verb!r}")
    opts = {}
    pos = []
    i = 0
    while i < len(args):
        a = args[i]
        if a == '--json':
            opts['as_json'] = True
        elif a in ('--cap', '--delta', '--budget', '--out'):
            i += 1
            if i == len(args):
                raise Usage(f"{a} needs a value")
            v = args[i]
            if a == '--cap':
                opts['cap'] = _int_opt(a, v)
                if not 1 <= opts['cap'] <= 8:
                    raise Usage(f"cap must be within 1..8, got {v}")
            elif a == '--budget':
                opts['budget'] = _int_opt(a, v)
                if opts['budget'] < 2:
                    raise Usage(f"budget must be at least 2, got {v}")
            elif a == '--delta':
                try:
                    d = Fraction(v)
                except (ValueError, ZeroDivisionError):
                    raise Usage(f"--delta needs a rational, got {v!r}")
                if not 0 < d < 1:
                    raise Usage(f"delta must be in (0,1), got {v}")
                opts['delta'] = d
            else:
                opts['out'] = v
        elif a.startswith('--'):
            raise Usage(f"unknown flag {a}")
        else:
            pos.append(a)
        i += 1
    if verb == 'gallery':
        if pos:
            raise Usage("gallery takes no target")
        return Command(verb, None, **opts)
    if len(pos) > 1:
        raise Usage(f"one target expected, got {len(pos)}")
    text = _target_text(pos[0] if pos else '-')
    if verb == 'oracle' and text.lstrip().startswith('{'):
        target = json.loads(text)
    else:
        target = sx.read(text)
    return Command(verb, target, **opts)


# ------------------------------------------------------------- reports

def _io_json(v):
    if isinstance(v, io.MinusOne):
        return -1
    if isinstance(v, io.Finite):
        return v.n
    return f">={v.cap}"


def _tree_json(t):
    if isinstance(t, dict):
        out = {}
        for k, v in t.items():
            if k == 'points':
                out[k] = [sx.show_point(p) for p in v]
            else:
                out[k] = _tree_json(v)
        return out
    if isinstance(t, (list, tuple)):
        return [_tree_json(x) for x in t]
    if t is None or isinstance(t, (int, str)):
        return t
    return str(t)


def _want_line(t, verb):
    if not isinstance(t, _LINES):
        raise Usage(f"{verb} needs a line expression, "
                    f"got {type(t).__name__}")
    return t


def _want_quotient(t, verb):
    if not isinstance(t, _QUOTIENTS):
        raise Usage(f"{verb} needs a quotient, got {type(t).__name__}")
    return t


def _run_analyze(cmd):
    K = _want_line(cmd.target, 'analyze')
    pts, finite = sc.m_points(K)
    m = "infinite" if not finite else ("empty" if not pts else "finite")
    io_m = _io_json(io.io_set(se.MPoints(K), K, cap=_cap(cmd)))
    w = sc.class_c_decide(K)
    rep = {"M": m, "io_M": io_m,
           "class_C": "witness" if w.is_witness else "refutation",
           "certificate": _tree_json(w.tree) if w.is_witness
           else sx.show_point(w.refutation)}
    return rep, 0


def _run_io(cmd):
    t = cmd.target
    if isinstance(t, _LINES):
        v = io.io_set(se.MPoints(t), t, cap=_cap(cmd))
    elif isinstance(t, _QUOTIENTS):
        v = qt.q_set_io(t, cap=_cap(cmd))
    else:
        v = io.io_set(t, cap=_cap(cmd))
    return {"io": _io_json(v)}, 0


def _run_decide(cmd):
    q = _want_quotient(cmd.target, 'decide')
    v = qt.decide_averaging(q, cap=_cap(cmd))
    if isinstance(v, qt.RightInverse):
        return {"verdict": "right-inverse", "io": -1,
                "lower": "1", "upper": "1"}, 0
    if isinstance(v, qt.Complemented):
        return {"verdict": "complemented", "io": v.io_n,
                "lower": str(v.lower), "upper": str(v.upper)}, 0
    return {"verdict": "not-complemented", "io": f">={v.io_at_least}"}, 0


def _run_project(cmd):
    q = _want_quotient(cmd.target, 'project')
    P = pj.build_projection(q, cap=_cap(cmd))
    if P.kind == 'pullback':
        return {"kind": "pullback", "io": -1, "lower": "1", "upper": "1"}, 0
    lo, hi = qt.norm_bounds(P.level)
    return {"kind": P.kind, "io": P.level,
            "lower": str(lo), "upper": str(hi)}, 0


def _run_witness(cmd):
    q = _want_quotient(cmd.target, 'witness')
    P = pj.build_projection(q, cap=_cap(cmd))
    if P.kind == 'pullback':
        raise Usage("witness needs a quotient with nonempty Q")
    cert = pj.lower_bound_witness(q, P, P.level, delta=cmd.delta)
    ok = cert.value >= cert.bound
    rep = {"points": [sx.show_point(p) for p in cert.points],
           "delta": str(cmd.delta),
           "m": len(cert.points) - 2,
           "bound": str(cert.bound),
           "value": str(cert.value),
           "pass": ok}
    return rep, 0 if ok else 2


def _run_oracle(cmd):
    t = cmd.target
    if isinstance(t, dict):
        return fo.result_dict(fo.instance_from_dict(t)), 0
    if not isinstance(t, ln.Fin):
        raise Usage("oracle needs a (fin N) line or a JSON instance")
    opts = set()
    for blocks in fo.interval_partitions(t.n):
        opts.add(fo.min_projection_norm(fo.make_instance(t.n, blocks)))
    if len(opts) == 1:
        return {"all_optima": str(opts.pop())}, 0
    return {"optima": [str(o) for o in sorted(opts)]}, 0


def _tag_str(t):
    if isinstance(t, sc.IoMinus1):
        return "io-minus1"
    if isinstance(t, sc.IoN):
        return f"io-n {t.n}"
    if isinstance(t, sc.IoInfinityTrunc):
        return f"trunc {t.depth}"
    return f"point-trunc {t.depth}"


def _run_gallery(cmd):
    breadth = cmd.cap if cmd.cap is not None else 3
    rows = []
    for tag, K in sc.gallery(cap=breadth, trunc_depth=1):
        v = io.io_set(se.MPoints(K), K, cap=breadth + 2)
        w = sc.class_c_decide(K)
        rows.append({"tag": _tag_str(tag), "line": sx.show(K),
                     "io_M": _io_json(v),
                     "class_C": "witness" if w.is_witness
                     else "refutation"})
    return rows, 0


def _run_embed(cmd):
    K = _want_line(cmd.target, 'embed')
    emb = fu.embed_countable(K)
    pts = ln.enumerate_points(K, cmd.budget)
    return {"total": str(emb.total),
            "points": [[sx.show_point(p), str(emb.at(p))]
                       for p in pts]}, 0


_DISPATCH = {'analyze': _run_analyze, 'io': _run_io, 'decide': _run_decide,
             'project': _run_project, 'witness': _run_witness,
             'oracle': _run_oracle, 'gallery': _run_gallery,
             'embed': _run_embed}


def run(cmd):
    """Dispatch a parsed command; (report, exit code)."""
    return _DISPATCH[cmd.verb](cmd)


def _render(rep, as_json):
    if as_json:
        return json.dumps(rep, separators=(',', ':'))
    if isinstance(rep, list):
        return "\n".join("  ".join(f"{k}={v}" for k, v in row.items())
                         for row in rep)
    out = []
    for k, v in rep.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, separators=(',', ':'))
        out.append(f"{k}: {v}")
    return "\n".join(out)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cmd = parse_command(argv)
    except Usage as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except sx.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as e:
        print(f"parse error: instance JSON: {e}", file=sys.stderr)
        return 1
    try:
        rep, code = run(cmd)
    except Usage as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"{cmd.verb}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    text = _render(rep, cmd.as_json)
    if cmd.out:
        with open(cmd.out, 'w') as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == '__main__':
    sys.exit(main())
