#!/usr/bin/env python3
"""Emit closed-form first and second derivatives of the planar 4-body
central-configuration residuals F = (f12, f13, f14, f23) as straight-line C++.

The output is committed under core/include/ccproof/detail/; rerun this
script only when the residual definition changes:

    python3 tools/gen_derivatives.py > core/include/ccproof/detail/cc_derivatives.inc

Each f_ij is built from the generic sum  sum_k m_k (R_ik - R_jk) D_ijk  with
R_ab = |q_a - q_b|^-3 and D_ijk = (q_i - q_k) x (q_j - q_k).  Derivatives of
R are expressed through  R5 = R / S  and  R7 = R5 / S  (S the squared
distance), so the generated code never raises anything to a fractional
power.  The emitted functions are templates over the scalar type and only
use +, -, *, sqr() and the precomputed distance kernel.
"""

import hashlib
import sys

import sympy as sp

x1, y1, x3, y3 = sp.symbols("x1 y1 x3 y3")
m1, m3, m4 = sp.symbols("m1 m3 m4")
XS = [x1, y1, x3, y3]
MASS = {1: m1, 2: sp.Integer(1), 3: m3, 4: m4}
MASS_COLUMN = {1: 0, 3: 1, 4: 2}
POS = {1: (x1, y1), 2: (sp.Integer(-1), sp.Integer(0)), 3: (x3, y3), 4: (sp.Integer(1), sp.Integer(0))}

# Pairs with a variable distance. (2,4) is fixed at distance 2, so R24 = 1/8.
PAIRS = [(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)]
R = {p: sp.Symbol("R%d%d" % p) for p in PAIRS}
R5 = {p: sp.Symbol("R5_%d%d" % p) for p in PAIRS}
R7 = {p: sp.Symbol("R7_%d%d" % p) for p in PAIRS}


def key(a, b):
    return (min(a, b), max(a, b))


def sq_dist(a, b):
    (ax, ay), (bx, by) = POS[a], POS[b]
    return (ax - bx) ** 2 + (ay - by) ** 2


def r_val(a, b):
    k = key(a, b)
    return sp.Rational(1, 8) if k == (2, 4) else R[k]


def r_d1(a, b, v):
    k = key(a, b)
    if k == (2, 4):
        return sp.Integer(0)
    return -sp.Rational(3, 2) * R5[k] * sp.diff(sq_dist(a, b), v)


def r_d2(a, b, v, w):
    k = key(a, b)
    if k == (2, 4):
        return sp.Integer(0)
    s = sq_dist(a, b)
    return (sp.Rational(15, 4) * R7[k] * sp.diff(s, v) * sp.diff(s, w)
            - sp.Rational(3, 2) * R5[k] * sp.diff(s, v, w))


def area(i, j, k):
    (ix, iy), (jx, jy), (kx, ky) = POS[i], POS[j], POS[k]
    return sp.factor((ix - kx) * (jy - ky) - (iy - ky) * (jx - kx))


def terms(i, j):
    for k in range(1, 5):
        if k in (i, j):
            continue
        yield k, MASS[k], area(i, j, k)


def build(i, j):
    val = 0
    jx = [0] * 4
    jm = [0] * 3
    hxx = [[0] * 4 for _ in range(4)]
    hxm = [[0] * 3 for _ in range(4)]
    for k, mk, dlt in terms(i, j):
        g = r_val(i, k) - r_val(j, k)
        gd = [r_d1(i, k, v) - r_d1(j, k, v) for v in XS]
        dd = [sp.diff(dlt, v) for v in XS]
        val += mk * g * dlt
        if k in MASS_COLUMN:
            jm[MASS_COLUMN[k]] += g * dlt
        for a, va in enumerate(XS):
            first = gd[a] * dlt + g * dd[a]
            jx[a] += mk * first
            if k in MASS_COLUMN:
                hxm[a][MASS_COLUMN[k]] += first
            for b, vb in enumerate(XS):
                g2 = r_d2(i, k, va, vb) - r_d2(j, k, va, vb)
                hxx[a][b] += mk * (g2 * dlt + gd[a] * dd[b] + gd[b] * dd[a] + g * sp.diff(dlt, va, vb))
    return val, jx, jm, hxx, hxm


class ScalarPrinter:
    """Prints sympy expressions with only +, -, * and sqr()."""

    def __init__(self, scalar="T"):
        self.scalar = scalar

    def num(self, q):
        q = sp.Rational(q)
        if q.q & (q.q - 1):
            raise ValueError("non-dyadic constant %s" % q)
        return "%s(%s)" % (self.scalar, repr(float(q)))

    def p(self, e):
        if e.is_Symbol:
            return str(e)
        if e.is_Number:
            return self.num(e)
        if e.is_Add:
            args = list(e.args)
            out = self.p(args[0])
            for a in args[1:]:
                c, rest = a.as_coeff_Mul()
                if c < 0:
                    out += " - " + self.p(-a)
                else:
                    out += " + " + self.p(a)
            return "(" + out + ")"
        if e.is_Mul:
            c, rest = e.as_coeff_Mul()
            factors = [self.p(f) for f in sp.Mul.make_args(rest)]
            if c == -1:
                return "(-" + "*".join(factors) + ")"
            if c != 1:
                factors.insert(0, self.num(c))
            return "(" + "*".join(factors) + ")"
        if e.is_Pow:
            base, ex = e.args
            if ex == 2:
                return "sqr(" + self.p(base) + ")"
            if ex.is_Integer and ex > 2:
                return "(" + "*".join([self.p(base)] * int(ex)) + ")"
        raise ValueError("unsupported expression %r" % e)


def emit(name, outputs, printer):
    flat = [sp.sympify(o) for o in outputs]
    reps, reduced = sp.cse(flat, symbols=sp.numbered_symbols("t"), optimizations=None)
    lines = []
    for sym, expr in reps:
        lines.append("  const T %s = %s;" % (sym, printer.p(expr)))
    return lines, reduced


def main():
    printer = ScalarPrinter()
    pairs = [(1, 2), (1, 3), (1, 4), (2, 3)]
    built = [build(i, j) for i, j in pairs]

    jac_out = []
    for _, jx, jm, _, _ in built:
        jac_out += jx + jm
    hess_out = []
    for _, _, _, hxx, hxm in built:
        for a in range(4):
            for b in range(a, 4):
                hess_out.append(hxx[a][b])
        for a in range(4):
            hess_out += hxm[a]
    value_out = [b[0] for b in built]

    body = []
    body.append("// Generated by tools/gen_derivatives.py -- do not edit.")
    body.append("// Inputs: coordinates (x1, y1, x3, y3), masses (m1, m3, m4) and the")
    body.append("// distance kernel K with R_ab = S_ab^(-3/2), R5_ab = R_ab / S_ab,")
    body.append("// R7_ab = R5_ab / S_ab for the five variable pairs.")
    body.append("")
    unpack = ["  const T& x1 = x[0]; const T& y1 = x[1]; const T& x3 = x[2]; const T& y3 = x[3];",
              "  const T& m1 = m[0]; const T& m3 = m[1]; const T& m4 = m[2];"]
    for p in PAIRS:
        tag = "%d%d" % p
        unpack.append("  const T& R%s = K.r[%d]; const T& R5_%s = K.r5[%d]; const T& R7_%s = K.r7[%d];"
                      % (tag, PAIRS.index(p), tag, PAIRS.index(p), tag, PAIRS.index(p)))
    silence = "  (void)x1; (void)y1; (void)x3; (void)y3; (void)m1; (void)m3; (void)m4;"

    def func(name, outs, assign):
        lines, reduced = emit(name, outs, printer)
        out = ["template <class T>",
               "void %s(const std::array<T, 4>& x, const std::array<T, 3>& m," % name,
               "    const DistanceKernel<T>& K, %s)" % assign[0],
               "{"]
        out += unpack
        out.append(silence)
        for p in PAIRS:
            tag = "%d%d" % p
            out.append("  (void)R%s; (void)R5_%s; (void)R7_%s;" % (tag, tag, tag))
        out += lines
        for idx, e in enumerate(reduced):
            out.append("  %s = %s;" % (assign[1](idx), printer.p(e)))
        out.append("}")
        out.append("")
        return out

    body += func("generated_values", value_out,
                 ("std::array<T, 4>& f", lambda i: "f[%d]" % i))
    body += func("generated_first_order", jac_out,
                 ("std::array<T, 16>& jx, std::array<T, 12>& jm",
                  lambda i: ("jx[%d]" % (4 * (i // 7) + (i % 7))) if (i % 7) < 4
                  else ("jm[%d]" % (3 * (i // 7) + (i % 7) - 4))))

    def hess_slot(i):
        comp, rem = divmod(i, 22)
        if rem < 10:
            a, b = [(a, b) for a in range(4) for b in range(a, 4)][rem]
            return "hxx[%d][%d]" % (comp, 4 * a + b)
        rem -= 10
        return "hxm[%d][%d]" % (comp, rem)

    body += func("generated_second_order", hess_out,
                 ("std::array<std::array<T, 16>, 4>& hxx, std::array<std::array<T, 12>, 4>& hxm",
                  hess_slot))

    text = "\n".join(body)
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    sys.stdout.write(text)
    sys.stdout.write("inline constexpr const char* kGeneratedDerivativesDigest = \"%s\";\n" % digest)


if __name__ == "__main__":
    main()
