# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: scaled M_n closed form in double and double-double
arithmetic, and the iterated tanh-sinh oracle for the M_n double integral.

Mirrors ``orthobound._pycore``; build with ``-ffp-contract=off`` so the
error-free transforms are not fused by the compiler.
"""

from libc.math cimport fma, log, log1p, exp, sinh, cosh, floor, ldexp, fabs, isinf, pow

cdef double PI = 3.141592653589793
cdef double HALF_PI = 1.5707963267948966
cdef double EPS = 2.220446049250313e-16
cdef int MIN_LEVEL = 3
cdef int MAX_LEVEL = 12
cdef double T_MAX = 6.5

ctypedef struct dd:
    double hi
    double lo


# ---------------------------------------------------------------- double-double

cdef inline dd mk(double hi, double lo) noexcept nogil:
    cdef dd r
    r.hi = hi
    r.lo = lo
    return r

cdef inline dd two_sum(double a, double b) noexcept nogil:
    cdef double s = a + b
    cdef double bb = s - a
    return mk(s, (a - (s - bb)) + (b - bb))

cdef inline dd quick_two_sum(double a, double b) noexcept nogil:
    cdef double s = a + b
    return mk(s, b - (s - a))

cdef inline dd two_prod(double a, double b) noexcept nogil:
    cdef double p = a * b
    return mk(p, fma(a, b, -p))

cdef inline dd dd_add(dd a, dd b) noexcept nogil:
    cdef dd s = two_sum(a.hi, b.hi)
    cdef dd t = two_sum(a.lo, b.lo)
    cdef double e = s.lo + t.hi
    s = quick_two_sum(s.hi, e)
    e = s.lo + t.lo
    return quick_two_sum(s.hi, e)

cdef inline dd dd_neg(dd a) noexcept nogil:
    return mk(-a.hi, -a.lo)

cdef inline dd dd_sub(dd a, dd b) noexcept nogil:
    return dd_add(a, dd_neg(b))

cdef inline dd dd_mul(dd a, dd b) noexcept nogil:
    cdef dd p = two_prod(a.hi, b.hi)
    cdef double e = p.lo + (a.hi * b.lo + a.lo * b.hi)
    return quick_two_sum(p.hi, e)

cdef inline dd dd_div(dd a, dd b) noexcept nogil:
    cdef double q1 = a.hi / b.hi
    cdef dd r = dd_sub(a, dd_mul(b, mk(q1, 0.0)))
    cdef double q2 = r.hi / b.hi
    r = dd_sub(r, dd_mul(b, mk(q2, 0.0)))
    cdef double q3 = r.hi / b.hi
    return dd_add(quick_two_sum(q1, q2), mk(q3, 0.0))

cdef inline dd dd_d(double a) noexcept nogil:
    return mk(a, 0.0)

cdef inline dd dd_abs(dd a) noexcept nogil:
    return dd_neg(a) if a.hi < 0.0 else a

cdef dd dd_pow(dd base, int k) noexcept nogil:
    cdef dd result = mk(1.0, 0.0)
    while k:
        if k & 1:
            result = dd_mul(result, base)
        base = dd_mul(base, base)
        k >>= 1
    return result

cdef dd LN2 = mk(6.931471805599452862e-01, 2.319046813846299558e-17)

cdef dd dd_exp(dd x) noexcept nogil:
    cdef double k
    cdef dd r, term, s
    cdef int j
    if x.hi < -745.0:
        return mk(0.0, 0.0)
    k = floor(x.hi / LN2.hi + 0.5)
    r = dd_sub(x, dd_mul(LN2, mk(k, 0.0)))
    r = mk(r.hi * 0.0009765625, r.lo * 0.0009765625)
    term = r
    s = r
    for j in range(2, 11):
        term = dd_div(dd_mul(term, r), mk(<double>j, 0.0))
        s = dd_add(s, term)
    for j in range(10):
        s = dd_add(dd_mul(s, mk(2.0, 0.0)), dd_mul(s, s))
    s = dd_add(s, mk(1.0, 0.0))
    return mk(ldexp(s.hi, <int>k), ldexp(s.lo, <int>k))

cdef dd dd_log(dd x) noexcept nogil:
    cdef dd y = mk(log(x.hi), 0.0)
    return dd_sub(dd_add(y, dd_mul(x, dd_exp(dd_neg(y)))), mk(1.0, 0.0))


# ------------------------------------------------------- scaled M_n kernels

cdef double scaled_l_d(int k, double x, double omx, double c) noexcept nogil:
    cdef int m = k + 1
    cdef bint neg = x < 0.0
    cdef double ax = -x if neg else x
    cdef double total, power, term, inv, out, cm
    cdef int sign, j
    if ax <= 0.5:
        total = 0.0
        power = 1.0
        sign = -1 if (neg and m % 2) else 1
        j = m
        while True:
            term = power / j
            if sign < 0:
                term = -term
            total = total + term
            if fabs(term) <= 1e-17 * fabs(total):
                break
            j += 1
            power = power * ax
            if neg:
                sign = -sign
        return -pow(c, m) * total
    inv = 1.0 / ax
    out = pow(c * inv, m) * log(fabs(omx))
    cm = pow(c, m)
    for j in range(1, m):
        term = cm * pow(inv, m - j) / j
        if neg and j % 2:
            out = out - term
        else:
            out = out + term
    return out


cdef double kernel_d(int n, double bm1) noexcept nogil:
    cdef double b = bm1 + 1.0
    cdef double bp1 = bm1 + 2.0
    cdef int m = n - 2
    cdef int k = n - 3
    cdef double s = 1.0 if n % 2 == 0 else -1.0
    cdef double harm = 0.0
    cdef int j
    for j in range(1, m + 1):
        harm = harm + 1.0 / j
    cdef double twob = 2.0 * b
    cdef double x1 = bm1 / bp1
    cdef double x3 = bp1 / bm1
    cdef double x5 = twob / bp1
    cdef double x6 = twob / bm1
    cdef double x7 = 2.0 / bp1
    cdef double x8 = -2.0 / bm1
    cdef double log_ratio = 2.0 * log(bm1) - log(4.0 * b)
    cdef double t = log1p(bm1 * bm1 / (4.0 * b)) + 2.0 * harm
    t = t - scaled_l_d(k, x1, x7, x1)
    t = t - s * scaled_l_d(k, -x1, x5, x1)
    t = t + pow(x1, m) * (-log_ratio - 2.0 * harm)
    t = t + scaled_l_d(k, x3, x8, 1.0)
    t = t + s * scaled_l_d(k, -x3, x6, 1.0)
    t = t + scaled_l_d(k, x5, -x1, x1)
    t = t - scaled_l_d(k, x6, -x3, 1.0)
    t = t + scaled_l_d(k, x7, x1, x1)
    t = t - s * scaled_l_d(k, x8, x3, 1.0)
    return t


cdef dd scaled_l_dd(int k, dd x, dd omx, dd c) noexcept nogil:
    cdef int m = k + 1
    cdef bint neg = x.hi < 0.0
    cdef dd ax = dd_neg(x) if neg else x
    cdef dd total, power, term, inv, out, cm
    cdef int sign, j
    if ax.hi <= 0.5:
        total = mk(0.0, 0.0)
        power = mk(1.0, 0.0)
        sign = -1 if (neg and m % 2) else 1
        j = m
        while True:
            term = dd_div(power, mk(<double>j, 0.0))
            if sign < 0:
                term = dd_neg(term)
            total = dd_add(total, term)
            if fabs(term.hi) <= 1e-33 * fabs(total.hi):
                break
            j += 1
            power = dd_mul(power, ax)
            if neg:
                sign = -sign
        return dd_neg(dd_mul(dd_pow(c, m), total))
    inv = dd_div(mk(1.0, 0.0), ax)
    out = dd_mul(dd_pow(dd_mul(c, inv), m), dd_log(dd_abs(omx)))
    cm = dd_pow(c, m)
    for j in range(1, m):
        term = dd_div(dd_mul(cm, dd_pow(inv, m - j)), mk(<double>j, 0.0))
        if neg and j % 2:
            out = dd_sub(out, term)
        else:
            out = dd_add(out, term)
    return out


cdef dd kernel_dd(int n, double bm1_d) noexcept nogil:
    cdef dd one = mk(1.0, 0.0)
    cdef dd two = mk(2.0, 0.0)
    cdef dd bm1 = mk(bm1_d, 0.0)
    cdef dd b = dd_add(bm1, one)
    cdef dd bp1 = dd_add(bm1, two)
    cdef int m = n - 2
    cdef int k = n - 3
    cdef double s = 1.0 if n % 2 == 0 else -1.0
    cdef dd harm = mk(0.0, 0.0)
    cdef int j
    for j in range(1, m + 1):
        harm = dd_add(harm, dd_div(one, mk(<double>j, 0.0)))
    cdef dd twob = dd_mul(two, b)
    cdef dd x1 = dd_div(bm1, bp1)
    cdef dd x3 = dd_div(bp1, bm1)
    cdef dd x5 = dd_div(twob, bp1)
    cdef dd x6 = dd_div(twob, bm1)
    cdef dd x7 = dd_div(two, bp1)
    cdef dd x8 = dd_div(mk(-2.0, 0.0), bm1)
    cdef dd fourb = dd_mul(mk(4.0, 0.0), b)
    cdef dd log_ratio = dd_sub(dd_mul(two, dd_log(bm1)), dd_log(fourb))
    cdef dd t = dd_add(dd_log(dd_add(dd_div(dd_mul(bm1, bm1), fourb), one)), dd_mul(two, harm))
    cdef dd sd = mk(s, 0.0)
    t = dd_sub(t, scaled_l_dd(k, x1, x7, x1))
    t = dd_sub(t, dd_mul(sd, scaled_l_dd(k, dd_neg(x1), x5, x1)))
    t = dd_add(t, dd_mul(dd_pow(x1, m), dd_sub(dd_neg(log_ratio), dd_mul(two, harm))))
    t = dd_add(t, scaled_l_dd(k, x3, x8, one))
    t = dd_add(t, dd_mul(sd, scaled_l_dd(k, dd_neg(x3), x6, one)))
    t = dd_add(t, scaled_l_dd(k, x5, dd_neg(x1), x1))
    t = dd_sub(t, scaled_l_dd(k, x6, dd_neg(x3), one))
    t = dd_add(t, scaled_l_dd(k, x7, x1, x1))
    t = dd_sub(t, dd_mul(sd, scaled_l_dd(k, x8, x3, one)))
    return t


def mn_scaled_double(int n, double bm1):
    """``(n-1)(n-2)(b-1)^(n-2) M_n(b)`` in double precision."""
    return kernel_d(n, bm1)


def mn_scaled_dd(int n, double bm1):
    """``(n-1)(n-2)(b-1)^(n-2) M_n(b)`` in double-double, rounded to double."""
    cdef dd t = kernel_dd(n, bm1)
    return t.hi + t.lo


# ------------------------------------------------------------ tanh-sinh oracle

ctypedef double (*node_fn)(double dl, double dr, void* ctx, bint* collapsed) noexcept nogil

ctypedef struct DEResult:
    double value
    double err
    long evals
    bint converged
    bint budget

ctypedef struct OuterCtx:
    int n
    double b
    double bm1
    double x
    double inner_rel
    long max_evals
    long evals
    bint inner_ok
    bint budget
    double inner_rel_err

ctypedef struct InnerCtx:
    int n
    double b
    double bm1
    double x
    double d
    double cu


cdef DEResult tanh_sinh_c(node_fn g, void* ctx, double abs_tol, double rel_tol,
                          long max_evals) noexcept nogil:
    cdef DEResult res
    cdef long evals = 0
    cdef double raw = 0.0, absraw = 0.0, tail, prev = 0.0, value = 0.0
    cdef double err = 1e308, h, t, y, e, dl, dr, w, val, term, last, tmp
    cdef bint have_prev = False, collapsed
    cdef int level, sign, si, first, stride
    cdef long kk
    res.budget = False
    for level in range(MAX_LEVEL + 1):
        h = ldexp(1.0, -level)
        tail = 0.0
        if level == 0:
            collapsed = False
            val = g(0.5, 0.5, ctx, &collapsed)
            evals += 1
            w = 0.25 * PI
            raw += w * val
            absraw += fabs(w * val)
            first = 1
            stride = 1
        else:
            first = 1
            stride = 2
        for si in range(2):
            sign = 1 if si == 0 else -1
            kk = first
            last = 0.0
            while True:
                t = kk * h
                if t > T_MAX:
                    break
                y = HALF_PI * sinh(t)
                e = exp(-2.0 * y)
                dl = 1.0 / (1.0 + e)
                dr = e * dl
                w = PI * cosh(t) * dl * dr
                if sign < 0:
                    tmp = dl
                    dl = dr
                    dr = tmp
                if w == 0.0 or dl == 0.0 or dr == 0.0:
                    break
                collapsed = False
                val = g(dl, dr, ctx, &collapsed)
                if collapsed:
                    break
                evals += 1
                term = w * val
                raw += term
                absraw += fabs(term)
                last = fabs(term)
                if t > 1.0 and last <= 1e-22 * absraw:
                    break
                kk += stride
            tail += last
        value = h * raw
        if have_prev:
            err = fabs(value - prev) + h * tail + 8.0 * EPS * h * absraw
        prev = value
        have_prev = True
        if evals > max_evals:
            res.value = value
            res.err = err
            res.evals = evals
            res.converged = False
            res.budget = True
            return res
        if level >= MIN_LEVEL and err <= (abs_tol if abs_tol > rel_tol * fabs(value) else rel_tol * fabs(value)):
            res.value = value
            res.err = err
            res.evals = evals
            res.converged = True
            return res
    res.value = value
    res.err = err
    res.evals = evals
    res.converged = False
    return res


cdef double inner_node(double dl, double dr, void* ctx, bint* collapsed) noexcept nogil:
    cdef InnerCtx* c = <InnerCtx*>ctx
    cdef double z, w, r, lr
    if dr == 0.0:
        collapsed[0] = True
        return 0.0
    z = dl / dr
    if z <= 0.0 or isinf(z):
        collapsed[0] = True
        return 0.0
    w = c.d * z
    r = c.x / w / (w + 2.0 * c.b)
    if isinf(r):
        lr = log(c.x) - log(w) - log(w + 2.0 * c.b)
    else:
        lr = log1p(r)
    return (lr + c.cu) / pow(1.0 + z, c.n) / (dr * dr)


cdef double outer_node(double dl, double dr, void* ctx, bint* collapsed) noexcept nogil:
    cdef OuterCtx* c = <OuterCtx*>ctx
    cdef double u
    cdef InnerCtx ic
    cdef DEResult res
    cdef double scale
    if dl <= dr:
        u = -1.0 + 2.0 * dl
    else:
        u = 1.0 - 2.0 * dr
    if u <= -1.0 or u >= 1.0:
        collapsed[0] = True
        return 0.0
    ic.n = c.n
    ic.b = c.b
    ic.bm1 = c.bm1
    ic.x = c.x
    ic.d = c.b - u
    ic.cu = log1p(c.x / ((1.0 - u) * (1.0 + u)))
    res = tanh_sinh_c(inner_node, &ic, 1e-300, c.inner_rel, c.max_evals)
    c.evals += res.evals
    if res.budget or c.evals > c.max_evals:
        c.budget = True
    c.inner_ok = c.inner_ok and res.converged
    scale = pow(ic.d, 1 - c.n)
    # the integrand is positive, so the worst relative inner error bounds
    # the inner contribution to the total error
    if res.value > 0.0 and res.err > c.inner_rel_err * res.value:
        c.inner_rel_err = res.err / res.value
    # the outer rule's weight already includes the 2 of u = -1 + 2 dl
    return 2.0 * scale * res.value


def mn_oracle_core(int n, double b, double abs_tol, double rel_tol, long max_evals):
    """Iterated tanh-sinh quadrature of the M_n double integral.

    Returns ``(value, abs_error, n_evals, converged)``.
    """
    cdef OuterCtx oc
    cdef DEResult res
    oc.n = n
    oc.b = b
    oc.bm1 = b - 1.0
    oc.x = oc.bm1 * (b + 1.0)
    oc.inner_rel = rel_tol * 1e-2
    oc.max_evals = max_evals
    oc.evals = 0
    oc.inner_ok = True
    oc.budget = False
    oc.inner_rel_err = 0.0
    with nogil:
        res = tanh_sinh_c(outer_node, &oc, abs_tol, rel_tol, max_evals)
    if oc.budget or res.budget:
        raise RuntimeError("oracle budget exhausted")
    return res.value, res.err + oc.inner_rel_err * fabs(res.value), oc.evals + res.evals, bool(res.converged and oc.inner_ok)
