# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the hot kernels.

Signatures and semantics match projcorrect._kernels_py exactly; the test
suite cross-checks the two backends.  Field arithmetic is table-driven on
element codes; all geometry is scalar index arithmetic.
"""

import numpy as np

BACKEND_NAME = "cython"

cdef enum:
    MAXK = 130  # max points per line (q + 1, q <= 128)


cdef struct FT:
    const short *add
    const short *mul
    const short *inv
    const short *neg
    int q


cdef inline int fadd(FT *t, int x, int y) nogil:
    return t.add[x * t.q + y]


cdef inline int fsub(FT *t, int x, int y) nogil:
    return t.add[x * t.q + t.neg[y]]


cdef inline int fmul(FT *t, int x, int y) nogil:
    return t.mul[x * t.q + y]


cdef inline int fdiv(FT *t, int x, int y) nogil:
    return t.mul[x * t.q + t.inv[y]]


cdef inline int fneg(FT *t, int x) nogil:
    return t.neg[x]


cdef inline void cross3(FT *t, int *u, int *v, int *w) nogil:
    w[0] = fsub(t, fmul(t, u[1], v[2]), fmul(t, u[2], v[1]))
    w[1] = fsub(t, fmul(t, u[2], v[0]), fmul(t, u[0], v[2]))
    w[2] = fsub(t, fmul(t, u[0], v[1]), fmul(t, u[1], v[0]))


cdef inline bint cramer2s(FT *t, int *u, int *v, int *c, int *alpha, int *beta) nogil:
    """Solve c = alpha*u + beta*v for independent u, v in the plane."""
    cdef int d, i, j
    d = fsub(t, fmul(t, u[0], v[1]), fmul(t, u[1], v[0]))
    i = 0
    j = 1
    if d == 0:
        d = fsub(t, fmul(t, u[0], v[2]), fmul(t, u[2], v[0]))
        i = 0
        j = 2
    if d == 0:
        d = fsub(t, fmul(t, u[1], v[2]), fmul(t, u[2], v[1]))
        i = 1
        j = 2
    if d == 0:
        return False
    alpha[0] = fdiv(t, fsub(t, fmul(t, c[i], v[j]), fmul(t, c[j], v[i])), d)
    beta[0] = fdiv(t, fsub(t, fmul(t, u[i], c[j]), fmul(t, u[j], c[i])), d)
    return True


def vote_pairs(p1, p2, cod_pts, dom_line_of, preserved, n_cod_points):
    """See _kernels_py.vote_pairs."""
    cdef const int[::1] p1v = np.ascontiguousarray(p1, dtype=np.int32)
    cdef const int[::1] p2v = np.ascontiguousarray(p2, dtype=np.int32)
    cdef const int[:, ::1] cp = np.ascontiguousarray(cod_pts, dtype=np.int32)
    cdef const int[:, ::1] lof = np.ascontiguousarray(dom_line_of, dtype=np.int32)
    cdef const unsigned char[::1] pres = np.ascontiguousarray(preserved, dtype=np.uint8)
    counts_arr = np.zeros(int(n_cod_points), dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    cdef Py_ssize_t m = p1v.shape[0]
    cdef Py_ssize_t k = cp.shape[1]
    cdef Py_ssize_t i, j, u, v
    cdef int a, b, z, common, q1, q2
    with nogil:
        for i in range(m):
            q1 = p1v[i]
            q2 = p2v[i]
            for j in range(m):
                a = lof[q1, p1v[j]]
                if a < 0 or pres[a] == 0:
                    continue
                b = lof[q2, p2v[j]]
                if b < 0 or pres[b] == 0:
                    continue
                common = 0
                z = -1
                u = 0
                v = 0
                while u < k and v < k:
                    if cp[i, u] < cp[j, v]:
                        u += 1
                    elif cp[i, u] > cp[j, v]:
                        v += 1
                    else:
                        common += 1
                        z = cp[i, u]
                        if common > 1:
                            break
                        u += 1
                        v += 1
                if common == 1:
                    counts[z] += 1
    return counts_arr


def preserved_mask(table, dom_line_pts, cod_line_of):
    """See _kernels_py.preserved_mask."""
    cdef const int[::1] tab = np.ascontiguousarray(table, dtype=np.int32)
    cdef const int[:, ::1] dlp = np.ascontiguousarray(dom_line_pts, dtype=np.int32)
    cdef const int[:, ::1] clof = np.ascontiguousarray(cod_line_of, dtype=np.int32)
    out_arr = np.zeros(dlp.shape[0], dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t nl = dlp.shape[0]
    cdef Py_ssize_t k = dlp.shape[1]
    cdef Py_ssize_t li, j
    cdef int i0, first
    cdef bint ok
    with nogil:
        for li in range(nl):
            i0 = tab[dlp[li, 0]]
            first = clof[i0, tab[dlp[li, 1]]]
            ok = True
            for j in range(2, k):
                if clof[i0, tab[dlp[li, j]]] != first:
                    ok = False
                    break
            out[li] = 1 if ok else 0
    return out_arr


def mult_gadget_exhaustive(coords, pencils_mat, line_pts, add_t, mul_t, inv_t, neg_t):
    """See _kernels_py.mult_gadget_exhaustive."""
    cdef const short[:, ::1] co = np.ascontiguousarray(coords, dtype=np.int16)
    cdef const int[:, ::1] pen = np.ascontiguousarray(pencils_mat, dtype=np.int32)
    cdef const int[:, ::1] lpts = np.ascontiguousarray(line_pts, dtype=np.int32)
    add_c = np.ascontiguousarray(add_t, dtype=np.int16)
    mul_c = np.ascontiguousarray(mul_t, dtype=np.int16)
    inv_c = np.ascontiguousarray(inv_t, dtype=np.int16)
    neg_c = np.ascontiguousarray(neg_t, dtype=np.int16)
    cdef const short[:, ::1] addv = add_c
    cdef const short[:, ::1] mulv = mul_c
    cdef const short[::1] invv = inv_c
    cdef const short[::1] negv = neg_c
    cdef FT t
    t.add = &addv[0, 0]
    t.mul = &mulv[0, 0]
    t.inv = &invv[0]
    t.neg = &negv[0]
    t.q = addv.shape[0]

    cdef Py_ssize_t n_pts = co.shape[0]
    cdef Py_ssize_t r = pen.shape[1]
    cdef Py_ssize_t k = lpts.shape[1]
    cdef long long checked = 0, failures = 0
    cdef int others1[MAXK]
    cdef int others2[MAXK]
    cdef int vP[3]
    cdef int vQ[3]
    cdef int vRr[3]
    cdef int vS[3]
    cdef int vTr[3]
    cdef int v_r[3]
    cdef int v_t[3]
    cdef int x_a[3]
    cdef int x_b[3]
    cdef int line_tr[3]
    cdef int line_ab[3]
    cdef int o[3]
    cdef Py_ssize_t pi, i1, i2, jj, qi, ri, si, ti
    cdef int l1, l2, n1, n2, a, b, d
    cdef int aq, bq, fr, ftt, lam, mu, value, expected
    with nogil:
        for pi in range(n_pts):
            for d in range(3):
                vP[d] = co[pi, d]
            for i1 in range(r):
                l1 = pen[pi, i1]
                n1 = 0
                for jj in range(k):
                    if lpts[l1, jj] != pi:
                        others1[n1] = lpts[l1, jj]
                        n1 += 1
                for i2 in range(r):
                    if i2 == i1:
                        continue
                    l2 = pen[pi, i2]
                    n2 = 0
                    for jj in range(k):
                        if lpts[l2, jj] != pi:
                            others2[n2] = lpts[l2, jj]
                            n2 += 1
                    for qi in range(n1):
                        for ri in range(n1):
                            if ri == qi:
                                continue
                            for d in range(3):
                                vQ[d] = co[others1[qi], d]
                                vRr[d] = co[others1[ri], d]
                            if not cramer2s(&t, vP, vRr, vQ, &aq, &bq):
                                failures += (n2 * (n2 - 1)) * t.q * (t.q - 1)
                                checked += (n2 * (n2 - 1)) * t.q * (t.q - 1)
                                continue
                            fr = fdiv(&t, bq, aq)
                            for d in range(3):
                                v_r[d] = fmul(&t, fr, vRr[d])
                            for si in range(n2):
                                for ti in range(n2):
                                    if ti == si:
                                        continue
                                    for d in range(3):
                                        vS[d] = co[others2[si], d]
                                        vTr[d] = co[others2[ti], d]
                                    if not cramer2s(&t, vP, vTr, vS, &aq, &bq):
                                        failures += t.q * (t.q - 1)
                                        checked += t.q * (t.q - 1)
                                        continue
                                    ftt = fdiv(&t, bq, aq)
                                    for d in range(3):
                                        v_t[d] = fmul(&t, ftt, vTr[d])
                                    cross3(&t, vTr, vRr, line_tr)
                                    for a in range(t.q):
                                        for d in range(3):
                                            x_a[d] = fadd(&t, vP[d], fmul(&t, a, v_r[d]))
                                        for b in range(1, t.q):
                                            for d in range(3):
                                                x_b[d] = fadd(&t, vP[d], fmul(&t, b, v_t[d]))
                                            cross3(&t, x_a, x_b, line_ab)
                                            cross3(&t, line_tr, line_ab, o)
                                            checked += 1
                                            if not cramer2s(&t, v_t, v_r, o, &lam, &mu):
                                                failures += 1
                                                continue
                                            if lam == 0:
                                                failures += 1
                                                continue
                                            value = fdiv(&t, mu, lam)
                                            expected = fneg(&t, fdiv(&t, a, b))
                                            if value != expected:
                                                failures += 1
    return int(checked), int(failures)


def add_gadget_exhaustive(coords, line_pts, line_of, add_t, mul_t, inv_t, neg_t):
    """See _kernels_py.add_gadget_exhaustive."""
    cdef const short[:, ::1] co = np.ascontiguousarray(coords, dtype=np.int16)
    cdef const int[:, ::1] lpts = np.ascontiguousarray(line_pts, dtype=np.int32)
    cdef const int[:, ::1] lof = np.ascontiguousarray(line_of, dtype=np.int32)
    add_c = np.ascontiguousarray(add_t, dtype=np.int16)
    mul_c = np.ascontiguousarray(mul_t, dtype=np.int16)
    inv_c = np.ascontiguousarray(inv_t, dtype=np.int16)
    neg_c = np.ascontiguousarray(neg_t, dtype=np.int16)
    cdef const short[:, ::1] addv = add_c
    cdef const short[:, ::1] mulv = mul_c
    cdef const short[::1] invv = inv_c
    cdef const short[::1] negv = neg_c
    cdef FT t
    t.add = &addv[0, 0]
    t.mul = &mulv[0, 0]
    t.inv = &invv[0]
    t.neg = &negv[0]
    t.q = addv.shape[0]

    cdef Py_ssize_t n_pts = co.shape[0]
    cdef Py_ssize_t n_lines = lpts.shape[0]
    cdef Py_ssize_t k = lpts.shape[1]
    on_line_arr = np.zeros(n_pts, dtype=np.uint8)
    cdef unsigned char[::1] on_line = on_line_arr
    cdef long long checked = 0, failures = 0
    cdef int vP[3]
    cdef int vQ[3]
    cdef int vRr[3]
    cdef int vSr[3]
    cdef int vTr[3]
    cdef int v_r[3]
    cdef int v_s[3]
    cdef int pt_a[3]
    cdef int pt_b[3]
    cdef int tmp1[3]
    cdef int tmp2[3]
    cdef int v_pt[3]
    cdef int line_vr[3]
    cdef int w_pt[3]
    cdef int w_vec[3]
    cdef int r2[3]
    cdef int o[3]
    cdef Py_ssize_t li, pi, qi, ri, s, tcol, jj
    cdef int pp, qq, rr, tt, srl, a, b, d
    cdef int aq, bq, fr, gs, ds, fs, aw, bw, lam, mu, value, expected
    with nogil:
        for li in range(n_lines):
            for jj in range(k):
                on_line[lpts[li, jj]] = 1
            for pi in range(k):
                pp = lpts[li, pi]
                for d in range(3):
                    vP[d] = co[pp, d]
                for qi in range(k):
                    if qi == pi:
                        continue
                    qq = lpts[li, qi]
                    for d in range(3):
                        vQ[d] = co[qq, d]
                    for ri in range(k):
                        if ri == pi or ri == qi:
                            continue
                        rr = lpts[li, ri]
                        for d in range(3):
                            vRr[d] = co[rr, d]
                        if not cramer2s(&t, vP, vRr, vQ, &aq, &bq):
                            failures += (n_pts - k) * (k - 2) * t.q * t.q
                            checked += (n_pts - k) * (k - 2) * t.q * t.q
                            continue
                        fr = fdiv(&t, bq, aq)
                        for d in range(3):
                            v_r[d] = fmul(&t, fr, vRr[d])
                        for s in range(n_pts):
                            if on_line[s]:
                                continue
                            for d in range(3):
                                vSr[d] = co[s, d]
                            srl = lof[s, rr]
                            for tcol in range(k):
                                tt = lpts[srl, tcol]
                                if tt == s or tt == rr:
                                    continue
                                for d in range(3):
                                    vTr[d] = co[tt, d]
                                if not cramer2s(&t, vSr, v_r, vTr, &gs, &ds):
                                    failures += t.q * t.q
                                    checked += t.q * t.q
                                    continue
                                fs = fdiv(&t, gs, ds)
                                for d in range(3):
                                    v_s[d] = fmul(&t, fs, vSr[d])
                                cross3(&t, vP, vTr, tmp1)
                                cross3(&t, vQ, vSr, tmp2)
                                cross3(&t, tmp1, tmp2, v_pt)
                                cross3(&t, v_pt, vRr, line_vr)
                                cross3(&t, vP, vSr, tmp1)
                                cross3(&t, line_vr, tmp1, w_pt)
                                if not cramer2s(&t, w_pt, vRr, v_pt, &aw, &bw):
                                    failures += t.q * t.q
                                    checked += t.q * t.q
                                    continue
                                for d in range(3):
                                    w_vec[d] = fmul(&t, aw, w_pt[d])
                                    r2[d] = fmul(&t, bw, vRr[d])
                                for a in range(t.q):
                                    for d in range(3):
                                        pt_a[d] = fadd(&t, vP[d], fmul(&t, a, v_r[d]))
                                    for b in range(t.q):
                                        for d in range(3):
                                            pt_b[d] = fadd(&t, v_s[d], fmul(&t, b, v_r[d]))
                                        cross3(&t, pt_a, pt_b, tmp1)
                                        cross3(&t, tmp1, line_vr, o)
                                        checked += 1
                                        if not cramer2s(&t, w_vec, r2, o, &lam, &mu):
                                            failures += 1
                                            continue
                                        if lam == 0:
                                            failures += 1
                                            continue
                                        value = fdiv(&t, mu, lam)
                                        expected = fadd(&t, a, b)
                                        if value != expected:
                                            failures += 1
            for jj in range(k):
                on_line[lpts[li, jj]] = 0
    return int(checked), int(failures)
