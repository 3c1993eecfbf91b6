"""Pure-Python (numpy) implementations of the hot kernels.

This is the fallback backend; `projcorrect._speedups` is the compiled
twin with identical signatures and semantics.  Both are exercised against
each other in the test suite.  All field arithmetic is table-driven
(code-indexed gathers), all geometry is index arithmetic.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def vote_pairs(
    p1: np.ndarray,
    p2: np.ndarray,
    cod_pts: np.ndarray,
    dom_line_of: np.ndarray,
    preserved: np.ndarray,
    n_cod_points: int,
) -> np.ndarray:
    """Majority-vote tally over all ordered pairs of pointed lines at one point.

    p1, p2       (m,)   domain point indices of the marked pair per pointed line
    cod_pts      (m,k)  sorted codomain point indices of the span of the two
                        image points of each pointed line
    dom_line_of  (Np,Np) line index through two domain points, -1 on diagonal
    preserved    (Ld,)  uint8 mask of domain lines whose image is a line

    A pair (i, j) contributes a vote for codomain point z when the two
    cross spans span(y1_i, y1_j) and span(y2_i, y2_j) are preserved lines
    and the image spans of i and j meet in exactly one point z.  Returns
    the per-candidate vote counts (int64, length n_cod_points).
    """
    m = int(p1.shape[0])
    k = int(cod_pts.shape[1])
    counts = np.zeros(n_cod_points, dtype=np.int64)
    pres = preserved.astype(bool)
    block = max(1, 4_000_000 // max(1, m * k * k))
    for i0 in range(0, m, block):
        i1 = min(m, i0 + block)
        l13 = dom_line_of[p1[i0:i1, None], p1[None, :]]
        l24 = dom_line_of[p2[i0:i1, None], p2[None, :]]
        ok = (l13 >= 0) & pres[np.clip(l13, 0, None)]
        ok &= (l24 >= 0) & pres[np.clip(l24, 0, None)]
        # common points of the two image spans: exactly one => candidate
        eq = cod_pts[i0:i1, None, :, None] == cod_pts[None, :, None, :]
        ncommon = eq.sum(axis=(2, 3))
        ok &= ncommon == 1
        first = eq.reshape(i1 - i0, m, k * k).argmax(axis=2) // k
        z = np.take_along_axis(cod_pts[i0:i1], first, axis=1)
        counts += np.bincount(z[ok], minlength=n_cod_points)
    return counts


def preserved_mask(
    table: np.ndarray, dom_line_pts: np.ndarray, cod_line_of: np.ndarray
) -> np.ndarray:
    """uint8 mask over domain lines: 1 iff the image point set is a line.

    The map is injective, so the q+1 image points are distinct and form a
    line iff they are collinear, i.e. every image point lies on the
    codomain line through the first two.
    """
    imgs = table[dom_line_pts]
    first = cod_line_of[imgs[:, 0], imgs[:, 1]]
    ok = np.ones(imgs.shape[0], dtype=bool)
    for j in range(2, imgs.shape[1]):
        ok &= cod_line_of[imgs[:, 0], imgs[:, j]] == first
    return ok.astype(np.uint8)


# -- planar gadget verification ---------------------------------------------------
#
# Both exhaustive checks run the actual geometric construction in ambient
# coordinates of a projective plane: lines as cross products, meets as
# cross products of line duals, chart coefficients by Cramer solves.  The
# closed forms (-a/b and a+b) are computed independently from the field
# tables and compared per configuration.


class _F:
    """Componentwise field ops over ndarray codes via lookup tables."""

    def __init__(self, add_t, mul_t, inv_t, neg_t):
        self.add_t, self.mul_t, self.inv_t, self.neg_t = add_t, mul_t, inv_t, neg_t

    def add(self, x, y):
        return self.add_t[x, y]

    def sub(self, x, y):
        return self.add_t[x, self.neg_t[y]]

    def mul(self, x, y):
        return self.mul_t[x, y]

    def div(self, x, y):
        return self.mul_t[x, self.inv_t[y]]

    def neg(self, x):
        return self.neg_t[x]

    def cross(self, u, v):
        """(..., 3) x (..., 3) -> (..., 3) over the field."""
        w0 = self.sub(self.mul(u[..., 1], v[..., 2]), self.mul(u[..., 2], v[..., 1]))
        w1 = self.sub(self.mul(u[..., 2], v[..., 0]), self.mul(u[..., 0], v[..., 2]))
        w2 = self.sub(self.mul(u[..., 0], v[..., 1]), self.mul(u[..., 1], v[..., 0]))
        return np.stack([w0, w1, w2], axis=-1)

    def cramer2(self, u, v, c):
        """Per-row (alpha, beta) with c = alpha*u + beta*v; u, v independent."""
        d01 = self.sub(self.mul(u[..., 0], v[..., 1]), self.mul(u[..., 1], v[..., 0]))
        d02 = self.sub(self.mul(u[..., 0], v[..., 2]), self.mul(u[..., 2], v[..., 0]))
        d12 = self.sub(self.mul(u[..., 1], v[..., 2]), self.mul(u[..., 2], v[..., 1]))
        use01 = d01 != 0
        use02 = ~use01 & (d02 != 0)
        i = np.where(use01, 0, np.where(use02, 0, 1))
        j = np.where(use01, 1, 2)
        d = np.where(use01, d01, np.where(use02, d02, d12))
        ui = np.take_along_axis(u, i[..., None], axis=-1)[..., 0]
        uj = np.take_along_axis(u, j[..., None], axis=-1)[..., 0]
        vi = np.take_along_axis(v, i[..., None], axis=-1)[..., 0]
        vj = np.take_along_axis(v, j[..., None], axis=-1)[..., 0]
        ci = np.take_along_axis(c, i[..., None], axis=-1)[..., 0]
        cj = np.take_along_axis(c, j[..., None], axis=-1)[..., 0]
        alpha = self.div(self.sub(self.mul(ci, vj), self.mul(cj, vi)), d)
        beta = self.div(self.sub(self.mul(ui, cj), self.mul(uj, ci)), d)
        return alpha, beta

    def scale(self, s, u):
        return self.mul(s[..., None], u)


def _marked_pair_configs(pencils_mat: np.ndarray, line_pts: np.ndarray):
    """All (P, Q, R, S, T) with Q,R ordered on one line through P and S,T on another."""
    n_pts, r = pencils_mat.shape
    k = line_pts.shape[1]
    blocks = []
    # ordered pairs of distinct points on a line, excluding the base point
    for pi in range(n_pts):
        marks = []
        for li in pencils_mat[pi]:
            others = line_pts[li][line_pts[li] != pi]
            a, b = np.meshgrid(others, others, indexing="ij")
            keep = a != b
            marks.append(np.stack([a[keep], b[keep]], axis=1))
        n_marks = marks[0].shape[0]
        for i1 in range(r):
            for i2 in range(r):
                if i1 == i2:
                    continue
                qr = np.repeat(marks[i1], n_marks, axis=0)
                st = np.tile(marks[i2], (n_marks, 1))
                p_col = np.full((qr.shape[0], 1), pi, dtype=np.int64)
                blocks.append(np.concatenate([p_col, qr, st], axis=1))
    return np.concatenate(blocks, axis=0)


def mult_gadget_exhaustive(
    coords: np.ndarray,
    pencils_mat: np.ndarray,
    line_pts: np.ndarray,
    add_t: np.ndarray,
    mul_t: np.ndarray,
    inv_t: np.ndarray,
    neg_t: np.ndarray,
) -> tuple[int, int]:
    """Check the multiplicative gadget identity over every configuration of a plane.

    For every point P, ordered pair of distinct lines through P marked by
    (Q, R) and (S, T), and every (a, b) with b != 0: construct the meet O
    of the line through T and R with the line through the chart points of
    a and b, and compare its chart coordinate on the (T, T+R, R) frame to
    -a/b.  Returns (configurations checked, failures).
    """
    q = int(inv_t.shape[0])
    f = _F(add_t, mul_t, inv_t, neg_t)
    cfg = _marked_pair_configs(pencils_mat, line_pts)
    a_vals, b_vals = np.meshgrid(np.arange(q), np.arange(1, q), indexing="ij")
    ab = np.stack([a_vals.ravel(), b_vals.ravel()], axis=1)
    checked = 0
    failures = 0
    chunk = max(1, 400_000 // ab.shape[0])
    for c0 in range(0, cfg.shape[0], chunk):
        block = cfg[c0 : c0 + chunk]
        nb = block.shape[0]
        rows = np.repeat(block, ab.shape[0], axis=0)
        a = np.tile(ab[:, 0], nb)
        b = np.tile(ab[:, 1], nb)
        vP = coords[rows[:, 0]].astype(np.int64)
        vQ = coords[rows[:, 1]].astype(np.int64)
        vRr = coords[rows[:, 2]].astype(np.int64)
        vS = coords[rows[:, 3]].astype(np.int64)
        vTr = coords[rows[:, 4]].astype(np.int64)
        # chart scale factors: v_R = (beta/alpha) R with Q ~ alpha P + beta R
        aq, bq = f.cramer2(vP, vRr, vQ)
        v_r = f.scale(f.div(bq, aq), vRr)
        as_, bs = f.cramer2(vP, vTr, vS)
        v_t = f.scale(f.div(bs, as_), vTr)
        x_a = f.add(vP, f.scale(a, v_r))
        x_b = f.add(vP, f.scale(b, v_t))
        line_tr = f.cross(vTr, vRr)
        line_ab = f.cross(x_a, x_b)
        o = f.cross(line_tr, line_ab)
        lam, mu = f.cramer2(v_t, v_r, o)
        value = f.div(mu, lam)
        expected = f.neg(f.div(a, b))
        checked += value.shape[0]
        failures += int(np.count_nonzero((value != expected) | (lam == 0)))
    return checked, failures


def add_gadget_exhaustive(
    coords: np.ndarray,
    line_pts: np.ndarray,
    line_of: np.ndarray,
    add_t: np.ndarray,
    mul_t: np.ndarray,
    inv_t: np.ndarray,
    neg_t: np.ndarray,
) -> tuple[int, int]:
    """Check the additive gadget identity over every configuration of a plane.

    For every marked line (L, P, Q, R), point S off L, third point T on the
    line through S and R, and every (a, b): run the two-triangle transfer
    construction and compare the chart coordinate of the final meet on the
    (W, V, R) frame to a + b.  Returns (configurations checked, failures).
    """
    q = int(inv_t.shape[0])
    f = _F(add_t, mul_t, inv_t, neg_t)
    n_pts = coords.shape[0]
    n_lines = line_pts.shape[0]

    blocks = []
    all_pts = np.arange(n_pts)
    on_line = np.zeros(n_pts, dtype=bool)
    for li in range(n_lines):
        pts = line_pts[li]
        on_line[:] = False
        on_line[pts] = True
        s_choices = all_pts[~on_line]
        triples = []
        for p in pts:
            for qq in pts:
                if qq == p:
                    continue
                for rr in pts:
                    if rr != p and rr != qq:
                        triples.append((p, qq, rr))
        triples = np.array(triples, dtype=np.int64)
        for s in s_choices:
            sr_line = line_of[s, triples[:, 2]]
            # the q-1 points of line(S, R) other than S and R, per triple
            for tcol in range(line_pts.shape[1]):
                tpt = line_pts[sr_line, tcol]
                keep = (tpt != s) & (tpt != triples[:, 2])
                rows = np.concatenate(
                    [
                        triples[keep],
                        np.full((int(keep.sum()), 1), s, dtype=np.int64),
                        tpt[keep, None],
                    ],
                    axis=1,
                )
                blocks.append(rows)
    cfg = np.concatenate(blocks, axis=0)

    a_vals, b_vals = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    ab = np.stack([a_vals.ravel(), b_vals.ravel()], axis=1)
    checked = 0
    failures = 0
    chunk = max(1, 400_000 // ab.shape[0])
    for c0 in range(0, cfg.shape[0], chunk):
        block = cfg[c0 : c0 + chunk]
        nb = block.shape[0]
        rows = np.repeat(block, ab.shape[0], axis=0)
        a = np.tile(ab[:, 0], nb)
        b = np.tile(ab[:, 1], nb)
        vP = coords[rows[:, 0]].astype(np.int64)
        vQ = coords[rows[:, 1]].astype(np.int64)
        vRr = coords[rows[:, 2]].astype(np.int64)
        vSr = coords[rows[:, 3]].astype(np.int64)
        vTr = coords[rows[:, 4]].astype(np.int64)
        aq, bq = f.cramer2(vP, vRr, vQ)
        v_r = f.scale(f.div(bq, aq), vRr)
        # v_S scaled so that T ~ v_S + v_R
        gs, ds = f.cramer2(vSr, v_r, vTr)
        v_s = f.scale(f.div(gs, ds), vSr)
        pt_a = f.add(vP, f.scale(a, v_r))
        pt_b = f.add(v_s, f.scale(b, v_r))
        v_pt = f.cross(f.cross(vP, vTr), f.cross(vQ, vSr))
        line_vr = f.cross(v_pt, vRr)
        w_pt = f.cross(line_vr, f.cross(vP, vSr))
        o = f.cross(f.cross(pt_a, pt_b), line_vr)
        # frame: V ~ w + r2 with w, r2 scalings of W and R
        aw, bw = f.cramer2(w_pt, vRr, v_pt)
        w_vec = f.scale(aw, w_pt)
        r2 = f.scale(bw, vRr)
        lam, mu = f.cramer2(w_vec, r2, o)
        value = f.div(mu, lam)
        expected = f.add(a, b)
        checked += value.shape[0]
        failures += int(np.count_nonzero((value != expected) | (lam == 0)))
    return checked, failures
