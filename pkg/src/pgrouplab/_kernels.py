"""Batch integer kernels over all elements of a small group.

Elements are addressed by mixed-radix codes in lexicographic order (the
first coordinate is most significant).  Every kernel has a numba version
and a pure-numpy version with identical results; the numba path is used
when numba imports and ``PGROUPLAB_DISABLE_NUMBA`` is unset or ``0``.
"""
import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

INF_H = 1 << 30  # internal stand-in for an infinite height; never serialized


def _numba_requested():
    flag = os.environ.get("PGROUPLAB_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no", "off")


USE_NUMBA = HAVE_NUMBA and _numba_requested()


def strides(moduli):
    moduli = np.asarray(moduli, dtype=np.int64)
    s = np.ones(len(moduli), dtype=np.int64)
    for i in range(len(moduli) - 2, -1, -1):
        s[i] = s[i + 1] * moduli[i + 1]
    return s


def all_elements(moduli):
    """(n, k) array of every element, row index equal to its code."""
    moduli = tuple(int(m) for m in moduli)
    if not moduli:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices(moduli, dtype=np.int64)
    return grids.reshape(len(moduli), -1).T.copy()


def encode(vecs, moduli):
    vecs = np.asarray(vecs, dtype=np.int64) % np.asarray(moduli, dtype=np.int64)
    return vecs @ strides(moduli)


def decode(codes, moduli):
    codes = np.asarray(codes, dtype=np.int64)
    moduli = np.asarray(moduli, dtype=np.int64)
    st = strides(moduli)
    return (codes[..., None] // st) % moduli


# -- numpy implementations ---------------------------------------------------


def _apply_codes_np(mats, codes, moduli):
    moduli = np.asarray(moduli, dtype=np.int64)
    vecs = decode(codes, moduli)
    imgs = np.einsum("eij,nj->eni", np.asarray(mats, dtype=np.int64), vecs) % moduli
    return imgs @ strides(moduli)


def _height_sequences_np(moduli, lam, p, length):
    moduli = np.asarray(moduli, dtype=np.int64)
    vecs = all_elements(moduli)
    out = np.empty((vecs.shape[0], length + 1), dtype=np.int64)
    cur = vecs.copy()
    for n in range(length + 1):
        h = np.full(cur.shape, INF_H, dtype=np.int64)
        nz = cur != 0
        if np.any(nz):
            v = np.zeros(cur.shape, dtype=np.int64)
            rem = cur.copy()
            active = nz.copy()
            while np.any(active):
                div = active & (rem % p == 0)
                v[div] += 1
                rem[div] //= p
                active = div
            h[nz] = v[nz]
        out[:, n] = h.min(axis=1) if cur.shape[1] else INF_H
        cur = (cur * p) % moduli
    return out


def _aut_mask_np(mats, lam, p):
    mats = np.asarray(mats, dtype=np.int64)
    lam = np.asarray(lam, dtype=np.int64)
    E, k = mats.shape[0], len(lam)
    if k == 0:
        return np.ones(E, dtype=bool)
    # socle matrix: c_ij = a_ij / p^(lam_i - lam_j) mod p, zero when lam_j > lam_i
    diff = lam[None, :] - lam[:, None]
    div = p ** np.maximum(-diff, 0)
    red = (mats // div[None]) % p
    red[:, diff > 0] = 0
    ok = np.ones(E, dtype=bool)
    M = red.copy()
    rows = np.arange(E)
    for c in range(k):
        cand = M[:, c:, c] != 0
        has = cand.any(axis=1)
        ok &= has
        piv = c + np.argmax(cand, axis=1)
        tmp = M[rows, piv].copy()
        M[rows, piv] = M[:, c]
        M[:, c] = tmp
        pv = M[:, c, c]
        inv = np.ones(E, dtype=np.int64)
        for u in range(1, p):
            inv[pv == u] = pow(u, -1, p)
        M[:, c] = (M[:, c] * inv[:, None]) % p
        f = M[:, c + 1:, c].copy()
        M[:, c + 1:] = (M[:, c + 1:] - f[:, :, None] * M[:, c][:, None, :]) % p
    return ok


def _closure_np(mask, gen_code, moduli):
    moduli = np.asarray(moduli, dtype=np.int64)
    g = decode(np.int64(gen_code), moduli)
    members = decode(np.flatnonzero(mask), moduli)
    out = np.zeros_like(mask)
    mult = np.zeros_like(g)
    while True:
        out[encode((members + mult) % moduli, moduli)] = True
        mult = (mult + g) % moduli
        if not mult.any():
            break
    return out


def _orbit_labels_np(mats, moduli):
    n = int(np.prod(np.asarray(moduli, dtype=np.int64))) if len(moduli) else 1
    codes = np.arange(n, dtype=np.int64)
    label = codes.copy()
    if len(mats) == 0:
        return label
    imgs = _apply_codes_np(mats, codes, moduli)
    while True:
        old = label.copy()
        for img in imgs:
            label = np.minimum(label, label[img])
            np.minimum.at(label, img, label.copy())
        label = label[label]
        if np.array_equal(label, old):
            return label


# -- numba implementations ---------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _apply_codes_nb(mats, codes, moduli):
        E, k = mats.shape[0], moduli.shape[0]
        n = codes.shape[0]
        st = np.ones(k, dtype=np.int64)
        for i in range(k - 2, -1, -1):
            st[i] = st[i + 1] * moduli[i + 1]
        out = np.empty((E, n), dtype=np.int64)
        x = np.empty(k, dtype=np.int64)
        for t in range(n):
            c = codes[t]
            for i in range(k):
                x[i] = (c // st[i]) % moduli[i]
            for e in range(E):
                code = 0
                for i in range(k):
                    s = 0
                    for j in range(k):
                        s += mats[e, i, j] * x[j]
                    code += (s % moduli[i]) * st[i]
                out[e, t] = code
        return out

    @numba.njit(cache=True)
    def _height_sequences_nb(moduli, lam, p, length):
        k = moduli.shape[0]
        n = 1
        for i in range(k):
            n *= moduli[i]
        st = np.ones(k, dtype=np.int64)
        for i in range(k - 2, -1, -1):
            st[i] = st[i + 1] * moduli[i + 1]
        out = np.empty((n, length + 1), dtype=np.int64)
        x = np.empty(k, dtype=np.int64)
        for t in range(n):
            for i in range(k):
                x[i] = (t // st[i]) % moduli[i]
            for s in range(length + 1):
                h = INF_H
                for i in range(k):
                    a = x[i]
                    if a != 0:
                        v = 0
                        while a % p == 0:
                            a //= p
                            v += 1
                        if v < h:
                            h = v
                out[t, s] = h
                for i in range(k):
                    x[i] = (x[i] * p) % moduli[i]
        return out

    @numba.njit(cache=True)
    def _aut_mask_nb(mats, lam, p):
        E, k = mats.shape[0], lam.shape[0]
        ok = np.ones(E, dtype=np.bool_)
        M = np.empty((k, k), dtype=np.int64)
        for e in range(E):
            for i in range(k):
                for j in range(k):
                    d = lam[j] - lam[i]
                    if d > 0:
                        M[i, j] = 0
                    elif d == 0:
                        M[i, j] = mats[e, i, j] % p
                    else:
                        q = 1
                        for _ in range(-d):
                            q *= p
                        M[i, j] = (mats[e, i, j] // q) % p
            for c in range(k):
                piv = -1
                for r in range(c, k):
                    if M[r, c] != 0:
                        piv = r
                        break
                if piv < 0:
                    ok[e] = False
                    break
                if piv != c:
                    for j in range(k):
                        tmp = M[c, j]
                        M[c, j] = M[piv, j]
                        M[piv, j] = tmp
                inv = 1
                for u in range(1, p):
                    if (u * M[c, c]) % p == 1:
                        inv = u
                        break
                for j in range(k):
                    M[c, j] = (M[c, j] * inv) % p
                for r in range(c + 1, k):
                    f = M[r, c]
                    if f != 0:
                        for j in range(k):
                            M[r, j] = (M[r, j] - f * M[c, j]) % p
        return ok

    @numba.njit(cache=True)
    def _closure_nb(mask, gen_code, moduli):
        k = moduli.shape[0]
        n = mask.shape[0]
        st = np.ones(k, dtype=np.int64)
        for i in range(k - 2, -1, -1):
            st[i] = st[i + 1] * moduli[i + 1]
        g = np.empty(k, dtype=np.int64)
        for i in range(k):
            g[i] = (gen_code // st[i]) % moduli[i]
        out = np.zeros(n, dtype=np.bool_)
        mult = np.zeros(k, dtype=np.int64)
        while True:
            for t in range(n):
                if mask[t]:
                    code = 0
                    for i in range(k):
                        code += (((t // st[i]) % moduli[i] + mult[i]) % moduli[i]) * st[i]
                    out[code] = True
            nz = False
            for i in range(k):
                mult[i] = (mult[i] + g[i]) % moduli[i]
                if mult[i] != 0:
                    nz = True
            if not nz:
                break
        return out

    @numba.njit(cache=True)
    def _find(parent, a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    @numba.njit(cache=True)
    def _orbit_labels_nb(imgs):
        E, n = imgs.shape
        parent = np.arange(n)
        for e in range(E):
            for t in range(n):
                a = _find(parent, t)
                b = _find(parent, imgs[e, t])
                if a != b:
                    if a < b:
                        parent[b] = a
                    else:
                        parent[a] = b
        label = np.empty(n, dtype=np.int64)
        for t in range(n):
            label[t] = _find(parent, t)
        return label


# -- dispatch ----------------------------------------------------------------


def _as_arrays(mats, moduli):
    mats = np.ascontiguousarray(np.asarray(mats, dtype=np.int64))
    moduli = np.ascontiguousarray(np.asarray(moduli, dtype=np.int64))
    return mats, moduli


def apply_codes(mats, codes, moduli, use_numba=None):
    """Images of the coded elements under each matrix: shape (E, n) of codes."""
    mats, moduli = _as_arrays(mats, moduli)
    codes = np.ascontiguousarray(np.asarray(codes, dtype=np.int64))
    if mats.shape[0] == 0:
        return np.zeros((0, codes.shape[0]), dtype=np.int64)
    if USE_NUMBA if use_numba is None else use_numba:
        return _apply_codes_nb(mats, codes, moduli)
    return _apply_codes_np(mats, codes, moduli)


def height_sequences(moduli, lam, p, use_numba=None):
    """Height sequences of every element, INF_H marking infinite height."""
    moduli = np.ascontiguousarray(np.asarray(moduli, dtype=np.int64))
    lam = np.asarray(lam, dtype=np.int64)
    length = int(lam.max()) if lam.size else 0
    if USE_NUMBA if use_numba is None else use_numba:
        return _height_sequences_nb(moduli, lam, np.int64(p), np.int64(length))
    return _height_sequences_np(moduli, lam, p, length)


def aut_mask(mats, lam, p, use_numba=None):
    """Which endomorphism matrices are automorphisms (socle map invertible mod p)."""
    mats = np.ascontiguousarray(np.asarray(mats, dtype=np.int64))
    lam = np.ascontiguousarray(np.asarray(lam, dtype=np.int64))
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if USE_NUMBA if use_numba is None else use_numba:
        return _aut_mask_nb(mats, lam, np.int64(p))
    return _aut_mask_np(mats, lam, p)


def closure(mask, gen_code, moduli, use_numba=None):
    """Membership mask of <H, g> where H is given by ``mask``."""
    mask = np.ascontiguousarray(np.asarray(mask, dtype=np.bool_))
    moduli = np.ascontiguousarray(np.asarray(moduli, dtype=np.int64))
    if USE_NUMBA if use_numba is None else use_numba:
        return _closure_nb(mask, np.int64(gen_code), moduli)
    return _closure_np(mask, gen_code, moduli)


def orbit_labels(mats, moduli, use_numba=None):
    """Smallest code in each element's orbit under the group the matrices generate.

    The matrices must be automorphisms, so orbits are the connected
    components of the graph x -> g(x).
    """
    mats, moduli = _as_arrays(mats, moduli)
    if USE_NUMBA if use_numba is None else use_numba:
        n = int(np.prod(moduli)) if moduli.size else 1
        imgs = _apply_codes_nb(mats, np.arange(n, dtype=np.int64), moduli) if mats.shape[0] else \
            np.zeros((0, n), dtype=np.int64)
        return _orbit_labels_nb(imgs)
    return _orbit_labels_np(mats, moduli)
