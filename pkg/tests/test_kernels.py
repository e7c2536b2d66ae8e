import os
import subprocess
import sys

import numpy as np
import pytest

from pgrouplab import _kernels as K
from pgrouplab import make_group
from pgrouplab.core import height_sequence
from pgrouplab.homset import aut_array, endo_array, is_automorphism, Homomorphism

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")

SHAPES = [(2, (3, 1)), (3, (2, 1, 1)), (2, (2, 2, 1)), (5, (1, 1)), (2, (1,))]


def test_encode_decode_roundtrip():
    mods = (8, 4, 2)
    allv = K.all_elements(mods)
    assert np.array_equal(K.encode(allv, mods), np.arange(64))
    assert np.array_equal(K.decode(np.arange(64), mods), allv)


@needs_numba
@pytest.mark.parametrize("p,lam", SHAPES)
def test_parity(p, lam, rng):
    G = make_group(p, lam)
    mats = endo_array(G)
    sel = mats[rng.integers(0, len(mats), 40)]
    codes = np.arange(G.order)
    assert np.array_equal(K.apply_codes(sel, codes, G.moduli, use_numba=True),
                          K.apply_codes(sel, codes, G.moduli, use_numba=False))
    assert np.array_equal(K.height_sequences(G.moduli, G.lam, p, use_numba=True),
                          K.height_sequences(G.moduli, G.lam, p, use_numba=False))
    assert np.array_equal(K.aut_mask(mats, G.lam, p, use_numba=True),
                          K.aut_mask(mats, G.lam, p, use_numba=False))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    for c in rng.integers(0, G.order, 2):
        a = K.closure(mask, int(c), G.moduli, use_numba=True)
        b = K.closure(mask, int(c), G.moduli, use_numba=False)
        assert np.array_equal(a, b)
        mask = a
    autos = aut_array(G)[:6]
    assert np.array_equal(K.orbit_labels(autos, G.moduli, use_numba=True),
                          K.orbit_labels(autos, G.moduli, use_numba=False))


@pytest.mark.parametrize("use_numba", [False, True] if K.HAVE_NUMBA else [False])
def test_kernels_match_reference(use_numba):
    G = make_group(2, [3, 2, 1])
    hs = K.height_sequences(G.moduli, G.lam, G.p, use_numba=use_numba)
    for code, x in enumerate(G.elements()):
        ref = tuple(K.INF_H if h == float("inf") else h for h in height_sequence(x))
        assert tuple(hs[code]) == ref
    mats = endo_array(make_group(2, [2, 1]))
    mask = K.aut_mask(mats, (2, 1), 2, use_numba=use_numba)
    H = make_group(2, [2, 1])
    for m, ok in zip(mats, mask):
        hom = Homomorphism(H, H, tuple(tuple(int(v) for v in r) for r in m))
        assert (is_automorphism(hom) is not None) == bool(ok)


def test_env_flag_forces_numpy():
    code = "from pgrouplab import _kernels as K; print(K.USE_NUMBA)"
    env = dict(os.environ, PGROUPLAB_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "False"
    env["PGROUPLAB_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == str(K.HAVE_NUMBA)
