"""Plain-matrix reference computations for the four schemes.

Everything here is written out with explicit Kronecker products and bras,
sharing no code with the library apart from the secret's angles.
"""
import math

import numpy as np

R2 = 1 / math.sqrt(2)
I2 = np.eye(2)
KET0, KET1 = np.array([1.0, 0]), np.array([0, 1.0])
PLUS, MINUS = (KET0 + KET1) * R2, (KET0 - KET1) * R2

OPS = {
    "Identity": I2,
    "PaperSigmaX": np.outer(KET1, KET0) - np.outer(KET0, KET1),
    "SigmaZ": np.outer(KET0, KET0) - np.outer(KET1, KET1),
    "SigmaXZ": np.outer(KET0, KET1) + np.outer(KET1, KET0),
}
_e = np.eye(4)
OMEGA = (
    np.outer(_e[0], _e[0])
    + np.outer(_e[3], _e[3])
    + R2 * (np.outer(_e[1], _e[1]) + np.outer(_e[1], _e[2]) + np.outer(_e[2], _e[1]) - np.outer(_e[2], _e[2]))
)

BELL = {
    "psi+": (np.kron(KET0, KET0) + np.kron(KET1, KET1)) * R2,
    "psi-": (np.kron(KET0, KET0) - np.kron(KET1, KET1)) * R2,
    "phi+": (np.kron(KET0, KET1) + np.kron(KET1, KET0)) * R2,
    "phi-": (np.kron(KET0, KET1) - np.kron(KET1, KET0)) * R2,
}
XVEC = {"+x": PLUS, "-x": MINUS}


def ket(theta, phi):
    return np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)])


def xi_vectors(theta, phi):
    k = ket(theta, phi)
    return {"0": k, "1": np.array([np.conj(k[1]), -k[0]])}


def ghz(a=R2, b=R2):
    v = np.zeros(8, dtype=complex)
    v[0], v[7] = a, b
    return v


def w(a=0.5, b=0.5, c=R2):
    v = np.zeros(8, dtype=complex)
    v[1], v[2], v[4] = a, b, c
    return v


def _bra(v, rest_dim):
    return np.kron(np.conj(v)[None, :], np.eye(rest_dim))


def receivers_state(protocol, theta, phi, key, channel=None):
    """Unnormalized receivers' vector for a branch (c alone, or b then c)."""
    if protocol in ("zc1", "zc2"):
        psi = channel if channel is not None else (ghz() if protocol == "zc1" else w())
        bc = _bra(xi_vectors(theta, phi)[key[0]], 4) @ psi
    else:
        psi = np.kron(ket(theta, phi), channel if channel is not None else (ghz() if protocol == "hbb" else w()))
        bc = _bra(BELL[key[0]], 4) @ psi
    if protocol in ("zc1", "hbb"):
        return _bra(XVEC[key[1]], 2) @ bc
    return bc


def apply_named(vec, names):
    for n in names:
        if n == "Omega":
            vec = OMEGA @ vec
        elif vec.shape[0] == 2:
            vec = OPS[n] @ vec
        else:
            vec = np.kron(I2, OPS[n]) @ vec
    return vec


def charlie_fidelity(vec, theta, phi):
    """<secret| rho_c |secret> for a normalized receivers' vector."""
    s = ket(theta, phi)
    if vec.shape[0] == 2:
        return abs(np.vdot(s, vec)) ** 2
    m = vec.reshape(2, 2)  # rows: b, cols: c
    rho_c = m.T @ m.conj()
    return float(np.real(np.conj(s) @ rho_c @ s))


def branch(protocol, theta, phi, key, names, channel=None):
    v = receivers_state(protocol, theta, phi, key, channel)
    p = float(np.vdot(v, v).real)
    if p < 1e-14:
        return 0.0, None
    v = apply_named(v / math.sqrt(p), names)
    return p, charlie_fidelity(v, theta, phi)
