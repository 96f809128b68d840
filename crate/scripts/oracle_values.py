"""Independent reference values for the frozen-value tests.

Brute-force numpy implementations, sharing no code with the Rust crate.
Run: python3 scripts/oracle_values.py
"""
import itertools
import math

import numpy as np


def h2(p):
    return 0.0 if p in (0.0, 1.0) else -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def kron_power(m, n):
    out = np.array([[1]], dtype=np.int64)
    for _ in range(n):
        out = np.kron(out, m)
    return out


def polar_matrix(N):
    n = N.bit_length() - 1
    F = np.array([[1, 0], [1, 1]], dtype=np.int64)
    Fn = kron_power(F, n)
    rev = [int(format(i, f"0{n}b")[::-1], 2) if n else 0 for i in range(N)]
    B = np.zeros((N, N), dtype=np.int64)
    for i, r in enumerate(rev):
        B[i, r] = 1
    return (B @ Fn) % 2


def toeplitz(N, g):
    T = np.zeros((N, N), dtype=np.int64)
    for i in range(N):
        for j, c in enumerate(g):
            if i + j < N:
                T[i, i + j] = c
    return T


def mi_joint(pxy):
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    nz = pxy > 0
    return float((pxy[nz] * np.log2(pxy[nz] / (px @ py)[nz])).sum())


def bit_channel_mis(N, p, G):
    # I(W_i; Y, W^{i-1}) = I(W^{i+1}; Y) - I(W^i; Y) under uniform W.
    words = np.array(list(itertools.product([0, 1], repeat=N)))[:, ::-1]  # bit j = w_j
    xs = (words @ G) % 2
    ys = np.array(list(itertools.product([0, 1], repeat=N)))[:, ::-1]
    dist = (xs[:, None, :] != ys[None, :, :]).sum(axis=2)
    pyx = (p ** dist) * ((1 - p) ** (N - dist)) / 2 ** N
    prev = 0.0
    out = []
    for i in range(1, N + 1):
        key = words[:, :i] @ (1 << np.arange(i))
        joint = np.zeros((2 ** i, pyx.shape[1]))
        np.add.at(joint, key, pyx)
        cur = mi_joint(joint)
        out.append(cur - prev)
        prev = cur
    return out


def main():
    print("secrecy capacity pb=0.05")
    for pe in [0.15, 0.2, 0.25, 0.3, 0.35, 0.4]:
        print(f"  {pe}: {h2(pe) - h2(0.05):.12f}")
    p = 0.11
    e = 2 * p * (1 - p)
    print(f"minus BSC(0.11) capacity {1 - h2(e):.12f}")
    print("bit-channel MI, N=8, BSC(0.11), polar")
    G = polar_matrix(8)
    print("  ", [f"{v:.12f}" for v in bit_channel_mis(8, 0.11, G)])
    g = [1, 0, 1, 1]
    T = toeplitz(8, g)
    print("bit-channel MI, N=8, BSC(0.11), PAC g=1+D^2+D^3")
    print("  ", [f"{v:.12f}" for v in bit_channel_mis(8, 0.11, (T @ G) % 2)])
    u = np.array([1, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0])
    g133 = [1, 0, 1, 1, 0, 1, 1]
    G16 = polar_matrix(16)
    print("polar x(u) N=16:", "".join(map(str, (u @ G16) % 2)))
    print("pac x(u) N=16 g=133:", "".join(map(str, (u @ toeplitz(16, g133) @ G16) % 2)))
    print(f"ie bound 256: {6 * 2 ** -math.sqrt(256):.10e}  512: {6 * 2 ** -math.sqrt(512):.10e}")
    print(f"-log2: {math.sqrt(256) - math.log2(6):.6f} {math.sqrt(512) - math.log2(6):.6f}")
    print(f"k(s)/N: {1 - h2(0.005) - 0.1:.10f}  k(s): {round((1 - h2(0.005) - 0.1) * 512)}")
    print("sqrt(2*I) for printed I:", [f"{math.sqrt(2 * i):.6f}" for i in [58, 46, 33, 24, 13, 7]])


if __name__ == "__main__":
    main()
