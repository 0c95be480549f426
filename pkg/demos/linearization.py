"""Linearization coefficients gamma(n, m, k) of the normalized Laguerre
polynomials and the sequence-side translation they define.

    python demos/linearization.py
"""
import numpy as np

from halfline import LAGUERRE_SEQ, NormSpec, SeqVec, build_linearization_table, norm, translate_seq

alpha, K = 1.0, 48
table = build_linearization_table(K, alpha)
k = np.arange(21)
faces = np.max(np.abs(table.values[0, 0, k] - 2.0 ** (-(alpha + k + 1))) / 2.0 ** (-(alpha + k + 1)))
print(f"table K = {K}, alpha = {alpha}: valid {table.valid}")
print(f"  face gamma(0, 0, k) = 2^-(alpha+k+1): max relative error {faces:.1e}")
print(f"  min entry {table.values.min():.1e}")
print("  sum_k gamma(n, m, k) w(k) over k <= K, with the geometric tail estimate:")
for n, m in ((0, 0), (2, 3), (6, 6), (8, 8)):
    total, tail = table.sum_identity(n, m)
    print(f"    n = {n}, m = {m}: 1 - sum = {1 - total:.2e}   tail estimate {tail:.2e}")

rng = np.random.default_rng(1)
print("\nsequence translation is a contraction: ||T_k a|| / ||a||")
for p in (1.0, 2.0, np.inf):
    a = SeqVec(rng.normal(size=12), alpha)
    spec = NormSpec(p, alpha, LAGUERRE_SEQ)
    ratios = [norm(translate_seq(a, j, table), spec) / norm(a, spec) for j in range(0, 20, 4)]
    print(f"  p = {p:g}: " + " ".join(f"{r:.4f}" for r in ratios))
