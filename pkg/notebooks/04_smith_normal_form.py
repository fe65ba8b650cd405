# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Smith normal form and its oracle
#
# ``smith_normal_form`` returns unimodular ``u``, ``v`` with ``u @ m @ v = d``.
# The diagonal is checked against gcds of minors, computed by brute force.

# %%
import numpy as np

from graphkt import IntMatrix, cokernel, determinantal_divisors, kernel_basis, smith_normal_form
from graphkt.intmat import determinant, determinantal_divisors_batch

m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
s = smith_normal_form(m)
print(s.d.pretty())
print("det u =", determinant(s.u), " det v =", determinant(s.v))
print("u m v == d:", s.u @ m @ s.v == s.d)

# %% [markdown]
# Determinantal divisors d_k are gcds of k x k minors; the Smith diagonal is
# d_k / d_(k-1).

# %%
divs = determinantal_divisors(m)
print("divisors:", divs)
print("quotients:", [d // p for d, p in zip(divs, (1,) + divs)])
print("coker:", cokernel(m))

# %% [markdown]
# ## Kernels
#
# The last columns of ``v`` span the kernel over Z.

# %%
n = IntMatrix.from_rows([[1, -1, 0], [2, -2, 0]])
for vec in kernel_basis(n):
    print(vec, "->", n.apply(vec))

# %% [markdown]
# ## Big entries
#
# Entries are Python integers; nothing overflows.

# %%
big = IntMatrix.from_rows([[10**20 + 1, 3], [7, 2**80]])
print(smith_normal_form(big).diagonal)

# %% [markdown]
# ## A vectorised oracle
#
# For sweeps over many small matrices the divisors can be computed on a
# numpy stack.

# %%
rng = np.random.default_rng(0)
stack = rng.integers(-3, 4, size=(5000, 3, 3))
divs = determinantal_divisors_batch(stack)
agree = all(
    smith_normal_form(IntMatrix.from_array(a)).diagonal
    == tuple(int(x) for x in np.r_[d[:1], [d[k] // d[k - 1] if d[k - 1] else 0 for k in (1, 2)]])
    for a, d in zip(stack, divs)
)
print("5000 random 3x3 matrices agree with the oracle:", agree)
