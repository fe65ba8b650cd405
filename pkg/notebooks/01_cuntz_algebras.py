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
# # Cuntz algebras, graded and ungraded
#
# The Cuntz algebra O_n is the graph algebra of one vertex with n loops.
# With the trivial grading its K-theory is coker/ker of the 1x1 matrix
# [1 - n]; giving k of the loops parity 1 replaces n by n - 2k.

# %%
from graphkt import classical_k_homology, classical_k_theory, cuntz_graph, graded_k_theory, make_problem

# %% [markdown]
# ## Trivial grading

# %%
for n in range(2, 7):
    g = cuntz_graph(n)
    kt, kh = classical_k_theory(g), classical_k_homology(g)
    print(f"O_{n}:  K0 = {kt.k0},  K1 = {kt.k1},  K^0 = {kh.k0},  K^1 = {kh.k1}")

# %% [markdown]
# ## Odd loops
#
# Each odd loop contributes -1 instead of +1 to the signed adjacency entry,
# so the table depends only on n - 2k.

# %%
print("n  k  matrix  K0^gr   K1^gr")
for n in range(2, 6):
    for k in range(n + 1):
        r = graded_k_theory(make_problem(cuntz_graph(n, odd=k), ["v"]))
        print(f"{n}  {k}  {r.matrix.tolist()[0]!s:7} {str(r.k0):7} {r.k1}")

# %% [markdown]
# O_3 with one odd loop is the first case where both groups are infinite:
# the matrix is [0].

# %%
r = graded_k_theory(make_problem(cuntz_graph(3, odd=1), ["v"]))
assert str(r.k0) == str(r.k1) == "Z"
r.matrix
