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
# # Relative sets: from the Toeplitz algebra to the graph algebra
#
# The relative set V picks the regular vertices at which the Cuntz-Krieger
# relation is imposed.  V empty gives the Toeplitz algebra, whose K-theory is
# free on the vertices; V = all regular vertices gives C*(E).  Walking through
# the subsets in between shows how each imposed relation changes the groups.

# %%
from itertools import combinations
from pathlib import Path

from graphkt import duality_report, graded_k_theory, make_problem, parse_document, regular_vertices

here = Path(__file__).resolve().parent if "__file__" in globals() else Path("notebooks").resolve()
graph, rel = parse_document((here / "graphs" / "toeplitz_triangle.json").read_text())
graph

# %%
regular = [v for v in graph.vertices if v in regular_vertices(graph)]
for size in range(len(regular) + 1):
    for subset in combinations(regular, size):
        p = make_problem(graph, subset)
        r = graded_k_theory(p)
        print(f"V = {set(subset) or '{}'}:  K0^gr = {r.k0},  K1^gr = {r.k1}")

# %% [markdown]
# ## The matrices behind one row
#
# ``signed_adjacency`` has rows V and columns all vertices; the K-theory
# matrix is ``inclusion - signed_adjacency^T``.

# %%
p = make_problem(graph, "all_regular")
print(p.signed_adjacency.pretty())
print()
print(graded_k_theory(p).matrix.pretty())

# %% [markdown]
# ## K-homology and the duality cross-check
#
# K-homology uses the transpose, so its odd group has the same torsion as
# K0^gr and the free ranks swap partners.

# %%
rep = duality_report(p)
for name, group in {**rep.k_theory.groups, **rep.k_homology.groups}.items():
    print(f"{name} = {group}")
print("duality:", "pass" if rep.passed else rep.failures)
