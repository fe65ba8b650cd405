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
# # Adding tails at sources
#
# A vertex that receives no edges can be made regular by feeding it a path
# w_L -> ... -> w_1 -> w.  Including the newly regular vertices in the
# relative set leaves all four graded groups unchanged: each tail step adds
# one row and one column that cancel by a unimodular change of basis.

# %%
import random

from graphkt import Edge, Graph, add_tail, cuntz_graph, graded_k_theory, make_problem
from graphkt.graph import random_graph, random_relative_set, regular_vertices
from graphkt.tails import TailSweepConfig, sweep

g = Graph(["v", "w"], cuntz_graph(2).edges)
result = sweep(g, ["v"], TailSweepConfig(("w",), max_length=4))
rep = result.points[0].report
print("baseline:", [str(x) for x in rep.baseline])
for length, groups in rep.by_length:
    print(f"L={length}:", [str(x) for x in groups])

# %% [markdown]
# ## What the tail does to the matrix

# %%
tailed = add_tail(g, "w", 2)
p = make_problem(tailed, ["v", "w", "w_1"])
print(graded_k_theory(p).matrix.pretty())

# %% [markdown]
# ## Random graphs
#
# A quick sweep over seeded random graphs with at least one source.

# %%
rng = random.Random(11)
checked = 0
while checked < 10:
    h = random_graph(rng, 5, 9, min_vertices=2)
    sources = [v for v in h.vertices if v not in regular_vertices(h)]
    if not sources:
        continue
    res = sweep(h, random_relative_set(rng, h), TailSweepConfig(tuple(sources), 3))
    print(len(h.vertices), "vertices,", len(h.edges), "edges, sources", sources, "->",
          "constant" if res.passed else "CHANGED")
    checked += 1

# %% [markdown]
# Attaching at a vertex that already receives edges is refused; the sweep
# reports the error for that point and still evaluates the others.

# %%
res = sweep(g, ["v"], TailSweepConfig(("v", "w"), 2))
for point in res:
    print(point.at, "->", point.error or "ok")
