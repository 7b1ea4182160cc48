"""
Negatively associated pairs
===========================

With a negative polarity the effect turns on when the cause is off. Discovery
reports such pairs as associated but leaves them undirected by default.
"""

from bicausal import BscmModel, DiscoveryConfig, discover, sample

# B = (not A) or noise
model = BscmModel.from_edges(["A", "B"], [("A", "B", 0)], [0.4, 0.2])
ds = sample(model, 2000, seed=5)

res = discover(ds, DiscoveryConfig(seed=5))
dg = res.diagnostics[(0, 1)]
print("status:", dg.status, " sign:", dg.association_sign, " edges:", res.e_hat.named_edges())

# The literal rule flips the cause and compares conditionals. With A flipped, both
# causal orders leave the same cell empty, so the answer tracks column order.
for cols, names in (([0, 1], ["A", "B"]), ([1, 0], ["B", "A"])):
    sub = ds.select_columns(cols)
    flip = discover(sub, DiscoveryConfig(seed=5, negative_orientation="flip"))
    print(f"flip with columns {names}:", flip.e_hat.named_edges())
