"""
Chains, forks and colliders
===========================

Three variables wired three ways. Only direct links should survive, and the
conditional check decides which dependent pairs are direct.
"""

from bicausal import BscmModel, DiscoveryConfig, discover, sample

shapes = {
    "chain  X -> Y -> Z": [("X", "Y"), ("Y", "Z")],
    "fork   X <- Y -> Z": [("Y", "X"), ("Y", "Z")],
    "collider X -> Y <- Z": [("X", "Y"), ("Z", "Y")],
}

for title, edges in shapes.items():
    model = BscmModel.from_edges(["X", "Y", "Z"], edges, 0.2)
    result = discover(sample(model, 2000, seed=11), DiscoveryConfig(seed=11))
    print(title)
    print("   inferred:", result.e_hat.named_edges())
    for (i, j), dg in result.diagnostics.items():
        print(f"   {result.node_names[i]}-{result.node_names[j]}: {dg.status}"
              + (f" ({dg.note})" if dg.note else ""))

# In the chain and the fork, X and Z are dependent yet independent given Y, so the
# pair is discarded. The fork's two edges both leave Y, and the chain keeps its order.
# In the collider X and Z never become dependent, so they are never tested further.
