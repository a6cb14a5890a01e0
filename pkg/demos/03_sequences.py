# coding: utf-8

# # Sequence datasets

# For sequences the bipartite graph becomes a multigraph: an itemset that
# appears twice in a sequence gives two parallel edges. Alice-S swaps
# itemsets between positions of different sequences while keeping the
# multigraph BJDM fixed.

from bjdm_null import (SamplerConfig, bjdm_of_dataset, generate_synthetic_sequences,
                       sample_many, sequential_from_lists)
from bjdm_null.mining import mine

toy = sequential_from_lists([[["a"], ["b"], ["a", "c"]], [["b"], ["a", "c"]],
                             [["c"], ["a"], ["b"]]])
print(toy.sequences)
print(bjdm_of_dataset(toy).entries)


# A larger synthetic set, and the number of frequent sequential patterns
# in the observed data versus a few null samples.

seqs = generate_synthetic_sequences(150, 40, 8, seed=2)
theta = 0.2
print("observed patterns:", len(mine(seqs, theta)))
for s in sample_many(seqs, SamplerConfig("alice-s", seed=1), 5):
    assert bjdm_of_dataset(s) == bjdm_of_dataset(seqs)
    print("sampled patterns:", len(mine(s, theta)))
