# coding: utf-8

# # Datasets as bipartite graphs

# A transactional dataset is a bipartite graph: transactions on one side,
# items on the other, one edge per (transaction, item) membership. This
# walkthrough builds the bipartite joint degree matrix (BJDM) of a small
# dataset and shows what it pins down.

import numpy as np

from bjdm_null import (BiadjacencyState, bjdm_of_dataset, caterpillars_direct,
                       degree_histograms, transactional_from_lists)

# Five baskets from a grocery store.

baskets = [["bread", "milk"], ["bread", "diaper", "beer", "eggs"],
           ["milk", "diaper", "beer", "cola"], ["bread", "milk", "diaper", "beer"],
           ["bread", "milk", "diaper", "cola"]]
data = transactional_from_lists(baskets)
print(len(data), "transactions over", len(data.item_labels), "items")


# Entry (i, j) of the BJDM counts edges joining a transaction of length i
# to an item that occurs in j transactions.

J = bjdm_of_dataset(data)
print(J.entries)


# Both degree sequences can be read off the matrix.

left, right = degree_histograms(J)
print("transaction lengths:", dict(left))
print("item supports:", dict(right))


# The number of length-3 paths ("caterpillars") is a function of the BJDM
# alone, so every dataset with this BJDM has the same count.

state = BiadjacencyState.from_dataset(data)
print("caterpillars, counted directly:", caterpillars_direct(state))
A = J.entries
i = np.arange(1, A.shape[0] + 1)[:, None]
j = np.arange(1, A.shape[1] + 1)[None, :]
print("caterpillars, from the BJDM:", int(((i - 1) * (j - 1) * A).sum()))
