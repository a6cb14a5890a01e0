"""Null models for significance testing of itemset and sequence mining.

Datasets are sampled uniformly from the set of datasets whose bipartite
graph has the same joint degree matrix (BJDM) as an observed one, with
Markov chains over swap operations that leave the BJDM unchanged.
"""
from .bipartite import (BiadjacencyState, BipartiteMultigraph, Bjdm, bjdm_of_dataset,
                        bjdm_of_matrix, bjdm_of_multigraph, caterpillars_direct,
                        caterpillars_from_bjdm, count_l3_paths_multigraph,
                        degree_histograms)
from .dataset_io import (DatasetFormatError, SequenceDataset, TransactionalDataset,
                         generate_synthetic, generate_synthetic_sequences,
                         parse_sequential, parse_transactional,
                         read_sequential, read_transactional, sequential_from_lists,
                         transactional_from_lists, write_sequential,
                         write_transactional)
from .multiplicity import (DuplicateGroups, apply_update, log_num_matrices,
                           num_matrices_exact, transition_ratio)
from .samplers import ALGORITHMS, SamplerConfig, run_chain, sample_many

__version__ = "0.1.0"
