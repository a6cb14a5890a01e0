"""MCMC samplers over datasets sharing a bipartite joint degree matrix."""
from .base import SELF_LOOP, ChainState, ClassPicker, Proposal, chain_rng
from .chain import (ALGORITHMS, advance, chain_dataset, InvariantViolation, SamplerConfig, default_num_swaps,
                    make_chain, mh_step, resolve_parallelism, run_chain, sample_many)
from .sequential import heads_pair_count, propose_alice_s, propose_gmmt_s
from .transactional import (propose_alice_a, propose_alice_b, propose_gmmt,
                            propose_selfloop_naive)

__all__ = [
    "ALGORITHMS",
    "advance",
    "chain_dataset",
    "ChainState",
    "ClassPicker",
    "InvariantViolation",
    "Proposal",
    "SELF_LOOP",
    "SamplerConfig",
    "chain_rng",
    "default_num_swaps",
    "heads_pair_count",
    "make_chain",
    "mh_step",
    "propose_alice_a",
    "propose_alice_b",
    "propose_alice_s",
    "propose_gmmt",
    "propose_gmmt_s",
    "propose_selfloop_naive",
    "resolve_parallelism",
    "run_chain",
    "sample_many",
]
