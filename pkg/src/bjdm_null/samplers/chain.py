"""Metropolis-Hastings engine, chain runner and parallel sampling."""
from __future__ import annotations

import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from ..bipartite import bjdm_of_matrix, bjdm_of_multigraph
from ..dataset_io import SequenceDataset
from ..multiplicity import apply_update, ratio_terms
from .base import SELF_LOOP, ChainState, Proposal, chain_rng
from .sequential import propose_alice_s, propose_gmmt_s
from .transactional import (propose_alice_a, propose_alice_b, propose_gmmt,
                            propose_selfloop_naive)

__all__ = [
    "ALGORITHMS",
    "SamplerConfig",
    "advance",
    "chain_dataset",
    "InvariantViolation",
    "default_num_swaps",
    "mh_step",
    "make_chain",
    "resolve_parallelism",
    "run_chain",
    "sample_many",
]

# id -> (proposer, dataset kind, corrects for Q, default multiple of w)
ALGORITHMS = {
    "alice-a": (propose_alice_a, "transactional", True, 4),
    "alice-b": (propose_alice_b, "transactional", True, 2),
    "alice-s": (propose_alice_s, "sequential", True, 4),
    "gmmt": (propose_gmmt, "transactional", False, 4),
    "gmmt-s": (propose_gmmt_s, "sequential", False, 4),
    "selfloop": (propose_selfloop_naive, "transactional", True, 4),
}


class InvariantViolation(AssertionError):
    """A chain step broke a degree, transpose or BJDM invariant."""


@dataclass
class SamplerConfig:
    """Chain parameters.

    Attributes
    ----------
    algorithm : str
        One of :data:`ALGORITHMS`.
    num_swaps : int or None
        Number of proposer calls per chain; ``None`` uses the algorithm
        default (a multiple of the total length ``w``).
    seed : int
    log_weight : callable or None
        Optional ``DuplicateGroups -> float`` giving the log of an
        unnormalized dataset weight; ``None`` targets the uniform
        distribution over datasets.
    check_invariants : bool
        Verify invariants after every accepted move (slow).
    """

    algorithm: str = "alice-a"
    num_swaps: Optional[int] = None
    seed: int = 0
    log_weight: Optional[Callable] = None
    check_invariants: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; "
                             f"expected one of {', '.join(ALGORITHMS)}")
        if self.num_swaps is not None and self.num_swaps < 0:
            raise ValueError("num_swaps must be >= 0")

    def swaps_for(self, dataset) -> int:
        if self.num_swaps is not None:
            return int(self.num_swaps)
        return default_num_swaps(self.algorithm, dataset)


def default_num_swaps(algorithm: str, dataset) -> int:
    return ALGORITHMS[algorithm][3] * dataset.total_length


def _check_kind(algorithm, dataset):
    kind = ALGORITHMS[algorithm][1]
    is_seq = isinstance(dataset, SequenceDataset)
    if is_seq != (kind == "sequential"):
        raise TypeError(f"{algorithm} expects a {kind} dataset")


def make_chain(dataset, config: SamplerConfig, chain_index: int = 0) -> ChainState:
    _check_kind(config.algorithm, dataset)
    rng = chain_rng(config.seed, chain_index)
    chain = ChainState.from_dataset(dataset, rng, config.check_invariants)
    # the samplers that correct for Q are exactly the BJDM preserving ones
    chain.preserves_bjdm = ALGORITHMS[config.algorithm][2]
    return chain


def _check_local(chain: ChainState, proposal: Proposal) -> None:
    st = chain.state
    delta: Counter = Counter()
    if chain.is_matrix:
        for r, _, new, drop, add in proposal.edit:
            if st.rows[r] != new or len(new) != st.row_sums[r]:
                raise InvariantViolation(f"row {r} changed length")
            deg_r = len(new)
            for c in drop:
                if r in st.cols[c]:
                    raise InvariantViolation(f"stale column entry ({r},{c})")
                delta[deg_r, len(st.cols[c])] -= 1
            for c in add:
                if r not in st.cols[c]:
                    raise InvariantViolation(f"missing column entry ({r},{c})")
                delta[deg_r, len(st.cols[c])] += 1
            for c in (*drop, *add):
                if len(st.cols[c]) != st.col_sums[c]:
                    raise InvariantViolation(f"column {c} changed support")
    else:
        for p, old, new in proposal.edit:
            if st.port_item[p] != new or p not in st.incidence[new]:
                raise InvariantViolation(f"port {p} not updated")
            if p in st.incidence[old]:
                raise InvariantViolation(f"stale incidence for port {p}")
            deg_v = int(st.left_degrees[st.port_owner[p]])
            delta[deg_v, len(st.incidence[old])] -= 1
            delta[deg_v, len(st.incidence[new])] += 1
            for w in (old, new):
                if len(st.incidence[w]) != st.right_degrees[w]:
                    raise InvariantViolation(f"itemset {w} changed degree")
    if chain.preserves_bjdm and any(delta.values()):
        raise InvariantViolation("BJDM changed")


def mh_step(chain: ChainState, proposal: Proposal, correct_multiplicity=True,
            log_weight=None) -> bool:
    """Accept or reject ``proposal`` and apply it on acceptance.

    The acceptance probability is ``min(1, R * h * w(D') / w(D))`` with
    ``R = Q(D) / Q(D')`` (skipped when ``correct_multiplicity`` is false),
    ``h`` the proposal's Hastings factor and ``w`` the optional weight.
    Self-loops are accepted trivially.  Every call counts as one step.
    """
    chain.step_count += 1
    if proposal.kind == "self-loop":
        return True
    groups = chain.groups
    if correct_multiplicity:
        num, den = ratio_terms(groups.counts, proposal.removed, proposal.added)
    else:
        num = den = 1
    if proposal.hastings is not None:
        num *= proposal.hastings[0]
        den *= proposal.hastings[1]
    if log_weight is not None:
        scratch = groups.copy()
        apply_update(scratch, proposal.removed, proposal.added)
        lw = log_weight(scratch) - log_weight(groups)
        ratio = num / den * math.exp(lw)
        if ratio < 1.0 and chain.rng.random() >= ratio:
            return False
    elif num < den and chain.rng.random() * den >= num:
        return False
    chain.apply(proposal)
    apply_update(groups, proposal.removed, proposal.added)
    chain.accepted += 1
    if chain.check_invariants:
        _check_local(chain, proposal)
    return True


def advance(chain: ChainState, config: SamplerConfig, steps: int) -> None:
    """Run ``steps`` proposer + acceptance iterations on ``chain``."""
    propose, _, correct, _ = ALGORITHMS[config.algorithm]
    lw = config.log_weight
    if lw is None and not chain.check_invariants:
        # inlined copy of mh_step for the common case
        counts = chain.groups.counts
        groups = chain.groups
        rng = chain.rng
        apply = chain.apply
        for _ in range(steps):
            p = propose(chain)
            if p is SELF_LOOP:
                continue
            if correct:
                num, den = ratio_terms(counts, p.removed, p.added)
            else:
                num = den = 1
            h = p.hastings
            if h is not None:
                num *= h[0]
                den *= h[1]
            if num < den and rng.random() * den >= num:
                continue
            apply(p)
            apply_update(groups, p.removed, p.added)
            chain.accepted += 1
        chain.step_count += steps
        return
    for _ in range(steps):
        mh_step(chain, propose(chain), correct, lw)


def _final_check(chain: ChainState, initial_bjdm, preserves_bjdm: bool) -> None:
    st = chain.state
    try:
        st.check_consistency()
    except AssertionError as exc:
        raise InvariantViolation(str(exc)) from None
    if preserves_bjdm:
        now = bjdm_of_matrix(st) if chain.is_matrix else bjdm_of_multigraph(st)
        if now != initial_bjdm:
            raise InvariantViolation("BJDM differs from the observed dataset")


def chain_dataset(chain: ChainState, observed):
    """Dataset currently represented by ``chain`` (labels taken from ``observed``)."""
    if chain.is_matrix:
        return chain.state.to_dataset(observed.item_labels)
    return chain.state.to_dataset(observed)


def run_chain(observed, config: SamplerConfig, chain_index: int = 0):
    """Run one chain from ``observed`` and return the final dataset.

    The chain's random stream is derived from ``(config.seed, chain_index)``.
    """
    chain = make_chain(observed, config, chain_index)
    steps = config.swaps_for(observed)
    initial = None
    if config.check_invariants:
        st = chain.state
        initial = bjdm_of_matrix(st) if chain.is_matrix else bjdm_of_multigraph(st)
    advance(chain, config, steps)
    if config.check_invariants:
        _final_check(chain, initial, chain.preserves_bjdm)
    return chain_dataset(chain, observed)


_WORKER: dict = {}


def _timed_run(observed, config, index):
    t0 = time.perf_counter()
    out = run_chain(observed, config, index)
    return out, time.perf_counter() - t0


def _init_worker(observed, config):
    _WORKER["observed"] = observed
    _WORKER["config"] = config


def _worker_run(index):
    return _timed_run(_WORKER["observed"], _WORKER["config"], index)


def resolve_parallelism(parallelism=None) -> int:
    """Explicit value, else ``BJDM_SAMPLER_THREADS``, else the CPU count."""
    if parallelism is None:
        env = os.environ.get("BJDM_SAMPLER_THREADS")
        parallelism = int(env) if env else (os.cpu_count() or 1)
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    return int(parallelism)


def sample_many(observed, config: SamplerConfig, num_samples: int,
                parallelism=None, with_times: bool = False) -> list:
    """Draw ``num_samples`` datasets from independent chains.

    Chain ``i`` uses the stream ``(config.seed, i)``, so the output does not
    depend on ``parallelism``.  Chains run in worker processes when
    ``parallelism > 1``; ``log_weight`` must then be picklable.  With
    ``with_times`` the result holds ``(dataset, seconds)`` pairs.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    _check_kind(config.algorithm, observed)
    workers = min(resolve_parallelism(parallelism), num_samples)
    if workers == 1:
        out = [_timed_run(observed, config, i) for i in range(num_samples)]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(observed, config)) as pool:
            out = list(pool.map(_worker_run, range(num_samples)))
    return out if with_times else [d for d, _ in out]
