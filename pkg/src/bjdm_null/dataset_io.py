"""Reading, writing and synthesizing transactional and sequence datasets.

Transactional files follow the FIMI convention (one transaction per line,
whitespace separated tokens).  Sequence files follow the SPMF convention,
where ``-1`` closes an itemset and ``-2`` closes a sequence.

Items and itemsets are renumbered densely in order of first appearance, so
writing a parsed dataset and parsing it again gives back the same object.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DatasetFormatError",
    "TransactionalDataset",
    "ItemsetDictionary",
    "SequenceDataset",
    "parse_transactional",
    "parse_sequential",
    "write_transactional",
    "write_sequential",
    "read_transactional",
    "read_sequential",
    "write_file",
    "generate_synthetic",
    "generate_synthetic_sequences",
    "transactional_from_lists",
    "sequential_from_lists",
]

ITEMSET_END = "-1"
SEQUENCE_END = "-2"


class DatasetFormatError(ValueError):
    """Raised when a dataset file cannot be parsed."""


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    if isinstance(source, io.TextIOBase) or hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    raise TypeError(f"cannot read dataset text from {type(source).__name__}")


@dataclass(eq=True)
class TransactionalDataset:
    """A bag of transactions over a dense item alphabet.

    Attributes
    ----------
    transactions : list of tuple of int
        Each transaction is a sorted, duplicate-free tuple of item ids.
    item_labels : list of str
        ``item_labels[i]`` is the original token of item ``i``.
    """

    transactions: list
    item_labels: list = field(default_factory=list)

    def __post_init__(self):
        self.transactions = [tuple(t) for t in self.transactions]
        n_items = len(self.item_labels)
        for k, t in enumerate(self.transactions):
            if not t:
                raise ValueError(f"transaction {k} is empty")
            if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
                raise ValueError(f"transaction {k} is not sorted/duplicate free")
            if t[0] < 0 or t[-1] >= n_items:
                raise ValueError(f"transaction {k} uses an unknown item id")

    def __len__(self):
        return len(self.transactions)

    @property
    def num_items(self) -> int:
        return len(self.item_labels)

    @property
    def total_length(self) -> int:
        """Sum of the transaction lengths (the number of ones in the matrix)."""
        return sum(len(t) for t in self.transactions)

    def lengths(self) -> np.ndarray:
        return np.fromiter((len(t) for t in self.transactions), dtype=np.int64,
                           count=len(self.transactions))

    def item_supports(self) -> np.ndarray:
        sup = np.zeros(self.num_items, dtype=np.int64)
        for t in self.transactions:
            sup[list(t)] += 1
        return sup

    def canonical_key(self) -> tuple:
        """Row-order free identity of the dataset (the bag of transactions)."""
        return tuple(sorted(self.transactions))

    def labelled(self) -> list:
        """Transactions as frozensets of original labels."""
        labels = self.item_labels
        return [frozenset(labels[i] for i in t) for t in self.transactions]


@dataclass(eq=True)
class ItemsetDictionary:
    """Bijection between itemset contents (sorted item tuples) and dense ids."""

    itemsets: list = field(default_factory=list)

    def __post_init__(self):
        self.itemsets = [tuple(s) for s in self.itemsets]
        self._index = {s: k for k, s in enumerate(self.itemsets)}
        if len(self._index) != len(self.itemsets):
            raise ValueError("duplicate itemset in dictionary")

    def __len__(self):
        return len(self.itemsets)

    def __getitem__(self, itemset_id: int) -> tuple:
        return self.itemsets[itemset_id]

    def __contains__(self, content) -> bool:
        return tuple(content) in self._index

    def id_of(self, content) -> int:
        return self._index[tuple(content)]

    def register(self, content) -> int:
        """Return the id of ``content``, adding it if unseen."""
        content = tuple(content)
        k = self._index.get(content)
        if k is None:
            k = len(self.itemsets)
            self.itemsets.append(content)
            self._index[content] = k
        return k


@dataclass(eq=True)
class SequenceDataset:
    """A bag of sequences of itemsets.

    ``sequences[v]`` is the ordered tuple of itemset ids of sequence ``v``;
    position ``k`` in it is the port ``k`` of the left vertex ``v`` in the
    multigraph encoding.
    """

    sequences: list
    dictionary: ItemsetDictionary
    item_labels: list = field(default_factory=list)

    def __post_init__(self):
        self.sequences = [tuple(s) for s in self.sequences]
        n = len(self.dictionary)
        for k, s in enumerate(self.sequences):
            if not s:
                raise ValueError(f"sequence {k} is empty")
            if min(s) < 0 or max(s) >= n:
                raise ValueError(f"sequence {k} references an unknown itemset")

    def __len__(self):
        return len(self.sequences)

    @property
    def total_length(self) -> int:
        """Number of edges of the multigraph (sum of the sequence lengths)."""
        return sum(len(s) for s in self.sequences)

    def canonical_key(self) -> tuple:
        return tuple(sorted(self.sequences))

    def itemset_sequences(self) -> list:
        """Sequences with itemset ids replaced by their item tuples."""
        content = self.dictionary.itemsets
        return [tuple(content[w] for w in s) for s in self.sequences]

    def supports(self) -> dict:
        """Map itemset id to the number of sequences it participates in."""
        out: dict = {}
        for s in self.sequences:
            for w in set(s):
                out[w] = out.get(w, 0) + 1
        return out

    def multi_supports(self) -> dict:
        """Map itemset id to its total number of participations."""
        out: dict = {}
        for s in self.sequences:
            for w in s:
                out[w] = out.get(w, 0) + 1
        return out


class _Labeller:
    def __init__(self):
        self.labels: list = []
        self.index: dict = {}

    def __call__(self, token: str) -> int:
        k = self.index.get(token)
        if k is None:
            k = len(self.labels)
            self.labels.append(token)
            self.index[token] = k
        return k


def parse_transactional(source) -> TransactionalDataset:
    """Parse a FIMI-style transactional dataset.

    ``source`` may be a string, bytes, or an open text/binary stream.  Tokens
    repeated within a line are collapsed; blank lines are rejected.
    """
    text = _read_text(source)
    lines = text.splitlines()
    if not lines:
        raise DatasetFormatError("empty dataset")
    label = _Labeller()
    transactions = []
    for lineno, line in enumerate(lines, start=1):
        tokens = line.split()
        if not tokens:
            raise DatasetFormatError(f"line {lineno}: empty transaction")
        transactions.append(tuple(sorted({label(tok) for tok in tokens})))
    return TransactionalDataset(transactions, label.labels)


def parse_sequential(source) -> SequenceDataset:
    """Parse an SPMF-style sequence dataset.

    Lines starting with ``#``, ``%`` or ``@`` are treated as metadata and
    skipped.  Sequences may span lines; only the ``-2`` marker ends them.
    """
    text = _read_text(source)
    label = _Labeller()
    dictionary = ItemsetDictionary()
    sequences = []
    current_seq: list = []
    current_set: dict = {}
    seen_any = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#%@":
            continue
        for pos, tok in enumerate(stripped.split(), start=1):
            seen_any = True
            if tok == ITEMSET_END:
                if not current_set:
                    raise DatasetFormatError(
                        f"line {lineno}, token {pos}: itemset with zero items")
                current_seq.append(dictionary.register(sorted(current_set)))
                current_set = {}
            elif tok == SEQUENCE_END:
                if current_set:
                    raise DatasetFormatError(
                        f"line {lineno}, token {pos}: itemset not closed by -1")
                if not current_seq:
                    raise DatasetFormatError(
                        f"line {lineno}, token {pos}: sequence with no itemset")
                sequences.append(tuple(current_seq))
                current_seq = []
            else:
                current_set[label(tok)] = None
    if not seen_any:
        raise DatasetFormatError("empty dataset")
    if current_seq or current_set:
        raise DatasetFormatError("last sequence is not closed by -2")
    return SequenceDataset(sequences, dictionary, label.labels)


def write_transactional(dataset: TransactionalDataset) -> str:
    """Render ``dataset`` as FIMI text with the original labels restored."""
    labels = dataset.item_labels
    return "".join(" ".join(labels[i] for i in t) + "\n"
                   for t in dataset.transactions)


def write_sequential(dataset: SequenceDataset) -> str:
    """Render ``dataset`` as SPMF text, one sequence per line."""
    labels = dataset.item_labels
    content = dataset.dictionary.itemsets
    lines = []
    for s in dataset.sequences:
        parts = []
        for w in s:
            parts.append(" ".join(labels[i] for i in content[w]))
            parts.append(ITEMSET_END)
        parts.append(SEQUENCE_END)
        lines.append(" ".join(parts) + "\n")
    return "".join(lines)


def read_transactional(path) -> TransactionalDataset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_transactional(fh)


def read_sequential(path) -> SequenceDataset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sequential(fh)


def write_file(path, text: str) -> None:
    """Write ``text`` as UTF-8 with LF line endings."""
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def transactional_from_lists(rows: Iterable[Iterable]) -> TransactionalDataset:
    """Build a canonical dataset from rows of printable items.

    Equivalent to writing the rows as FIMI text and parsing it back, so item
    ids follow first appearance.
    """
    text = "".join(" ".join(str(x) for x in row) + "\n" for row in rows)
    return parse_transactional(text)


def sequential_from_lists(sequences: Iterable[Sequence[Iterable]]) -> SequenceDataset:
    """Build a sequence dataset from nested lists, e.g. ``[[[1], [1, 2]]]``."""
    parts = []
    for seq in sequences:
        tokens = []
        for itemset in seq:
            tokens.extend(str(x) for x in itemset)
            tokens.append(ITEMSET_END)
        tokens.append(SEQUENCE_END)
        parts.append(" ".join(tokens))
    return parse_sequential("\n".join(parts) + "\n")


def generate_synthetic(num_transactions: int, num_items: int, avg_length: float,
                       seed: int, zipf_exponent: float = 1.0) -> TransactionalDataset:
    """Draw a synthetic transactional dataset.

    Lengths are ``1 + Poisson(avg_length - 1)`` clipped to ``num_items``;
    items are drawn without replacement with Zipf-like popularity
    ``(rank + 1) ** -zipf_exponent``.  Items that never occur are dropped and
    the rest renumbered by first appearance.  This is a stand-in for the IBM
    Quest generator, not a replica of it.
    """
    if min(num_transactions, num_items) < 1 or avg_length < 1:
        raise ValueError("num_transactions, num_items and avg_length must be >= 1")
    if avg_length > num_items:
        raise ValueError("avg_length cannot exceed num_items")
    rng = np.random.default_rng(seed)
    lengths = 1 + rng.poisson(avg_length - 1, size=num_transactions)
    lengths = np.minimum(lengths, num_items)
    weights = (np.arange(num_items) + 1.0) ** -zipf_exponent
    weights /= weights.sum()
    rows = []
    for length in lengths:
        if length == num_items:
            picked = np.arange(num_items)
        else:
            picked = rng.choice(num_items, size=int(length), replace=False, p=weights)
        rows.append(sorted(int(i) for i in picked))
    return transactional_from_lists(rows)


def generate_synthetic_sequences(num_sequences: int, num_items: int, avg_length: float,
                                 seed: int, max_itemset_size: int = 2,
                                 zipf_exponent: float = 1.0) -> SequenceDataset:
    """Draw a synthetic sequence dataset.

    Sequence lengths (in itemsets) are ``1 + Poisson(avg_length - 1)``;
    itemset sizes are uniform in ``1..max_itemset_size``; items follow the
    same Zipf-like popularity as :func:`generate_synthetic`.
    """
    if min(num_sequences, num_items, max_itemset_size) < 1 or avg_length < 1:
        raise ValueError("sizes must be >= 1")
    rng = np.random.default_rng(seed)
    weights = (np.arange(num_items) + 1.0) ** -zipf_exponent
    weights /= weights.sum()
    top = min(max_itemset_size, num_items)
    seqs = []
    for length in 1 + rng.poisson(avg_length - 1, size=num_sequences):
        sizes = rng.integers(1, top + 1, size=int(length))
        seqs.append([sorted(int(i) for i in rng.choice(num_items, size=int(k),
                                                         replace=False, p=weights))
                     for k in sizes])
    return sequential_from_lists(seqs)
