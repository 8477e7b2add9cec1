"""Query-counted entrywise access to the training LP's data.

Solvers are written against the access model of a machine that can only
read the problem through per-entry oracles: one for the right-hand side
``b``, one for the objective diagonal ``C``, one for the constraint
diagonals ``A_i``, and a raw feature store lookup. Every read increments
a counter in a caller-supplied :class:`~sparsesvm.core.QueryLedger`, so
experiment reports can state exactly how many entries of each kind an
algorithm consumed.

Conventions:

* Oracle indices are 1-based (sample ``i`` in ``1..m``, column ``k`` in
  ``1..n``, feature ``j`` in ``1..p``); the rest of the library stays
  0-based. The 1-based frame only exists at this boundary.
* ``data_queries`` counts lookups of raw feature entries ``x_i^j``. A
  constraint query that lands in a feature block is composed from such a
  lookup, so it increments both ``a_queries`` and ``data_queries``; the
  label read rides along with the feature lookup.
* Bulk ``fetch_*`` methods are loops over the entrywise oracles in
  disguise and charge the ledger identically, so solvers can vectorize
  without distorting the counts.
* Returns are exact doubles by default. ``quantize_bits`` rounds every
  oracle return to that many fractional bits, for experiments probing
  sensitivity to finite-precision registers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .core import Dataset, SparseSvmConfig, validate_dataset

__all__ = ["OracleSet", "build_oracles"]


@dataclass(frozen=True)
class OracleSet:
    """Entrywise oracles for one training problem.

    Attributes:
        labels: Shape (m,) array of ±1 labels backing the constraint
            oracle.
        features: Shape (m, p) feature matrix backing the constraint and
            raw-store oracles.
        lam: L1 regularization weight reported by the objective oracle.
        kind: "soft" (columns = m slacks, then β⁺, then β⁻) or "hard"
            (columns = β⁺ then β⁻ only).
        quantize_bits: If not None, round every return to this many
            fractional bits.
    """

    labels: NDArray[np.float64]
    features: NDArray[np.float64]
    lam: float
    kind: str = "soft"
    quantize_bits: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("soft", "hard"):
            raise ValueError(f"unknown problem kind: {self.kind!r}")
        if self.quantize_bits is not None and self.quantize_bits < 1:
            raise ValueError("quantize_bits must be a positive integer")

    @property
    def m(self) -> int:
        return self.labels.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def num_slacks(self) -> int:
        return self.m if self.kind == "soft" else 0

    @property
    def n(self) -> int:
        """Number of LP variables: m + 2p soft, 2p hard."""
        return self.num_slacks + 2 * self.p

    # -- scalar oracles ------------------------------------------------

    def query_b(self, i: int, ledger) -> float:
        """Right-hand-side entry b_i = −1. Charges one b query."""
        self._check_row(i)
        ledger.add(b_queries=1)
        return self._emit(-1.0)

    @property
    def beta_weight(self) -> float:
        """Objective weight on β columns: λ soft, 1 hard (plain ‖β‖₁)."""
        return self.lam if self.kind == "soft" else 1.0

    def query_c(self, k: int, ledger) -> float:
        """Objective diagonal C[k,k]: 1/m on slacks, λ on β columns."""
        if not 1 <= k <= self.n:
            raise IndexError(f"column index {k} outside 1..{self.n}")
        ledger.add(c_queries=1)
        if k <= self.num_slacks:
            return self._emit(1.0 / self.m)
        return self._emit(self.beta_weight)

    def query_a(self, i: int, k: int, ledger) -> float:
        """Constraint diagonal A_i[k,k].

        −1 at the sample's own slack column, 0 at other slacks,
        ∓y_i·x_i^j on the β⁺/β⁻ feature blocks. Feature-block reads are
        composed from a raw feature lookup and charge ``data_queries``
        on top of ``a_queries``.
        """
        self._check_row(i)
        if not 1 <= k <= self.n:
            raise IndexError(f"column index {k} outside 1..{self.n}")
        ns = self.num_slacks
        if k <= ns:
            ledger.add(a_queries=1)
            return self._emit(-1.0 if k == i else 0.0)
        ledger.add(a_queries=1, data_queries=1)
        j = k - ns
        if j <= self.p:
            sign = -1.0
        else:
            sign = 1.0
            j -= self.p
        return self._emit(sign * self.labels[i - 1] * self.features[i - 1, j - 1])

    def qram_read(self, i: int, j: int, ledger) -> float:
        """Raw feature store lookup x_i^j. Charges one data query."""
        self._check_row(i)
        if not 1 <= j <= self.p:
            raise IndexError(f"feature index {j} outside 1..{self.p}")
        ledger.add(data_queries=1)
        return self._emit(self.features[i - 1, j - 1])

    # -- bulk fetches (entrywise loops, counted identically) -----------

    def fetch_b(self, ledger) -> NDArray[np.float64]:
        """All of b at once; charges m b-queries."""
        ledger.add(b_queries=self.m)
        return self._emit_array(np.full(self.m, -1.0))

    def fetch_c(self, ledger) -> NDArray[np.float64]:
        """The full objective diagonal; charges n c-queries."""
        ledger.add(c_queries=self.n)
        out = np.full(self.n, self.beta_weight)
        out[: self.num_slacks] = 1.0 / self.m
        return self._emit_array(out)

    def fetch_a_row(self, i: int, ledger) -> NDArray[np.float64]:
        """Row i of the constraint diagonals, as one length-n vector.

        Charges n a-queries and 2p data queries, exactly what the
        entrywise loop would cost.
        """
        self._check_row(i)
        ledger.add(a_queries=self.n, data_queries=2 * self.p)
        signed = self.labels[i - 1] * self.features[i - 1]
        row = np.zeros(self.n)
        ns = self.num_slacks
        if ns:
            row[i - 1] = -1.0
        row[ns : ns + self.p] = -signed
        row[ns + self.p :] = signed
        return self._emit_array(row)

    def fetch_a_full(self, ledger) -> NDArray[np.float64]:
        """The full m×n constraint matrix; m·n a-queries, 2mp data."""
        ledger.add(a_queries=self.m * self.n, data_queries=2 * self.m * self.p)
        signed = self.labels[:, None] * self.features
        full = np.zeros((self.m, self.n))
        ns = self.num_slacks
        if ns:
            full[np.arange(self.m), np.arange(self.m)] = -1.0
        full[:, ns : ns + self.p] = -signed
        full[:, ns + self.p :] = signed
        return self._emit_array(full)

    # -- internals -----------------------------------------------------

    def _check_row(self, i: int) -> None:
        if not 1 <= i <= self.m:
            raise IndexError(f"sample index {i} outside 1..{self.m}")

    def _emit(self, value: float) -> float:
        if self.quantize_bits is None:
            return float(value)
        scale = 2.0**self.quantize_bits
        return float(np.round(value * scale) / scale)

    def _emit_array(self, values: NDArray[np.float64]) -> NDArray[np.float64]:
        if self.quantize_bits is None:
            return values
        scale = 2.0**self.quantize_bits
        return np.round(values * scale) / scale


def build_oracles(
    dataset: Dataset,
    config: SparseSvmConfig,
    kind: str = "soft",
    quantize_bits: int | None = None,
) -> OracleSet:
    """Wrap a dataset and config in a counted oracle set."""
    validate_dataset(dataset)
    return OracleSet(
        labels=dataset.labels,
        features=dataset.features,
        lam=config.lam,
        kind=kind,
        quantize_bits=quantize_bits,
    )
