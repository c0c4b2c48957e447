#pragma once

#include "qecool/noise.hpp"
#include "qecool/qcore.hpp"

#include <vector>

namespace qecool {

struct PPAConfig {
  int n_register;
  Polarization bath;
  int iterations;
  int exchange_target = -1;  // -1 selects the last qubit
  GateErrorRate c{0.0};
  /// Run exchange before compression within each iteration (non-default).
  bool exchange_first = false;

  void validate() const;  // throws on violation
};

struct PPATrace {
  /// Diagonal probability vectors, one initial plus one per elementary
  /// operation (2 * iterations + 1 in total).
  std::vector<RealVector> snapshots;
  /// Sort permutation per compression: permutations[k][i] is the basis index
  /// whose population moved to position i.
  std::vector<std::vector<std::size_t>> permutations;
};

struct CompressionResult {
  DensityMatrix state;
  std::vector<std::size_t> permutation;
};

/// Sorts the diagonal non-increasing via the basis-permutation unitary of a
/// stable sort (ties keep index order). Input must be diagonal.
CompressionResult compression(const DensityMatrix& rho);

/// Replaces `target` with a fresh bath qubit: partial trace over the target,
/// tensor of diag((1+eps)/2, (1-eps)/2) back in its position.
DensityMatrix exchange(const DensityMatrix& rho, int target, Polarization bath);

/// Compression-then-exchange iterated on `targets` of a larger register; the
/// compression permutation is chosen from the reduced diagonal on `targets`
/// and the exchange acts on the last target. With c > 0 each compression is
/// followed by the per-qubit depolarizing wrapper on `targets`. Snapshots,
/// when requested, are the reduced diagonals.
DensityMatrix ppa_cool(const DensityMatrix& rho, std::span<const int> targets,
                       Polarization bath, int iterations, GateErrorRate c,
                       bool exchange_first = false, PPATrace* trace = nullptr);

PPATrace ppa_run(const PPAConfig& config, const DensityMatrix& initial);

struct RefreshMetrics {
  double rho00_pair;    // P(|00>) on the two most polarized qubits
  double message_pop;   // P(|0>) on the most polarized remaining qubit
  std::vector<double> per_qubit_p0;
  int ancilla_a;        // most polarized qubit
  int ancilla_b;        // second most polarized
  int message_qubit;    // most polarized of the rest
};

/// Requires a diagonal state on at least 3 qubits. Ties in the polarization
/// ranking break toward the lower qubit index.
RefreshMetrics refresh_metrics(const DensityMatrix& rho);

}  // namespace qecool
