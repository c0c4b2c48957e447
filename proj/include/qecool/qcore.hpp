#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qecool {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Structural tolerance (CPTP, unitality, positive semidefiniteness).
inline constexpr double kStructuralTol = 1e-10;
/// Equality tolerance (Hermiticity, trace, channel equality, fidelity routes).
inline constexpr double kEqualityTol = 1e-12;

/// Qubit 0 is the most significant bit of the computational-basis index.
inline int bit_of(std::size_t index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
}

std::size_t dim_for(int n_qubits);
int qubits_for(Eigen::Index dim);  // throws unless dim is a power of two

class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, Matrix entries);

  static DensityMatrix basis_state(int n_qubits, std::size_t index);
  static DensityMatrix pure(const Vector& amplitudes);
  /// Diagonal state from a probability vector (length must be a power of two).
  static DensityMatrix diagonal(const RealVector& probabilities);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }

  double trace_deviation() const;       // |tr(rho) - 1|
  double hermiticity_deviation() const; // max |rho - rho^dagger|
  double min_eigenvalue() const;
  /// Throws std::invalid_argument naming the violated invariant.
  void check_valid() const;
  bool is_valid() const;

  bool is_diagonal(double tol = kStructuralTol) const;
  RealVector diagonal_probabilities() const;

  DensityMatrix tensor(const DensityMatrix& other) const;

 private:
  int n_qubits_;
  Matrix entries_;
};

class UnitaryGate {
 public:
  UnitaryGate(int n_qubits, Matrix entries);  // checks U^dagger U = 1 within 1e-12

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  /// Circuit-order composition: `a.then(b)` applies a first, then b.
  UnitaryGate then(const UnitaryGate& later) const;
  UnitaryGate tensor(const UnitaryGate& other) const;
  UnitaryGate adjoint() const;

 private:
  int n_qubits_;
  Matrix entries_;
};

/// Named gates: H, X, Y, Z (1 qubit), CNOT, SWAP (2), TOFFOLI (3).
/// CNOT: control qubit 0, target qubit 1. TOFFOLI: controls 0 and 1, target 2.
/// A non-negative n_targets is checked against the gate's arity.
UnitaryGate standard_gate(std::string_view name, int n_targets = -1);
/// Unitary permuting computational basis states: |i> -> |sigma[i]>.
UnitaryGate permutation_gate(std::span<const std::size_t> sigma);
/// Basis permutation induced by relabelling qubits: qubit q -> new_position[q].
UnitaryGate qubit_permutation_gate(std::span<const int> new_position);

class KrausChannel {
 public:
  /// Operators must share a common shape; both dimensions powers of two.
  explicit KrausChannel(std::vector<Matrix> operators);

  static KrausChannel identity(int n_qubits);
  static KrausChannel from_unitary(const UnitaryGate& u);
  /// rho -> rho (x) diag(probabilities): one operator sqrt(p_i)(1 (x) |i>)
  /// per appended basis state i, zero-weight operators kept.
  static KrausChannel append_ancilla(int n_system, const RealVector& probabilities);
  /// Partial trace over the qubits not listed in `keep` as a channel
  /// (operators 1_keep (x) <t|); kept qubits stay in register order.
  static KrausChannel discard_qubits(int n_total, std::span<const int> keep);

  const std::vector<Matrix>& operators() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  Eigen::Index d_in() const { return d_in_; }
  Eigen::Index d_out() const { return d_out_; }
  int n_qubits_in() const;
  int n_qubits_out() const;
  bool is_square() const { return d_in_ == d_out_; }

 private:
  std::vector<Matrix> ops_;
  Eigen::Index d_in_;
  Eigen::Index d_out_;
};

struct ChannelReport {
  bool cptp;
  bool unital;
  double tp_violation;      // max |sum K^dagger K - 1|
  double unital_violation;  // max |sum K K^dagger - 1|
  double max_violation;
};

/// Embed a square operator acting on `targets` into an n-qubit register.
/// targets[k] is the register qubit playing the operator's k-th qubit role.
Matrix embed_operator(const Matrix& op, std::span<const int> targets, int n_total);

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& u,
                            std::span<const int> targets);

/// Sum_j K~_j rho K~_j^dagger with K~_j embedded on `targets`. A non-square
/// channel must cover the whole register in order (it changes the qubit count).
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& chan,
                            std::span<const int> targets);

/// Operator set {O_j I_k}: inner acts first.
KrausChannel compose_channels(const KrausChannel& outer, const KrausChannel& inner);
/// Operator set {A_j (x) B_k}; a's qubits become the most significant.
KrausChannel tensor_channels(const KrausChannel& a, const KrausChannel& b);

/// Reduced state on `keep`, in the order given by keep.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// (Lambda (x) 1)[|Omega><Omega|] on 2n qubits, |Omega> = 2^{-n/2} sum |jj>.
DensityMatrix choi_state(const KrausChannel& chan);

/// Channel fidelity <Omega|(Lambda (x) 1)[|Omega><Omega|]|Omega>, evaluated
/// both through the Choi state and as (1/4^n) sum |tr K_j|^2; the two routes
/// must agree within 1e-12 (throws otherwise) and the Choi value is returned.
double channel_fidelity(const KrausChannel& chan);
double channel_fidelity_trace_sum(const KrausChannel& chan);

/// Frobenius distance between Choi states; the channel-equality metric.
double choi_distance(const KrausChannel& a, const KrausChannel& b);

ChannelReport validate_channel(const KrausChannel& chan);

}  // namespace qecool
