#include "qecool/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qecool {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_targets(std::span<const int> targets, int n_total) {
  std::vector<bool> seen(static_cast<std::size_t>(n_total), false);
  for (int t : targets) {
    if (t < 0 || t >= n_total)
      throw std::invalid_argument("target qubit " + std::to_string(t) +
                                  " out of range for " + std::to_string(n_total) +
                                  " qubits");
    if (seen[static_cast<std::size_t>(t)])
      throw std::invalid_argument("duplicate target qubit " + std::to_string(t));
    seen[static_cast<std::size_t>(t)] = true;
  }
}

}  // namespace

std::size_t dim_for(int n_qubits) {
  if (n_qubits < 0 || n_qubits > 30)
    throw std::invalid_argument("unsupported qubit count " + std::to_string(n_qubits));
  return std::size_t{1} << n_qubits;
}

int qubits_for(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d % 2 != 0)
      throw std::invalid_argument("dimension " + std::to_string(dim) +
                                  " is not a power of two");
    d /= 2;
    ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(int n_qubits, Matrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(dim_for(n_qubits));
  if (entries_.rows() != d || entries_.cols() != d)
    throw std::invalid_argument("density matrix shape " + shape_string(entries_) +
                                " does not match " + std::to_string(n_qubits) +
                                " qubits");
}

DensityMatrix DensityMatrix::basis_state(int n_qubits, std::size_t index) {
  const std::size_t d = dim_for(n_qubits);
  if (index >= d) throw std::invalid_argument("basis index out of range");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::pure(const Vector& amplitudes) {
  const int n = qubits_for(amplitudes.size());
  return DensityMatrix(n, amplitudes * amplitudes.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probabilities) {
  const int n = qubits_for(probabilities.size());
  Matrix m = Matrix::Zero(probabilities.size(), probabilities.size());
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) m(i, i) = probabilities[i];
  return DensityMatrix(n, std::move(m));
}

double DensityMatrix::trace_deviation() const {
  return std::abs(entries_.trace() - Complex{1.0, 0.0});
}

double DensityMatrix::hermiticity_deviation() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      Matrix(0.5 * (entries_ + entries_.adjoint())), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::check_valid() const {
  if (hermiticity_deviation() > kEqualityTol)
    throw std::invalid_argument("density matrix is not Hermitian (deviation " +
                                std::to_string(hermiticity_deviation()) + ")");
  if (trace_deviation() > kEqualityTol)
    throw std::invalid_argument("density matrix trace differs from 1 by " +
                                std::to_string(trace_deviation()));
  if (min_eigenvalue() < -kStructuralTol)
    throw std::invalid_argument("density matrix has eigenvalue " +
                                std::to_string(min_eigenvalue()));
}

bool DensityMatrix::is_valid() const {
  return hermiticity_deviation() <= kEqualityTol && trace_deviation() <= kEqualityTol &&
         min_eigenvalue() >= -kStructuralTol;
}

bool DensityMatrix::is_diagonal(double tol) const {
  for (Eigen::Index i = 0; i < entries_.rows(); ++i)
    for (Eigen::Index j = 0; j < entries_.cols(); ++j)
      if (i != j && std::abs(entries_(i, j)) > tol) return false;
  return true;
}

RealVector DensityMatrix::diagonal_probabilities() const {
  return entries_.diagonal().real();
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
  Matrix out(entries_.rows() * other.entries_.rows(),
             entries_.cols() * other.entries_.cols());
  for (Eigen::Index i = 0; i < entries_.rows(); ++i)
    for (Eigen::Index j = 0; j < entries_.cols(); ++j)
      out.block(i * other.entries_.rows(), j * other.entries_.cols(),
                other.entries_.rows(), other.entries_.cols()) =
          entries_(i, j) * other.entries_;
  return DensityMatrix(n_qubits_ + other.n_qubits_, std::move(out));
}

// ---------------------------------------------------------------------------
// UnitaryGate

UnitaryGate::UnitaryGate(int n_qubits, Matrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  const auto d = static_cast<Eigen::Index>(dim_for(n_qubits));
  if (entries_.rows() != d || entries_.cols() != d)
    throw std::invalid_argument("unitary shape " + shape_string(entries_) +
                                " does not match " + std::to_string(n_qubits) +
                                " qubits");
  const double dev =
      (entries_.adjoint() * entries_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > kEqualityTol)
    throw std::invalid_argument("matrix is not unitary (deviation " +
                                std::to_string(dev) + ")");
}

UnitaryGate UnitaryGate::then(const UnitaryGate& later) const {
  if (later.n_qubits_ != n_qubits_)
    throw std::invalid_argument("cannot compose gates on different qubit counts");
  return UnitaryGate(n_qubits_, later.entries_ * entries_);
}

UnitaryGate UnitaryGate::tensor(const UnitaryGate& other) const {
  Matrix out(entries_.rows() * other.entries_.rows(),
             entries_.cols() * other.entries_.cols());
  for (Eigen::Index i = 0; i < entries_.rows(); ++i)
    for (Eigen::Index j = 0; j < entries_.cols(); ++j)
      out.block(i * other.entries_.rows(), j * other.entries_.cols(),
                other.entries_.rows(), other.entries_.cols()) =
          entries_(i, j) * other.entries_;
  return UnitaryGate(n_qubits_ + other.n_qubits_, std::move(out));
}

UnitaryGate UnitaryGate::adjoint() const {
  return UnitaryGate(n_qubits_, entries_.adjoint());
}

UnitaryGate standard_gate(std::string_view name, int n_targets) {
  if (n_targets >= 0) {
    int arity = 0;
    if (name == "H" || name == "X" || name == "Y" || name == "Z")
      arity = 1;
    else if (name == "CNOT" || name == "SWAP")
      arity = 2;
    else if (name == "TOFFOLI")
      arity = 3;
    if (arity != 0 && n_targets != arity)
      throw std::invalid_argument(std::string(name) + " acts on " +
                                  std::to_string(arity) + " qubits, not " +
                                  std::to_string(n_targets));
  }
  if (name == "H") {
    Matrix m(2, 2);
    m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    return UnitaryGate(1, m);
  }
  if (name == "X") {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return UnitaryGate(1, m);
  }
  if (name == "Y") {
    Matrix m(2, 2);
    m << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0};
    return UnitaryGate(1, m);
  }
  if (name == "Z") {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return UnitaryGate(1, m);
  }
  if (name == "CNOT") {
    std::vector<std::size_t> sigma{0, 1, 3, 2};
    return permutation_gate(sigma);
  }
  if (name == "SWAP") {
    std::vector<std::size_t> sigma{0, 2, 1, 3};
    return permutation_gate(sigma);
  }
  if (name == "TOFFOLI") {
    std::vector<std::size_t> sigma{0, 1, 2, 3, 4, 5, 7, 6};
    return permutation_gate(sigma);
  }
  throw std::invalid_argument("unknown gate name '" + std::string(name) + "'");
}

UnitaryGate permutation_gate(std::span<const std::size_t> sigma) {
  const auto d = static_cast<Eigen::Index>(sigma.size());
  const int n = qubits_for(d);
  std::vector<bool> hit(sigma.size(), false);
  for (std::size_t v : sigma) {
    if (v >= sigma.size() || hit[v])
      throw std::invalid_argument("basis permutation is not a bijection");
    hit[v] = true;
  }
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    m(static_cast<Eigen::Index>(sigma[static_cast<std::size_t>(i)]), i) = 1.0;
  return UnitaryGate(n, std::move(m));
}

UnitaryGate qubit_permutation_gate(std::span<const int> new_position) {
  const int n = static_cast<int>(new_position.size());
  check_targets(new_position, n);
  const std::size_t d = dim_for(n);
  std::vector<std::size_t> sigma(d);
  for (std::size_t x = 0; x < d; ++x) {
    std::size_t y = 0;
    for (int q = 0; q < n; ++q)
      if (bit_of(x, q, n))
        y |= std::size_t{1} << (n - 1 - new_position[static_cast<std::size_t>(q)]);
    sigma[x] = y;
  }
  return permutation_gate(sigma);
}

// ---------------------------------------------------------------------------
// KrausChannel

KrausChannel::KrausChannel(std::vector<Matrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw std::invalid_argument("channel needs at least one operator");
  d_out_ = ops_.front().rows();
  d_in_ = ops_.front().cols();
  qubits_for(d_out_);
  qubits_for(d_in_);
  for (const auto& k : ops_)
    if (k.rows() != d_out_ || k.cols() != d_in_)
      throw std::invalid_argument("Kraus operators have inconsistent shapes");
}

KrausChannel KrausChannel::identity(int n_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_for(n_qubits));
  return KrausChannel({Matrix::Identity(d, d)});
}

KrausChannel KrausChannel::from_unitary(const UnitaryGate& u) {
  return KrausChannel({u.matrix()});
}

KrausChannel KrausChannel::append_ancilla(int n_system,
                                          const RealVector& probabilities) {
  const int n_anc = qubits_for(probabilities.size());
  const auto ds = static_cast<Eigen::Index>(dim_for(n_system));
  const Eigen::Index da = probabilities.size();
  for (Eigen::Index i = 0; i < da; ++i)
    if (probabilities[i] < -kEqualityTol)
      throw std::invalid_argument("negative appended-state probability");
  if (std::abs(probabilities.sum() - 1.0) > kEqualityTol)
    throw std::invalid_argument("appended-state probabilities must sum to 1");
  (void)n_anc;
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(da));
  for (Eigen::Index a = 0; a < da; ++a) {
    Matrix k = Matrix::Zero(ds * da, ds);
    const double w = std::sqrt(std::max(probabilities[a], 0.0));
    for (Eigen::Index s = 0; s < ds; ++s) k(s * da + a, s) = w;
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

KrausChannel KrausChannel::discard_qubits(int n_total, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("keep list must be non-empty");
  check_targets(keep, n_total);
  std::vector<int> traced;
  for (int q = 0; q < n_total; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  const auto d = static_cast<Eigen::Index>(dim_for(n_total));
  const auto dk = static_cast<Eigen::Index>(dim_for(static_cast<int>(keep.size())));
  const auto dt = static_cast<Eigen::Index>(dim_for(static_cast<int>(traced.size())));
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(dt));
  for (Eigen::Index t = 0; t < dt; ++t) {
    Matrix k = Matrix::Zero(dk, d);
    for (Eigen::Index a = 0; a < dk; ++a) {
      std::size_t x = 0;
      for (std::size_t i = 0; i < keep.size(); ++i)
        if (bit_of(static_cast<std::size_t>(a), static_cast<int>(i),
                   static_cast<int>(keep.size())))
          x |= std::size_t{1} << (n_total - 1 - keep[i]);
      for (std::size_t i = 0; i < traced.size(); ++i)
        if (bit_of(static_cast<std::size_t>(t), static_cast<int>(i),
                   static_cast<int>(traced.size())))
          x |= std::size_t{1} << (n_total - 1 - traced[i]);
      k(a, static_cast<Eigen::Index>(x)) = 1.0;
    }
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

int KrausChannel::n_qubits_in() const { return qubits_for(d_in_); }
int KrausChannel::n_qubits_out() const { return qubits_for(d_out_); }

// ---------------------------------------------------------------------------
// Channel algebra

Matrix embed_operator(const Matrix& op, std::span<const int> targets, int n_total) {
  if (op.rows() != op.cols())
    throw std::invalid_argument("only square operators can be embedded");
  const int m = static_cast<int>(targets.size());
  if (op.rows() != static_cast<Eigen::Index>(dim_for(m)))
    throw std::invalid_argument("operator dimension does not match target count");
  check_targets(targets, n_total);

  const std::size_t d = dim_for(n_total);
  const std::size_t dm = dim_for(m);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < d; ++x) {
    std::size_t xs = 0;
    for (int k = 0; k < m; ++k)
      xs = (xs << 1) | static_cast<std::size_t>(bit_of(x, targets[static_cast<std::size_t>(k)], n_total));
    for (std::size_t ys = 0; ys < dm; ++ys) {
      const Complex v = op(static_cast<Eigen::Index>(ys), static_cast<Eigen::Index>(xs));
      if (v == Complex{0.0, 0.0}) continue;
      std::size_t y = x;
      for (int k = 0; k < m; ++k) {
        const std::size_t mask =
            std::size_t{1} << (n_total - 1 - targets[static_cast<std::size_t>(k)]);
        if (bit_of(ys, k, m))
          y |= mask;
        else
          y &= ~mask;
      }
      out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += v;
    }
  }
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& u,
                            std::span<const int> targets) {
  const Matrix ue = embed_operator(u.matrix(), targets, rho.n_qubits());
  return DensityMatrix(rho.n_qubits(), ue * rho.entries() * ue.adjoint());
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& chan,
                            std::span<const int> targets) {
  if (!chan.is_square()) {
    if (static_cast<int>(targets.size()) != rho.n_qubits())
      throw std::invalid_argument(
          "a non-square channel must be applied to the full register");
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (targets[i] != static_cast<int>(i))
        throw std::invalid_argument(
            "a non-square channel must be applied in register order");
    if (chan.d_in() != rho.dim())
      throw std::invalid_argument("channel input dimension does not match state");
    Matrix acc = Matrix::Zero(chan.d_out(), chan.d_out());
    for (const auto& k : chan.operators()) acc += k * rho.entries() * k.adjoint();
    return DensityMatrix(chan.n_qubits_out(), std::move(acc));
  }
  if (chan.d_in() != static_cast<Eigen::Index>(dim_for(static_cast<int>(targets.size()))))
    throw std::invalid_argument("channel dimension does not match target count");
  Matrix acc = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : chan.operators()) {
    const Matrix ke = embed_operator(k, targets, rho.n_qubits());
    acc += ke * rho.entries() * ke.adjoint();
  }
  return DensityMatrix(rho.n_qubits(), std::move(acc));
}

KrausChannel compose_channels(const KrausChannel& outer, const KrausChannel& inner) {
  if (inner.d_out() != outer.d_in())
    throw std::invalid_argument("channel dimensions do not compose: inner output " +
                                std::to_string(inner.d_out()) + ", outer input " +
                                std::to_string(outer.d_in()));
  std::vector<Matrix> ops;
  ops.reserve(outer.size() * inner.size());
  for (const auto& o : outer.operators())
    for (const auto& i : inner.operators()) ops.push_back(o * i);
  return KrausChannel(std::move(ops));
}

KrausChannel tensor_channels(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> ops;
  ops.reserve(a.size() * b.size());
  for (const auto& ka : a.operators())
    for (const auto& kb : b.operators()) {
      Matrix k(ka.rows() * kb.rows(), ka.cols() * kb.cols());
      for (Eigen::Index i = 0; i < ka.rows(); ++i)
        for (Eigen::Index j = 0; j < ka.cols(); ++j)
          k.block(i * kb.rows(), j * kb.cols(), kb.rows(), kb.cols()) = ka(i, j) * kb;
      ops.push_back(std::move(k));
    }
  return KrausChannel(std::move(ops));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("keep list must be non-empty");
  const int n = rho.n_qubits();
  check_targets(keep, n);
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  const int m = static_cast<int>(keep.size());
  const std::size_t dk = dim_for(m);
  const std::size_t dt = dim_for(static_cast<int>(traced.size()));
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));

  for (std::size_t a = 0; a < dk; ++a)
    for (std::size_t b = 0; b < dk; ++b)
      for (std::size_t t = 0; t < dt; ++t) {
        std::size_t x = 0;
        std::size_t y = 0;
        for (int k = 0; k < m; ++k) {
          const std::size_t mask = std::size_t{1} << (n - 1 - keep[static_cast<std::size_t>(k)]);
          if (bit_of(a, k, m)) x |= mask;
          if (bit_of(b, k, m)) y |= mask;
        }
        for (std::size_t k = 0; k < traced.size(); ++k)
          if (bit_of(t, static_cast<int>(k), static_cast<int>(traced.size()))) {
            const std::size_t mask = std::size_t{1} << (n - 1 - traced[k]);
            x |= mask;
            y |= mask;
          }
        out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            rho.entries()(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      }
  return DensityMatrix(m, std::move(out));
}

namespace {

Vector omega_ket(int n) {
  const std::size_t d = dim_for(n);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d * d));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j)
    v(static_cast<Eigen::Index>(j * d + j)) = amp;
  return v;
}

}  // namespace

DensityMatrix choi_state(const KrausChannel& chan) {
  if (!chan.is_square())
    throw std::invalid_argument("Choi state requires a square channel");
  const int n = chan.n_qubits_in();
  const Vector omega = omega_ket(n);
  DensityMatrix rho = DensityMatrix::pure(omega);
  std::vector<int> targets(static_cast<std::size_t>(n));
  std::iota(targets.begin(), targets.end(), 0);
  return apply_channel(rho, chan, targets);
}

double channel_fidelity_trace_sum(const KrausChannel& chan) {
  if (!chan.is_square())
    throw std::invalid_argument("channel fidelity requires a square channel");
  const double d = static_cast<double>(chan.d_in());
  double acc = 0.0;
  for (const auto& k : chan.operators()) acc += std::norm(k.trace());
  return acc / (d * d);
}

double channel_fidelity(const KrausChannel& chan) {
  const DensityMatrix choi = choi_state(chan);
  const Vector omega = omega_ket(chan.n_qubits_in());
  const double f_choi = std::real(omega.dot(choi.entries() * omega));
  const double f_trace = channel_fidelity_trace_sum(chan);
  if (std::abs(f_choi - f_trace) > kEqualityTol)
    throw std::runtime_error("channel fidelity routes disagree: Choi " +
                             std::to_string(f_choi) + " vs trace-sum " +
                             std::to_string(f_trace));
  return f_choi;
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.d_in() != b.d_in() || a.d_out() != b.d_out())
    throw std::invalid_argument("channels act on different spaces");
  return (choi_state(a).entries() - choi_state(b).entries()).norm();
}

ChannelReport validate_channel(const KrausChannel& chan) {
  Matrix tp = Matrix::Zero(chan.d_in(), chan.d_in());
  Matrix un = Matrix::Zero(chan.d_out(), chan.d_out());
  for (const auto& k : chan.operators()) {
    tp += k.adjoint() * k;
    un += k * k.adjoint();
  }
  ChannelReport report{};
  report.tp_violation =
      (tp - Matrix::Identity(chan.d_in(), chan.d_in())).cwiseAbs().maxCoeff();
  report.unital_violation =
      (un - Matrix::Identity(chan.d_out(), chan.d_out())).cwiseAbs().maxCoeff();
  report.cptp = report.tp_violation <= kStructuralTol;
  report.unital = report.unital_violation <= kStructuralTol;
  report.max_violation = std::max(report.tp_violation, report.unital_violation);
  return report;
}

}  // namespace qecool
