#include "qecool/hbac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qecool {

namespace {

void require_diagonal(const DensityMatrix& rho, const char* what) {
  if (!rho.is_diagonal())
    throw std::invalid_argument(std::string(what) +
                                " requires a diagonal state in the computational basis");
}

// Populations closer than this are treated as equal when sorting, so that
// roundoff from marginalization cannot flip the order of exact ties (the
// bath fixed point must yield the identity permutation).
constexpr double kTieTol = 1e-12;

std::vector<std::size_t> sort_permutation(const RealVector& diag) {
  std::vector<std::size_t> perm(static_cast<std::size_t>(diag.size()));
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return diag[static_cast<Eigen::Index>(a)] > diag[static_cast<Eigen::Index>(b)];
  });
  // restore index order within runs of near-equal values
  std::size_t start = 0;
  for (std::size_t i = 1; i <= perm.size(); ++i) {
    const bool boundary =
        i == perm.size() ||
        diag[static_cast<Eigen::Index>(perm[i - 1])] -
                diag[static_cast<Eigen::Index>(perm[i])] >
            kTieTol;
    if (boundary) {
      std::sort(perm.begin() + static_cast<std::ptrdiff_t>(start),
                perm.begin() + static_cast<std::ptrdiff_t>(i));
      start = i;
    }
  }
  return perm;
}

/// rho -> U rho U^dagger for U = sum_i |i><perm[i]|, evaluated by index
/// shuffle so populations move without arithmetic.
DensityMatrix permute_basis(const DensityMatrix& rho,
                            const std::vector<std::size_t>& perm) {
  const Eigen::Index d = rho.dim();
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = rho.entries()(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
                                static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]));
  return DensityMatrix(rho.n_qubits(), std::move(out));
}

/// Extends a permutation of the `targets` subregister to the full register.
std::vector<std::size_t> extend_permutation(const std::vector<std::size_t>& sub_perm,
                                            std::span<const int> targets, int n_total) {
  const std::size_t d = dim_for(n_total);
  const int m = static_cast<int>(targets.size());
  // sub_perm maps destination -> source on the subregister; the full-register
  // unitary needs source -> destination, so invert first.
  std::vector<std::size_t> dest_of(sub_perm.size());
  for (std::size_t i = 0; i < sub_perm.size(); ++i) dest_of[sub_perm[i]] = i;

  std::vector<std::size_t> full(d);
  for (std::size_t x = 0; x < d; ++x) {
    std::size_t sub = 0;
    for (int k = 0; k < m; ++k)
      sub = (sub << 1) |
            static_cast<std::size_t>(bit_of(x, targets[static_cast<std::size_t>(k)], n_total));
    const std::size_t moved = dest_of[sub];
    std::size_t y = x;
    for (int k = 0; k < m; ++k) {
      const std::size_t mask =
          std::size_t{1} << (n_total - 1 - targets[static_cast<std::size_t>(k)]);
      if (bit_of(moved, k, m))
        y |= mask;
      else
        y &= ~mask;
    }
    full[x] = y;
  }
  // full maps source -> destination; permute_basis wants destination -> source.
  std::vector<std::size_t> inv(d);
  for (std::size_t x = 0; x < d; ++x) inv[full[x]] = x;
  return inv;
}

RealVector subset_diagonal(const DensityMatrix& rho, std::span<const int> targets) {
  if (static_cast<int>(targets.size()) == rho.n_qubits()) {
    bool in_order = true;
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (targets[i] != static_cast<int>(i)) in_order = false;
    if (in_order) return rho.diagonal_probabilities();
  }
  return partial_trace(rho, targets).diagonal_probabilities();
}

}  // namespace

void PPAConfig::validate() const {
  if (n_register < 2) throw std::invalid_argument("PPA needs at least 2 qubits");
  if (iterations < 0) throw std::invalid_argument("iteration count must be >= 0");
  if (exchange_target != -1 && (exchange_target < 0 || exchange_target >= n_register))
    throw std::invalid_argument("exchange target out of range");
}

CompressionResult compression(const DensityMatrix& rho) {
  require_diagonal(rho, "compression");
  const auto perm = sort_permutation(rho.diagonal_probabilities());
  return CompressionResult{permute_basis(rho, perm), perm};
}

DensityMatrix exchange(const DensityMatrix& rho, int target, Polarization bath) {
  const int n = rho.n_qubits();
  if (target < 0 || target >= n)
    throw std::invalid_argument("exchange target out of range");
  std::vector<int> keep;
  for (int q = 0; q < n; ++q)
    if (q != target) keep.push_back(q);
  const DensityMatrix reduced = partial_trace(rho, keep);

  const double th[2] = {(1.0 + bath.epsilon) / 2.0, (1.0 - bath.epsilon) / 2.0};
  const std::size_t d = dim_for(n);
  const std::size_t mask = std::size_t{1} << (n - 1 - target);
  auto strip = [&](std::size_t x) {
    const std::size_t low = x & (mask - 1);
    return ((x >> 1) & ~(mask - 1)) | low;
  };
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      if ((x & mask) != (y & mask)) continue;
      out(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
          reduced.entries()(static_cast<Eigen::Index>(strip(x)),
                            static_cast<Eigen::Index>(strip(y))) *
          th[(x & mask) ? 1 : 0];
    }
  return DensityMatrix(n, std::move(out));
}

DensityMatrix ppa_cool(const DensityMatrix& rho, std::span<const int> targets,
                       Polarization bath, int iterations, GateErrorRate c,
                       bool exchange_first, PPATrace* trace) {
  if (targets.size() < 2)
    throw std::invalid_argument("PPA needs at least 2 target qubits");
  DensityMatrix state = rho;
  const int n = state.n_qubits();
  const int last = targets.back();

  auto snapshot = [&]() {
    if (trace) trace->snapshots.push_back(subset_diagonal(state, targets));
  };
  auto do_compression = [&]() {
    require_diagonal(partial_trace(state, targets), "compression");
    const auto sub_perm = sort_permutation(subset_diagonal(state, targets));
    state = permute_basis(state, extend_permutation(sub_perm, targets, n));
    if (trace) trace->permutations.push_back(sub_perm);
    if (c.c > 0.0) {
      const KrausChannel depol = depolarizing_channel(c);
      for (int q : targets) state = apply_channel(state, depol, std::vector<int>{q});
    }
    snapshot();
  };
  auto do_exchange = [&]() {
    state = exchange(state, last, bath);
    snapshot();
  };

  snapshot();
  for (int it = 0; it < iterations; ++it) {
    if (exchange_first) {
      do_exchange();
      do_compression();
    } else {
      do_compression();
      do_exchange();
    }
  }
  return state;
}

PPATrace ppa_run(const PPAConfig& config, const DensityMatrix& initial) {
  config.validate();
  if (initial.n_qubits() != config.n_register)
    throw std::invalid_argument("initial state does not match the register size");
  require_diagonal(initial, "ppa_run");

  std::vector<int> targets(static_cast<std::size_t>(config.n_register));
  std::iota(targets.begin(), targets.end(), 0);
  if (config.exchange_target != -1) {
    // the exchange acts on the last listed target
    targets.erase(targets.begin() + config.exchange_target);
    targets.push_back(config.exchange_target);
    std::sort(targets.begin(), targets.end() - 1);
  }

  PPATrace trace;
  ppa_cool(initial, targets, config.bath, config.iterations, config.c,
           config.exchange_first, &trace);
  return trace;
}

RefreshMetrics refresh_metrics(const DensityMatrix& rho) {
  if (rho.n_qubits() < 3)
    throw std::invalid_argument("refresh metrics need at least 3 qubits");
  require_diagonal(rho, "refresh_metrics");
  const int n = rho.n_qubits();
  const RealVector diag = rho.diagonal_probabilities();

  std::vector<double> p0(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index x = 0; x < diag.size(); ++x)
    for (int q = 0; q < n; ++q)
      if (!bit_of(static_cast<std::size_t>(x), q, n))
        p0[static_cast<std::size_t>(q)] += diag[x];

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return p0[static_cast<std::size_t>(a)] > p0[static_cast<std::size_t>(b)];
  });

  const int a = order[0];
  const int b = order[1];
  const int msg = order[2];
  const std::size_t mask_a = std::size_t{1} << (n - 1 - a);
  const std::size_t mask_b = std::size_t{1} << (n - 1 - b);
  double pair = 0.0;
  for (Eigen::Index x = 0; x < diag.size(); ++x)
    if (!(static_cast<std::size_t>(x) & mask_a) && !(static_cast<std::size_t>(x) & mask_b))
      pair += diag[x];

  return RefreshMetrics{pair, p0[static_cast<std::size_t>(msg)], std::move(p0), a, b, msg};
}

}  // namespace qecool
