#include "qecool/codes.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qecool {

namespace {

UnitaryGate cnot_on(int control, int target) {
  std::vector<std::size_t> sigma(8);
  for (std::size_t x = 0; x < 8; ++x) {
    std::size_t y = x;
    if (bit_of(x, control, 3)) y ^= std::size_t{1} << (2 - target);
    sigma[x] = y;
  }
  return permutation_gate(sigma);
}

UnitaryGate toffoli_on(int c1, int c2, int target) {
  std::vector<std::size_t> sigma(8);
  for (std::size_t x = 0; x < 8; ++x) {
    std::size_t y = x;
    if (bit_of(x, c1, 3) && bit_of(x, c2, 3)) y ^= std::size_t{1} << (2 - target);
    sigma[x] = y;
  }
  return permutation_gate(sigma);
}

UnitaryGate hadamard_all3() {
  const UnitaryGate h = standard_gate("H");
  return h.tensor(h).tensor(h);
}

UnitaryGate compose_layers(const std::vector<UnitaryGate>& layers) {
  UnitaryGate u = layers.front();
  for (std::size_t i = 1; i < layers.size(); ++i) u = u.then(layers[i]);
  return u;
}

}  // namespace

AncillaState::AncillaState(double r00, double r01, double r10, double r11)
    : rho00(r00), rho01(r01), rho10(r10), rho11(r11) {
  for (double v : {r00, r01, r10, r11})
    if (v < -kEqualityTol)
      throw std::invalid_argument("ancilla probabilities must be non-negative");
  const double sum = r00 + r01 + r10 + r11;
  if (std::abs(sum - 1.0) > kEqualityTol)
    throw std::invalid_argument("ancilla probabilities sum to " + std::to_string(sum));
}

AncillaState AncillaState::thermal(MixingStrength q) {
  const double a = 1.0 - q.q / 2.0;
  const double b = q.q / 2.0;
  return AncillaState(a * a, a * b, b * a, b * b);
}

RealVector AncillaState::diagonal() const {
  RealVector v(4);
  v << rho00, rho01, rho10, rho11;
  return v;
}

CodeCircuit build_code(CodeKind kind) {
  const UnitaryGate c01 = cnot_on(0, 1);
  const UnitaryGate c02 = cnot_on(0, 2);
  const UnitaryGate h3 = hadamard_all3();
  const UnitaryGate toffoli = toffoli_on(1, 2, 0);

  std::vector<UnitaryGate> enc_layers;
  if (kind == CodeKind::Optimal) enc_layers.push_back(toffoli);
  enc_layers.push_back(c01);
  enc_layers.push_back(c02);
  enc_layers.push_back(h3);

  std::vector<UnitaryGate> dec_layers{h3, c01, c02, toffoli};

  UnitaryGate encoder = compose_layers(enc_layers);
  UnitaryGate decoder = compose_layers(dec_layers);
  return CodeCircuit{std::move(encoder), std::move(decoder), std::move(enc_layers),
                     std::move(dec_layers)};
}

PipelineSpec PipelineSpec::with_mixing(CodeKind kind, DephasingStrength p,
                                       MixingStrength q, GateErrorRate c) {
  return PipelineSpec{kind, p, q, AncillaState::thermal(q), c, false};
}

PipelineSpec PipelineSpec::with_ancilla(CodeKind kind, DephasingStrength p,
                                        const AncillaState& ancilla, GateErrorRate c) {
  return PipelineSpec{kind, p, std::nullopt, ancilla, c, false};
}

namespace {

KrausChannel dephase_all3(DephasingStrength p) {
  const KrausChannel one = dephasing_channel(p);
  return tensor_channels(one, tensor_channels(one, one));
}

KrausChannel gate_stage(const UnitaryGate& whole, GateErrorRate c) {
  if (c.c == 0.0) return KrausChannel::from_unitary(whole);
  return noisy_unitary(whole, c);
}

KrausChannel ancilla_stage(const PipelineSpec& spec) {
  if (spec.mixing) {
    Matrix append_op = Matrix::Zero(8, 2);  // |b> -> |b,0,0>
    append_op(0, 0) = 1.0;
    append_op(4, 1) = 1.0;
    const KrausChannel append({append_op});
    const KrausChannel mix = mixing_channel(*spec.mixing);
    const KrausChannel mix_pair =
        tensor_channels(KrausChannel::identity(1), tensor_channels(mix, mix));
    return compose_channels(mix_pair, append);
  }
  return KrausChannel::append_ancilla(1, spec.ancilla.diagonal());
}

/// Evolves state `rho` through one (possibly noisy) code unitary on `targets`.
/// With per-gate noise every layer gets its own per-qubit depolarizing
/// wrapper, applied to the state instead of materializing the product set.
void apply_gate_stage(DensityMatrix& rho, const CodeCircuit& code, bool encoder,
                      const PipelineSpec& spec, std::span<const int> targets) {
  const UnitaryGate& whole = encoder ? code.encoder : code.decoder;
  const auto& layers = encoder ? code.encoder_layers : code.decoder_layers;
  if (spec.c.c == 0.0) {
    rho = apply_unitary(rho, whole, targets);
    return;
  }
  if (!spec.per_gate_noise) {
    rho = apply_channel(rho, noisy_unitary(whole, spec.c), targets);
    return;
  }
  const KrausChannel depol = depolarizing_channel(spec.c);
  for (const auto& layer : layers) {
    rho = apply_unitary(rho, layer, targets);
    for (int q : targets) rho = apply_channel(rho, depol, std::vector<int>{q});
  }
}

/// (Lambda (x) 1)[|Omega><Omega|] of the composite, built by staged evolution
/// on [sys, ref, a1, a2] and ending with the ancilla discarded.
DensityMatrix pipeline_choi(const PipelineSpec& spec) {
  Vector omega = Vector::Zero(4);
  omega(0) = omega(3) = 1.0 / std::sqrt(2.0);
  DensityMatrix rho = DensityMatrix::pure(omega);

  const std::vector<int> code{0, 2, 3};
  const CodeCircuit circuit = build_code(spec.kind);

  if (spec.mixing) {
    RealVector zero2(4);
    zero2 << 1.0, 0.0, 0.0, 0.0;
    rho = rho.tensor(DensityMatrix::diagonal(zero2));
    const KrausChannel mix = mixing_channel(*spec.mixing);
    rho = apply_channel(rho, mix, std::vector<int>{2});
    rho = apply_channel(rho, mix, std::vector<int>{3});
  } else {
    rho = rho.tensor(DensityMatrix::diagonal(spec.ancilla.diagonal()));
  }

  apply_gate_stage(rho, circuit, true, spec, code);
  const KrausChannel deph = dephasing_channel(spec.p);
  for (int q : code) rho = apply_channel(rho, deph, std::vector<int>{q});
  apply_gate_stage(rho, circuit, false, spec, code);
  return partial_trace(rho, std::vector<int>{0, 1});
}

/// Minimal Kraus set of a single-qubit channel from its Choi state: the
/// eigendecomposition C = sum_m lambda_m u_m u_m^+ gives
/// K_m[s, r] = sqrt(2 lambda_m) u_m[2s + r]. All four operators are kept,
/// zero-weight ones included.
KrausChannel kraus_from_choi(const DensityMatrix& choi) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      Matrix(0.5 * (choi.entries() + choi.entries().adjoint())));
  std::vector<Matrix> ops;
  for (Eigen::Index m = 0; m < 4; ++m) {
    const double lambda = std::max(solver.eigenvalues()(m), 0.0);
    const Vector u = solver.eigenvectors().col(m);
    Matrix k(2, 2);
    for (int s = 0; s < 2; ++s)
      for (int r = 0; r < 2; ++r) k(s, r) = std::sqrt(2.0 * lambda) * u(2 * s + r);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops));
}

}  // namespace

KrausChannel build_pipeline(const PipelineSpec& spec) {
  if (spec.per_gate_noise && spec.c.c > 0.0) {
    // The layered product set is astronomically large; contract through the
    // Choi state instead.
    return kraus_from_choi(pipeline_choi(spec));
  }
  const CodeCircuit code = build_code(spec.kind);
  KrausChannel chan = ancilla_stage(spec);
  chan = compose_channels(gate_stage(code.encoder, spec.c), chan);
  chan = compose_channels(dephase_all3(spec.p), chan);
  chan = compose_channels(gate_stage(code.decoder, spec.c), chan);
  const std::vector<int> keep{0};
  return compose_channels(KrausChannel::discard_qubits(3, keep), chan);
}

double pipeline_fidelity(const PipelineSpec& spec) {
  const DensityMatrix choi = pipeline_choi(spec);
  Vector omega = Vector::Zero(4);
  omega(0) = omega(3) = 1.0 / std::sqrt(2.0);
  return std::real(omega.dot(choi.entries() * omega));
}

namespace {

double from_rho_form(CodeKind kind, double p, const AncillaState& anc) {
  const double lin = p - 2.0 * p * p;
  if (kind == CodeKind::Optimal)
    return (1.0 - p) * (1.0 + lin * (2.0 * anc.rho00 - 1.0));
  return anc.rho11 * (2.0 * p - 1.0) +
         (1.0 - p) * (1.0 + lin * (1.0 - 2.0 * (anc.rho10 + anc.rho01)));
}

double printed_polynomial(CodeKind kind, double p, double q) {
  if (kind == CodeKind::Traditional)
    return (1.0 - q * q / 4.0) - (2.0 * q - 1.5 * q * q) * p -
           (3.0 - 6.0 * q + 3.0 * q * q) * p * p +
           (2.0 - 4.0 * q + 2.0 * q * q) * p * p * p;
  return 1.0 - (2.0 * q - 0.5 * q * q) * p - (3.0 - 6.0 * q + 3.0 * q * q) * p * p +
         (2.0 - 4.0 * q + q * q) * p * p * p;
}

}  // namespace

ClosedFormFidelity closed_form_fidelity(CodeKind kind, DephasingStrength p,
                                        const AncillaState& ancilla) {
  return ClosedFormFidelity{from_rho_form(kind, p.p, ancilla), std::nullopt};
}

ClosedFormFidelity closed_form_fidelity(CodeKind kind, DephasingStrength p,
                                        MixingStrength q) {
  return ClosedFormFidelity{from_rho_form(kind, p.p, AncillaState::thermal(q)),
                            printed_polynomial(kind, p.p, q.q)};
}

CriticalAncilla critical_rho00(CodeKind kind, DephasingStrength p, GateErrorRate c) {
  if (!(p.p > 0.0 && p.p < 0.5))
    throw std::invalid_argument("critical rho00 requires 0 < p < 1/2");
  const double target = 1.0 - p.p;
  auto fidelity_at = [&](double q) {
    return pipeline_fidelity(PipelineSpec::with_mixing(kind, p, MixingStrength(q), c));
  };
  if (fidelity_at(0.0) < target) return CriticalAncilla{false, 0.0, 0.0};
  double lo = 0.0;  // fidelity >= target (pipeline fidelity decreases with q)
  double hi = 1.0;
  if (fidelity_at(1.0) >= target) {
    return CriticalAncilla{true, 0.25, 1.0};
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (fidelity_at(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  const double q_star = 0.5 * (lo + hi);
  const double half = 1.0 - q_star / 2.0;
  return CriticalAncilla{true, half * half, q_star};
}

}  // namespace qecool
