#include "qecool/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qecool {

namespace {

void check_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(value));
}

}  // namespace

DephasingStrength::DephasingStrength(double value) : p(value) {
  check_unit_interval(value, "dephasing probability");
}

MixingStrength::MixingStrength(double value) : q(value) {
  check_unit_interval(value, "mixing strength");
}

GateErrorRate::GateErrorRate(double value) : c(value) {
  if (!(value >= 0.0 && value <= 4.0 / 3.0))
    throw std::invalid_argument("gate error rate must lie in [0, 4/3], got " +
                                std::to_string(value));
}

Polarization::Polarization(double value) : epsilon(value) {
  check_unit_interval(value, "polarization");
}

ThermalSpec::ThermalSpec(double gamma_, double b0_, double temperature_)
    : gamma(gamma_), b0(b0_), temperature(temperature_) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (b0 < 0.0) throw std::invalid_argument("field must be non-negative");
}

KrausChannel dephasing_channel(DephasingStrength p) {
  const Matrix id = Matrix::Identity(2, 2);
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return KrausChannel({std::sqrt(1.0 - p.p) * id, std::sqrt(p.p) * z});
}

KrausChannel bit_flip_channel(DephasingStrength p) {
  const Matrix id = Matrix::Identity(2, 2);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return KrausChannel({std::sqrt(1.0 - p.p) * id, std::sqrt(p.p) * x});
}

KrausChannel mixing_channel(MixingStrength q) {
  const Matrix id = Matrix::Identity(2, 2);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return KrausChannel({std::sqrt(1.0 - q.q / 2.0) * id, std::sqrt(q.q / 2.0) * x});
}

KrausChannel depolarizing_channel(GateErrorRate c) {
  const Matrix id = Matrix::Identity(2, 2);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0};
  z << 1, 0, 0, -1;
  const double stay = std::sqrt(1.0 - 3.0 * c.c / 4.0);
  const double err = std::sqrt(c.c / 4.0);
  return KrausChannel({stay * id, err * x, err * y, err * z});
}

KrausChannel noisy_unitary(const UnitaryGate& u, GateErrorRate c) {
  if (c.c == 0.0) return KrausChannel::from_unitary(u);
  KrausChannel depol = depolarizing_channel(c);
  for (int q = 1; q < u.n_qubits(); ++q)
    depol = tensor_channels(depol, depolarizing_channel(c));
  return compose_channels(depol, KrausChannel::from_unitary(u));
}

double gate_fidelity(GateErrorRate c, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  return std::pow(1.0 - 3.0 * c.c / 4.0, n);
}

GateErrorRate gate_error_for_fidelity(double fidelity, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  check_unit_interval(fidelity, "gate fidelity");
  return GateErrorRate(4.0 / 3.0 * (1.0 - std::pow(fidelity, 1.0 / n)));
}

Polarization polarization_from_temperature(const ThermalSpec& spec) {
  if (!(spec.temperature > 0.0))
    throw std::invalid_argument("temperature must be positive");
  return Polarization(
      std::tanh(kHbar * spec.gamma * spec.b0 / (kBoltzmann * spec.temperature)));
}

double temperature_from_polarization(Polarization eps, double gamma, double b0) {
  if (eps.epsilon <= 0.0)
    throw std::invalid_argument("zero polarization has no finite temperature");
  if (eps.epsilon >= 1.0)
    throw std::invalid_argument("unit polarization requires zero temperature");
  return kHbar * gamma * b0 / (kBoltzmann * std::atanh(eps.epsilon));
}

DensityMatrix thermal_state(Polarization eps, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  RealVector one(2);
  one << (1.0 + eps.epsilon) / 2.0, (1.0 - eps.epsilon) / 2.0;
  RealVector diag = one;
  for (int q = 1; q < n; ++q) {
    RealVector next(diag.size() * 2);
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      next[2 * i] = diag[i] * one[0];
      next[2 * i + 1] = diag[i] * one[1];
    }
    diag.swap(next);
  }
  return DensityMatrix::diagonal(diag);
}

}  // namespace qecool
