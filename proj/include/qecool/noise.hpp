#pragma once

#include "qecool/qcore.hpp"

namespace qecool {

// CODATA constants and the calibrated field default. B0 is chosen so that
// the electron polarization at 3.4 K equals sqrt(2)-1; the same calibration
// gives eps ~ 0.31 at 4.7 K and ~ 0.36 at 4 K.
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kBoltzmann = 1.380649e-23;        // J / K
inline constexpr double kGammaElectron = 1.76085963e11;   // rad / (s T)
inline constexpr double kDefaultB0 = 1.114;               // T

struct DephasingStrength {
  double p;
  explicit DephasingStrength(double value);
};

struct MixingStrength {
  double q;
  explicit MixingStrength(double value);
};

/// Depolarizing error parameter; c <= 4/3 keeps the Kraus weights real.
struct GateErrorRate {
  double c;
  explicit GateErrorRate(double value);
};

struct Polarization {
  double epsilon;
  explicit Polarization(double value);
};

struct ThermalSpec {
  double gamma = kGammaElectron;  // rad / (s T)
  double b0 = kDefaultB0;         // tesla
  double temperature;             // kelvin
  ThermalSpec() : temperature(0.0) {}
  ThermalSpec(double gamma_, double b0_, double temperature_);
};

/// {sqrt(1-p) 1, sqrt(p) Z}
KrausChannel dephasing_channel(DephasingStrength p);
/// {sqrt(1-p) 1, sqrt(p) X}; equals H . dephasing . H as a channel.
KrausChannel bit_flip_channel(DephasingStrength p);
/// {sqrt(1-q/2) 1, sqrt(q/2) X}
KrausChannel mixing_channel(MixingStrength q);
/// Single-qubit {sqrt(1-3c/4) 1, sqrt(c/4) X, sqrt(c/4) Y, sqrt(c/4) Z}.
KrausChannel depolarizing_channel(GateErrorRate c);
/// The unitary followed by per-qubit depolarizing on every qubit it acts on.
KrausChannel noisy_unitary(const UnitaryGate& u, GateErrorRate c);

/// (1 - 3c/4)^n, the channel fidelity of the n-qubit depolarizing wrapper.
double gate_fidelity(GateErrorRate c, int n);
/// Inverse of gate_fidelity in c for fixed n.
GateErrorRate gate_error_for_fidelity(double fidelity, int n);

/// tanh(hbar gamma B0 / (kB T)), exactly as printed in the source model.
Polarization polarization_from_temperature(const ThermalSpec& spec);
/// T = hbar gamma B0 / (kB atanh(eps)); eps = 0 has no finite temperature.
double temperature_from_polarization(Polarization eps, double gamma = kGammaElectron,
                                     double b0 = kDefaultB0);

/// n-fold tensor of diag((1+eps)/2, (1-eps)/2).
DensityMatrix thermal_state(Polarization eps, int n);

}  // namespace qecool
