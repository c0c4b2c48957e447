#pragma once

#include "qecool/noise.hpp"
#include "qecool/qcore.hpp"

#include <optional>

namespace qecool {

enum class CodeKind { Traditional, Optimal };

/// Diagonal two-qubit ancilla state (thermalization assumed complete).
struct AncillaState {
  double rho00;
  double rho01;
  double rho10;
  double rho11;

  AncillaState(double r00, double r01, double r10, double r11);
  /// Per-qubit mixing of |00>: rho00 = (1-q/2)^2, rho01 = rho10 = (q/2)(1-q/2).
  static AncillaState thermal(MixingStrength q);
  RealVector diagonal() const;
};

struct CodeCircuit {
  UnitaryGate encoder;  // 3 qubits; message is qubit 0
  UnitaryGate decoder;
  /// Time-ordered layers, used when gate noise is applied per elementary gate.
  std::vector<UnitaryGate> encoder_layers;
  std::vector<UnitaryGate> decoder_layers;
};

// Message qubit 0, ancilla qubits 1 and 2.
//
// Traditional: encode = CNOT(0->1), CNOT(0->2), H on all three; decode is the
// mirror image followed by Toffoli(1,2 -> 0) doing the majority correction.
// Optimal: identical except for an extra Toffoli(1,2 -> 0) applied to the
// pre-encoded state, cancelling the false correction a |11> ancilla causes.
// The gate order is pinned by tests against the closed-form fidelities.
CodeCircuit build_code(CodeKind kind);

struct PipelineSpec {
  CodeKind kind;
  DephasingStrength p;
  /// When set, the ancilla is prepared as append-|00> followed by per-qubit
  /// mixing; otherwise `ancilla` is injected directly.
  std::optional<MixingStrength> mixing;
  AncillaState ancilla;
  GateErrorRate c{0.0};
  /// Apply the depolarizing wrapper after each elementary gate layer instead
  /// of once per encoder/decoder.
  bool per_gate_noise = false;

  static PipelineSpec with_mixing(CodeKind kind, DephasingStrength p, MixingStrength q,
                                  GateErrorRate c = GateErrorRate(0.0));
  static PipelineSpec with_ancilla(CodeKind kind, DephasingStrength p,
                                   const AncillaState& ancilla,
                                   GateErrorRate c = GateErrorRate(0.0));
};

/// The full discard . decode . dephase . encode . mix . append composite,
/// contracted to an explicit single-qubit Kraus set (operators 2x2).
KrausChannel build_pipeline(const PipelineSpec& spec);

/// Channel fidelity of the pipeline, evaluated by evolving the Choi input
/// state through the stages (no product Kraus set); agrees with
/// channel_fidelity(build_pipeline(spec)) to 1e-12.
double pipeline_fidelity(const PipelineSpec& spec);

struct ClosedFormFidelity {
  /// Density-matrix-element form:
  ///   traditional: rho11 (2p-1) + (1-p)(1 + (p-2p^2)(1 - 2(rho10+rho01)))
  ///   optimal:     (1-p)(1 + (p-2p^2)(2 rho00 - 1))
  double from_rho;
  /// The printed (p, q) polynomial; set only when the ancilla is thermal(q).
  /// For the optimal code its p^2 coefficient is inconsistent with the
  /// rho-form (3-6q+3q^2 vs 3-6q+1.5q^2); the full-matrix simulation decides
  /// in favour of the rho-form, see the discrepancy report.
  std::optional<double> polynomial_pq;
};

ClosedFormFidelity closed_form_fidelity(CodeKind kind, DephasingStrength p,
                                        const AncillaState& ancilla);
ClosedFormFidelity closed_form_fidelity(CodeKind kind, DephasingStrength p,
                                        MixingStrength q);

struct CriticalAncilla {
  bool attainable;
  double rho00;  // (1 - q/2)^2 at the crossing; meaningful when attainable
  double q;
};

/// Smallest thermal-ancilla rho00 with pipeline fidelity >= 1-p, solved by
/// bisection on q against the full-matrix pipeline (tolerance 1e-9 on q).
CriticalAncilla critical_rho00(CodeKind kind, DephasingStrength p, GateErrorRate c);

}  // namespace qecool
