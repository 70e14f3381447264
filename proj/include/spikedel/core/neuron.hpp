/*
 * Copyright 2026 The spikedel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "spikedel/common.hpp"

namespace spikedel {

/// Current-based leaky integrate-and-fire neuron with exponentially decaying
/// synaptic current. Potentials are absolute (mV); currents in pA; times in
/// ms. Defaults are Brunel-style benchmark values.
struct NeuronParams {
  double capacitance = 250.0;         // pF
  double tau_membrane = 10.0;         // ms
  double tau_synapse = 0.5;           // ms
  double refractory_period = 2.0;     // ms
  double threshold = 20.0;            // mV
  double reset_potential = 0.0;       // mV
  double resting_potential = 0.0;     // mV
  double external_current = 600.0;   // pA

  void validate() const {
    if (!(capacitance > 0.0) || !(tau_membrane > 0.0) ||
        !(tau_synapse > 0.0)) {
      throw ParameterDomainError(
          "capacitance and time constants must be strictly positive");
    }
    if (!(refractory_period >= 0.0)) {
      throw ParameterDomainError("refractory period must be non-negative");
    }
    if (!(threshold > reset_potential)) {
      throw ParameterDomainError("threshold must exceed reset potential");
    }
    if (tau_membrane == tau_synapse) {
      throw ParameterDomainError(
          "tau_membrane == tau_synapse is not supported");
    }
  }
};

struct NeuronState {
  double membrane_potential = 0.0;  // mV
  double synaptic_current = 0.0;    // pA
  std::int32_t refractory_steps_left = 0;
};

/// Exact one-step propagator of the linear subthreshold system.
///
///   I(t+h)       = p11 I(t)
///   V(t+h) - E_L = p22 (V(t) - E_L) + p21 I(t) + p20 I_ext
struct PropagatorMatrix {
  double p11 = 0.0;  // current decay
  double p21 = 0.0;  // current -> potential, mV/pA
  double p22 = 0.0;  // membrane decay
  double p20 = 0.0;  // constant external current -> potential, mV/pA
  std::int32_t refractory_steps = 0;
};

inline PropagatorMatrix propagator_init(const NeuronParams& params,
                                        double h) {
  params.validate();
  if (!(h > 0.0)) {
    throw ParameterDomainError("step size must be positive");
  }
  const double tm = params.tau_membrane;
  const double ts = params.tau_synapse;
  const double c = params.capacitance;

  PropagatorMatrix p;
  p.p11 = std::exp(-h / ts);
  p.p22 = std::exp(-h / tm);
  // (e^{-h/ts} - e^{-h/tm}) via expm1 keeps precision for small h.
  p.p21 = tm * ts / (c * (ts - tm)) *
          (std::expm1(-h / ts) - std::expm1(-h / tm));
  p.p20 = -tm / c * std::expm1(-h / tm);
  p.refractory_steps =
      static_cast<std::int32_t>(std::lround(params.refractory_period / h));
  return p;
}

/// Advances one neuron by one grid step. `input` is the cleared ring-buffer
/// readout for this step and enters the synaptic current after the potential
/// has been propagated. Returns true if the neuron emitted a spike.
inline bool neuron_update(NeuronState& state, const NeuronParams& params,
                          const PropagatorMatrix& prop, double input) {
  if (state.refractory_steps_left > 0) {
    --state.refractory_steps_left;
    state.membrane_potential = params.reset_potential;
    state.synaptic_current = prop.p11 * state.synaptic_current + input;
    return false;
  }
  const double el = params.resting_potential;
  state.membrane_potential = el +
                             prop.p22 * (state.membrane_potential - el) +
                             prop.p21 * state.synaptic_current +
                             prop.p20 * params.external_current;
  state.synaptic_current = prop.p11 * state.synaptic_current + input;
  if (state.membrane_potential >= params.threshold) {
    state.membrane_potential = params.reset_potential;
    state.refractory_steps_left = prop.refractory_steps;
    return true;
  }
  return false;
}

/// Step-indexed form: returns the spike's lag within the interval starting
/// at `interval_start`.
inline std::optional<std::int32_t> neuron_update(
    NeuronState& state, const NeuronParams& params,
    const PropagatorMatrix& prop, double input, Step step,
    Step interval_start) {
  if (neuron_update(state, params, prop, input)) {
    return static_cast<std::int32_t>(step - interval_start);
  }
  return std::nullopt;
}

/// Membrane potential drawn uniformly from [reset, threshold) on a per-neuron
/// stream, so the initial condition does not depend on placement.
inline NeuronState initial_neuron_state(const NeuronParams& params,
                                        std::uint64_t seed, NeuronId gid) {
  auto rng = make_stream(seed, Stream::initial_state, gid);
  NeuronState s;
  s.membrane_potential =
      params.reset_potential +
      uniform_unit(rng) * (params.threshold - params.reset_potential);
  return s;
}

}  // namespace spikedel
