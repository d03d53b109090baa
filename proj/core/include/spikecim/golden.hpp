// SPDX-License-Identifier: Apache-2.0
//
// Quantized integer reference executor for spiking Conv/FC/MaxPool layers.
// This is the functional oracle the cycle simulator is verified against:
// plain integer arithmetic, two's-complement wraparound at the Vmem width,
// spike condition v >= threshold, leak applied once per timestep before the
// comparison.  The simulator's bit-serial datapath must match it exactly.
#pragma once

#include <vector>

#include "spikecim/network.hpp"
#include "spikecim/tensor.hpp"

namespace spikecim {

// Per-timestep weight accumulation for one Conv layer: for every output
// neuron, the wraparound sum of weight * spike over its receptive field
// (zero padding contributes nothing).  Output shape (K, out_h, out_w).
VmemTensor conv_accumulate(const SpikeTensor& spikes, int t, const WeightTensor& weights,
                           const LayerSpec& layer, const PrecisionMode& p);

// FC flavour of the above; the input timestep slice is flattened in (C, H, W)
// row-major order.  Output shape (out).
VmemTensor fc_accumulate(const SpikeTensor& spikes, int t, const WeightTensor& weights,
                         const LayerSpec& layer, const PrecisionMode& p);

// One neuron step over matching tensors: v' = v + input (- leak for LIF),
// wraparound; spike where v' >= threshold; hard reset zeroes, soft reset
// subtracts the threshold.  Spike flags returned one byte per element.
std::vector<std::uint8_t> neuron_update(VmemTensor& vmem, const VmemTensor& input,
                                        const NeuronSpec& n, const PrecisionMode& p);

// 2x2/stride-2 style pooling on one timestep slice: output spike is the OR
// (max of binary values) over each window.
void maxpool_timestep(const SpikeTensor& in, int t, const LayerSpec& layer, SpikeTensor& out);

struct GoldenResult {
    // One output tensor per layer, shape (T, C_out, H_out, W_out).
    std::vector<SpikeTensor> layer_outputs;
    // Final membrane potentials per weighted (Conv/FC) layer.
    std::vector<VmemTensor> final_vmems;
    // Input sparsity per layer per timestep, each value in [0, 1].
    std::vector<std::vector<double>> input_sparsity;
};

// Executes T timesteps layer by layer, persisting every layer's Vmem across
// timesteps.  `weights` holds one tensor per Conv/FC layer, in layer order.
GoldenResult run_network(const NetworkSpec& net, const std::vector<WeightTensor>& weights,
                         const SpikeTensor& input);

}  // namespace spikecim
