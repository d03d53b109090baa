// SPDX-License-Identifier: Apache-2.0
//
// Layer and network descriptions plus the JSON description-file loader.
// See README for the file schema.  Unknown keys are rejected.
#pragma once

#include <string>
#include <vector>

#include "spikecim/arch.hpp"

namespace spikecim {

enum class LayerKind { kConv, kFC, kMaxPool };

const char* layer_kind_name(LayerKind k);

struct LayerSpec {
    LayerKind kind = LayerKind::kConv;
    int in_channels = 0;
    int out_channels = 0;
    int kernel_h = 3, kernel_w = 3;  // MaxPool window; unused for FC
    int stride = 1;
    int padding = 0;
    int in_h = 0, in_w = 0;  // filled during network validation

    // floor((in + 2*padding - kernel) / stride) + 1
    int out_h() const;
    int out_w() const;

    // Inputs accumulated per output neuron: R*S*C for Conv, input neuron
    // count for FC.  MaxPool performs no accumulation and reports 0.
    long fan_in() const;

    void validate() const;
};

struct NetworkSpec {
    std::vector<LayerSpec> layers;
    int timesteps = 1;
    PrecisionMode precision;
    NeuronSpec neuron;
    int input_h = 0, input_w = 0, input_channels = 0;

    // Propagates dimensions through the layer list (filling in_h/in_w/
    // in_channels, inferring FC input sizes) and checks compatibility.
    void validate_and_propagate();

    // Number of layers carrying weights (Conv + FC).
    int weighted_layer_count() const;
};

// Loads and validates a network description file.  Throws ParseError with
// position diagnostics or ValidationError for inconsistent dimensions.
NetworkSpec load_network(const std::string& path);
void save_network(const NetworkSpec& net, const std::string& path);

// String-based variants of the above (used by tests and the loader itself).
NetworkSpec parse_network(const std::string& json_text);
std::string network_to_json(const NetworkSpec& net);

}  // namespace spikecim
