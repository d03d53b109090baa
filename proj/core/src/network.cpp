// SPDX-License-Identifier: Apache-2.0
#include "spikecim/network.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace spikecim {

using nlohmann::json;

const char* layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::kConv: return "conv";
        case LayerKind::kFC: return "fc";
        case LayerKind::kMaxPool: return "maxpool";
    }
    return "?";
}

int LayerSpec::out_h() const {
    if (kind == LayerKind::kFC) return 1;
    return (in_h + 2 * padding - kernel_h) / stride + 1;
}

int LayerSpec::out_w() const {
    if (kind == LayerKind::kFC) return 1;
    return (in_w + 2 * padding - kernel_w) / stride + 1;
}

long LayerSpec::fan_in() const {
    switch (kind) {
        case LayerKind::kConv: return static_cast<long>(kernel_h) * kernel_w * in_channels;
        case LayerKind::kFC: return in_channels;
        case LayerKind::kMaxPool: return 0;
    }
    return 0;
}

void LayerSpec::validate() const {
    if (kind != LayerKind::kFC) {
        if (kernel_h <= 0 || kernel_w <= 0 || stride <= 0 || padding < 0) {
            throw ValidationError("layer kernel/stride/padding out of range");
        }
        if (out_h() < 1 || out_w() < 1) {
            throw ValidationError("layer output dims collapse to zero");
        }
    }
    if (kind == LayerKind::kMaxPool) {
        if (in_channels != out_channels) {
            throw ValidationError("maxpool cannot change the channel count");
        }
        if ((in_h - kernel_h) % stride != 0 || (in_w - kernel_w) % stride != 0) {
            throw ValidationError("maxpool input dims not divisible by the pooling stride");
        }
    }
    if (in_channels <= 0 || out_channels <= 0) {
        throw ValidationError("layer channel counts must be positive");
    }
    if (kind != LayerKind::kMaxPool && fan_in() <= 0) {
        throw ValidationError("layer fan-in must be positive");
    }
}

void NetworkSpec::validate_and_propagate() {
    if (layers.empty()) {
        throw ValidationError("network needs at least one layer");
    }
    if (timesteps < 1) {
        throw ValidationError("timesteps must be at least 1");
    }
    if (input_h <= 0 || input_w <= 0 || input_channels <= 0) {
        throw ValidationError("input dims must be positive");
    }
    neuron.validate(precision);

    int h = input_h, w = input_w, c = input_channels;
    bool flattened = false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        LayerSpec& l = layers[i];
        if (flattened && l.kind != LayerKind::kFC) {
            throw ValidationError("layer " + std::to_string(i) +
                                  ": only FC layers may follow an FC layer");
        }
        l.in_h = h;
        l.in_w = w;
        switch (l.kind) {
            case LayerKind::kConv:
                if (l.in_channels == 0) l.in_channels = c;
                if (l.in_channels != c) {
                    throw ValidationError("layer " + std::to_string(i) + ": declared " +
                                          std::to_string(l.in_channels) + " input channels, got " +
                                          std::to_string(c));
                }
                break;
            case LayerKind::kMaxPool:
                l.in_channels = c;
                l.out_channels = c;
                break;
            case LayerKind::kFC: {
                const int flat = c * h * w;
                if (l.in_channels == 0) l.in_channels = flat;
                if (l.in_channels != flat) {
                    throw ValidationError("layer " + std::to_string(i) + ": FC declared " +
                                          std::to_string(l.in_channels) + " inputs, flatten gives " +
                                          std::to_string(flat));
                }
                flattened = true;
                break;
            }
        }
        l.validate();
        h = l.out_h();
        w = l.out_w();
        c = l.out_channels;
        if (l.kind == LayerKind::kFC) {
            h = 1;
            w = 1;
        }
    }
}

int NetworkSpec::weighted_layer_count() const {
    int n = 0;
    for (const auto& l : layers) n += (l.kind != LayerKind::kMaxPool);
    return n;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
    }
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
    if (!obj[key].is_number_integer()) throw ParseError(where + ": '" + key + "' must be an integer");
    return obj[key].get<int>();
}

LayerSpec parse_layer(const json& jl, std::size_t index) {
    const std::string where = "layer " + std::to_string(index);
    if (!jl.is_object()) throw ParseError(where + ": expected an object");
    const std::string kind = jl.contains("kind") && jl["kind"].is_string()
                                 ? jl["kind"].get<std::string>()
                                 : throw ParseError(where + ": missing string key 'kind'");

    LayerSpec l;
    if (kind == "conv") {
        l.kind = LayerKind::kConv;
        reject_unknown_keys(jl, {"kind", "out_channels", "in_channels", "kernel", "stride", "padding"},
                            where);
        l.out_channels = get_int(jl, "out_channels", where);
        if (jl.contains("in_channels")) l.in_channels = get_int(jl, "in_channels", where);
        if (jl.contains("kernel")) {
            const auto& k = jl["kernel"];
            if (!k.is_array() || k.size() != 2) throw ParseError(where + ": 'kernel' must be [h, w]");
            l.kernel_h = k[0].get<int>();
            l.kernel_w = k[1].get<int>();
        } else {
            l.kernel_h = l.kernel_w = 3;
        }
        l.stride = jl.contains("stride") ? get_int(jl, "stride", where) : 1;
        // Default padding preserves spatial dims for odd kernels at stride 1.
        l.padding = jl.contains("padding") ? get_int(jl, "padding", where) : (l.kernel_h - 1) / 2;
    } else if (kind == "maxpool") {
        l.kind = LayerKind::kMaxPool;
        reject_unknown_keys(jl, {"kind", "window", "stride"}, where);
        if (jl.contains("window")) {
            const auto& k = jl["window"];
            if (!k.is_array() || k.size() != 2) throw ParseError(where + ": 'window' must be [h, w]");
            l.kernel_h = k[0].get<int>();
            l.kernel_w = k[1].get<int>();
        } else {
            l.kernel_h = l.kernel_w = 2;
        }
        l.stride = jl.contains("stride") ? get_int(jl, "stride", where) : 2;
        l.padding = 0;
        l.in_channels = l.out_channels = 1;  // patched during propagation
    } else if (kind == "fc") {
        l.kind = LayerKind::kFC;
        reject_unknown_keys(jl, {"kind", "out_neurons", "in_neurons"}, where);
        l.out_channels = get_int(jl, "out_neurons", where);
        if (jl.contains("in_neurons")) l.in_channels = get_int(jl, "in_neurons", where);
        l.kernel_h = l.kernel_w = 0;
        l.stride = 1;
        l.padding = 0;
    } else {
        throw ParseError(where + ": unknown layer kind '" + kind + "'");
    }
    return l;
}

NeuronSpec parse_neuron(const json& jn) {
    if (!jn.is_object()) throw ParseError("neuron: expected an object");
    reject_unknown_keys(jn, {"model", "reset", "threshold", "leak"}, "neuron");
    NeuronSpec n;
    const std::string model = jn.contains("model") ? jn["model"].get<std::string>() : "if";
    if (model == "if")
        n.model = NeuronModel::kIF;
    else if (model == "lif")
        n.model = NeuronModel::kLIF;
    else
        throw ParseError("neuron: unknown model '" + model + "'");
    const std::string reset = jn.contains("reset") ? jn["reset"].get<std::string>() : "hard";
    if (reset == "hard")
        n.reset = ResetKind::kHard;
    else if (reset == "soft")
        n.reset = ResetKind::kSoft;
    else
        throw ParseError("neuron: unknown reset '" + reset + "'");
    n.threshold = get_int(jn, "threshold", "neuron");
    n.leak = jn.contains("leak") ? get_int(jn, "leak", "neuron") : 0;
    return n;
}

}  // namespace

NetworkSpec parse_network(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("network description: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("network description: expected a JSON object");
    reject_unknown_keys(j, {"precision", "timesteps", "neuron", "input", "layers"}, "network");

    NetworkSpec net;
    net.precision = validate_precision(get_int(j, "precision", "network"));
    net.timesteps = get_int(j, "timesteps", "network");
    if (!j.contains("neuron")) throw ParseError("network: missing key 'neuron'");
    net.neuron = parse_neuron(j["neuron"]);

    if (!j.contains("input") || !j["input"].is_object()) {
        throw ParseError("network: missing object key 'input'");
    }
    reject_unknown_keys(j["input"], {"h", "w", "channels"}, "input");
    net.input_h = get_int(j["input"], "h", "input");
    net.input_w = get_int(j["input"], "w", "input");
    net.input_channels = get_int(j["input"], "channels", "input");

    if (!j.contains("layers") || !j["layers"].is_array()) {
        throw ParseError("network: missing array key 'layers'");
    }
    for (std::size_t i = 0; i < j["layers"].size(); ++i) {
        net.layers.push_back(parse_layer(j["layers"][i], i));
    }
    net.validate_and_propagate();
    return net;
}

std::string network_to_json(const NetworkSpec& net) {
    json j;
    j["precision"] = net.precision.weight_bits;
    j["timesteps"] = net.timesteps;
    j["neuron"] = {
        {"model", net.neuron.model == NeuronModel::kIF ? "if" : "lif"},
        {"reset", net.neuron.reset == ResetKind::kHard ? "hard" : "soft"},
        {"threshold", net.neuron.threshold},
        {"leak", net.neuron.leak},
    };
    j["input"] = {{"h", net.input_h}, {"w", net.input_w}, {"channels", net.input_channels}};
    j["layers"] = json::array();
    for (const auto& l : net.layers) {
        json jl;
        jl["kind"] = layer_kind_name(l.kind);
        switch (l.kind) {
            case LayerKind::kConv:
                jl["out_channels"] = l.out_channels;
                jl["kernel"] = {l.kernel_h, l.kernel_w};
                jl["stride"] = l.stride;
                jl["padding"] = l.padding;
                break;
            case LayerKind::kMaxPool:
                jl["window"] = {l.kernel_h, l.kernel_w};
                jl["stride"] = l.stride;
                break;
            case LayerKind::kFC:
                jl["out_neurons"] = l.out_channels;
                break;
        }
        j["layers"].push_back(jl);
    }
    return j.dump(2) + "\n";
}

NetworkSpec load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open network description: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

void save_network(const NetworkSpec& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write network description: " + path);
    out << network_to_json(net);
}

}  // namespace spikecim
