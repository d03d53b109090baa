// SPDX-License-Identifier: Apache-2.0
#include "spikecim/golden.hpp"

namespace spikecim {

namespace {

void check_conv_shapes(const SpikeTensor& spikes, const WeightTensor& weights,
                       const LayerSpec& layer) {
    if (!weights.is_conv()) throw ShapeMismatch("conv layer needs (K,C,R,S) weights");
    const auto& d = weights.dims();
    if (d[0] != layer.out_channels || d[1] != layer.in_channels || d[2] != layer.kernel_h ||
        d[3] != layer.kernel_w) {
        throw ShapeMismatch("conv weight dims do not match the layer");
    }
    if (spikes.c() != layer.in_channels || spikes.h() != layer.in_h ||
        spikes.w() != layer.in_w) {
        throw ShapeMismatch("conv input dims do not match the layer");
    }
}

}  // namespace

VmemTensor conv_accumulate(const SpikeTensor& spikes, int t, const WeightTensor& weights,
                           const LayerSpec& layer, const PrecisionMode& p) {
    check_conv_shapes(spikes, weights, layer);
    const int oh = layer.out_h(), ow = layer.out_w();
    VmemTensor out({layer.out_channels, oh, ow});
    for (int k = 0; k < layer.out_channels; ++k) {
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x) {
                std::int64_t acc = 0;
                for (int c = 0; c < layer.in_channels; ++c) {
                    for (int r = 0; r < layer.kernel_h; ++r) {
                        const int iy = y * layer.stride + r - layer.padding;
                        if (iy < 0 || iy >= layer.in_h) continue;
                        for (int s = 0; s < layer.kernel_w; ++s) {
                            const int ix = x * layer.stride + s - layer.padding;
                            if (ix < 0 || ix >= layer.in_w) continue;
                            if (spikes.get(t, c, iy, ix)) acc += weights.at(k, c, r, s);
                        }
                    }
                }
                out.at(k, y, x) = wrap_to_bits(acc, p.vmem_bits);
            }
        }
    }
    return out;
}

VmemTensor fc_accumulate(const SpikeTensor& spikes, int t, const WeightTensor& weights,
                         const LayerSpec& layer, const PrecisionMode& p) {
    if (weights.is_conv()) throw ShapeMismatch("fc layer needs (out,in) weights");
    const int in_count = layer.in_channels;
    const int out_count = layer.out_channels;
    if (weights.dims()[0] != out_count || weights.dims()[1] != in_count) {
        throw ShapeMismatch("fc weight dims do not match the layer");
    }
    const std::size_t per_t = static_cast<std::size_t>(spikes.c()) * spikes.h() * spikes.w();
    if (per_t != static_cast<std::size_t>(in_count)) {
        throw ShapeMismatch("fc input flatten size does not match the layer");
    }
    const std::size_t base = static_cast<std::size_t>(t) * per_t;
    VmemTensor out({out_count});
    for (int o = 0; o < out_count; ++o) {
        std::int64_t acc = 0;
        for (int i = 0; i < in_count; ++i) {
            if (spikes.get_linear(base + i)) acc += weights.at(o, i);
        }
        out.set_linear(o, wrap_to_bits(acc, p.vmem_bits));
    }
    return out;
}

std::vector<std::uint8_t> neuron_update(VmemTensor& vmem, const VmemTensor& input,
                                        const NeuronSpec& n, const PrecisionMode& p) {
    if (vmem.size() != input.size()) throw ShapeMismatch("neuron state/input size mismatch");
    std::vector<std::uint8_t> spikes(vmem.size(), 0);
    const std::int64_t leak = (n.model == NeuronModel::kLIF) ? n.leak : 0;
    for (std::size_t i = 0; i < vmem.size(); ++i) {
        std::int32_t v = wrap_to_bits(static_cast<std::int64_t>(vmem.get_linear(i)) +
                                          input.get_linear(i) - leak,
                                      p.vmem_bits);
        if (v >= n.threshold) {
            spikes[i] = 1;
            v = (n.reset == ResetKind::kHard)
                    ? 0
                    : wrap_to_bits(static_cast<std::int64_t>(v) - n.threshold, p.vmem_bits);
        }
        vmem.set_linear(i, v);
    }
    return spikes;
}

void maxpool_timestep(const SpikeTensor& in, int t, const LayerSpec& layer, SpikeTensor& out) {
    const int oh = layer.out_h(), ow = layer.out_w();
    if (out.c() != layer.out_channels || out.h() != oh || out.w() != ow) {
        throw ShapeMismatch("maxpool output dims do not match the layer");
    }
    if (in.c() != layer.in_channels || in.h() != layer.in_h || in.w() != layer.in_w) {
        throw ShapeMismatch("maxpool input dims do not match the layer");
    }
    for (int c = 0; c < layer.in_channels; ++c) {
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x) {
                bool any = false;
                for (int r = 0; r < layer.kernel_h && !any; ++r) {
                    for (int s = 0; s < layer.kernel_w && !any; ++s) {
                        any = in.get(t, c, y * layer.stride + r, x * layer.stride + s);
                    }
                }
                out.set(t, c, y, x, any);
            }
        }
    }
}

GoldenResult run_network(const NetworkSpec& net, const std::vector<WeightTensor>& weights,
                         const SpikeTensor& input) {
    if (static_cast<int>(weights.size()) != net.weighted_layer_count()) {
        throw ShapeMismatch("weight tensor count does not match Conv/FC layer count");
    }
    if (input.t() != net.timesteps || input.c() != net.input_channels ||
        input.h() != net.input_h || input.w() != net.input_w) {
        throw ShapeMismatch("input tensor dims do not match the network");
    }

    GoldenResult result;
    result.layer_outputs.reserve(net.layers.size());
    result.input_sparsity.assign(net.layers.size(), {});

    // Persistent membrane state per weighted layer.
    std::vector<VmemTensor> vmems;
    for (const auto& l : net.layers) {
        if (l.kind == LayerKind::kConv) {
            vmems.emplace_back(std::vector<int>{l.out_channels, l.out_h(), l.out_w()});
        } else if (l.kind == LayerKind::kFC) {
            vmems.emplace_back(std::vector<int>{l.out_channels});
        }
        const int oh = (l.kind == LayerKind::kFC) ? 1 : l.out_h();
        const int ow = (l.kind == LayerKind::kFC) ? 1 : l.out_w();
        result.layer_outputs.emplace_back(net.timesteps, l.out_channels, oh, ow);
    }

    for (int t = 0; t < net.timesteps; ++t) {
        const SpikeTensor* current = &input;
        int weighted = 0;
        for (std::size_t li = 0; li < net.layers.size(); ++li) {
            const LayerSpec& l = net.layers[li];
            SpikeTensor& out = result.layer_outputs[li];
            result.input_sparsity[li].push_back(current->sparsity_at(t));
            if (l.kind == LayerKind::kMaxPool) {
                maxpool_timestep(*current, t, l, out);
            } else {
                VmemTensor acc = (l.kind == LayerKind::kConv)
                                     ? conv_accumulate(*current, t, weights[weighted], l, net.precision)
                                     : fc_accumulate(*current, t, weights[weighted], l, net.precision);
                const auto flags = neuron_update(vmems[weighted], acc, net.neuron, net.precision);
                const std::size_t per_t = flags.size();
                const std::size_t base = static_cast<std::size_t>(t) * per_t;
                for (std::size_t i = 0; i < per_t; ++i) {
                    if (flags[i]) out.set_linear(base + i, true);
                }
                ++weighted;
            }
            current = &out;
        }
    }
    result.final_vmems = std::move(vmems);
    return result;
}

}  // namespace spikecim
