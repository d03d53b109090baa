// SPDX-License-Identifier: Apache-2.0
#include "spikecim/tensor.hpp"

#include <bit>

#include "spikecim/rng.hpp"

namespace spikecim {

SpikeTensor::SpikeTensor(int t, int c, int h, int w) : t_(t), c_(c), h_(h), w_(w) {
    if (t <= 0 || c <= 0 || h <= 0 || w <= 0) {
        throw ShapeMismatch("spike tensor dims must be positive");
    }
    bytes_.assign((size() + 7) / 8, 0);
}

std::size_t SpikeTensor::count_ones() const {
    std::size_t n = 0;
    for (std::uint8_t b : bytes_) n += static_cast<std::size_t>(std::popcount(b));
    return n;
}

std::size_t SpikeTensor::count_ones_at(int t) const {
    const std::size_t per_t = static_cast<std::size_t>(c_) * h_ * w_;
    const std::size_t base = static_cast<std::size_t>(t) * per_t;
    std::size_t n = 0;
    for (std::size_t i = 0; i < per_t; ++i) n += get_linear(base + i);
    return n;
}

double SpikeTensor::sparsity_at(int t) const {
    const double per_t = static_cast<double>(c_) * h_ * w_;
    return 1.0 - static_cast<double>(count_ones_at(t)) / per_t;
}

SpikeTensor SpikeTensor::bernoulli(int t, int c, int h, int w, double sparsity,
                                   std::uint64_t seed) {
    SpikeTensor out(t, c, h, w);
    SplitMix64 rng(seed);
    const double p = 1.0 - sparsity;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.bernoulli(p)) out.set_linear(i, true);
    }
    return out;
}

WeightTensor WeightTensor::conv(int k, int c, int r, int s) {
    if (k <= 0 || c <= 0 || r <= 0 || s <= 0) {
        throw ShapeMismatch("conv weight dims must be positive");
    }
    WeightTensor w;
    w.dims_ = {k, c, r, s};
    w.data_.assign(static_cast<std::size_t>(k) * c * r * s, 0);
    return w;
}

WeightTensor WeightTensor::fc(int out, int in) {
    if (out <= 0 || in <= 0) {
        throw ShapeMismatch("fc weight dims must be positive");
    }
    WeightTensor w;
    w.dims_ = {out, in};
    w.data_.assign(static_cast<std::size_t>(out) * in, 0);
    return w;
}

namespace {
void fill_random(std::vector<std::int8_t>& data, const PrecisionMode& p, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const int lo = min_signed(p.weight_bits);
    const int hi = max_signed(p.weight_bits);
    for (auto& v : data) v = static_cast<std::int8_t>(rng.uniform_int(lo, hi));
}
}  // namespace

WeightTensor WeightTensor::random_conv(int k, int c, int r, int s, const PrecisionMode& p,
                                       std::uint64_t seed) {
    WeightTensor w = conv(k, c, r, s);
    fill_random(w.data_, p, seed);
    return w;
}

WeightTensor WeightTensor::random_fc(int out, int in, const PrecisionMode& p,
                                     std::uint64_t seed) {
    WeightTensor w = fc(out, in);
    fill_random(w.data_, p, seed);
    return w;
}

void WeightTensor::validate_range(const PrecisionMode& p) const {
    const int lo = min_signed(p.weight_bits);
    const int hi = max_signed(p.weight_bits);
    for (std::int8_t v : data_) {
        if (v < lo || v > hi) {
            throw ValidationError("weight value " + std::to_string(int(v)) +
                                  " outside " + std::to_string(p.weight_bits) + "-bit range");
        }
    }
}

VmemTensor::VmemTensor(std::vector<int> dims) : dims_(std::move(dims)) {
    std::size_t n = 1;
    for (int d : dims_) {
        if (d <= 0) throw ShapeMismatch("vmem tensor dims must be positive");
        n *= static_cast<std::size_t>(d);
    }
    data_.assign(n, 0);
}

}  // namespace spikecim
