// SPDX-License-Identifier: Apache-2.0
//
// Value types moved through the golden model and the simulator: binary spike
// tensors (bit-packed), signed weight tensors and membrane-potential tensors.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spikecim/arch.hpp"
#include "spikecim/errors.hpp"

namespace spikecim {

// (T, C, H, W) binary tensor, bit-packed row-major, LSB-first within bytes.
// The packing matches the SPKT file payload byte-for-byte.
class SpikeTensor {
  public:
    SpikeTensor() = default;
    SpikeTensor(int t, int c, int h, int w);

    int t() const { return t_; }
    int c() const { return c_; }
    int h() const { return h_; }
    int w() const { return w_; }
    std::size_t size() const { return static_cast<std::size_t>(t_) * c_ * h_ * w_; }

    std::size_t linear_index(int t, int c, int h, int w) const {
        return ((static_cast<std::size_t>(t) * c_ + c) * h_ + h) * w_ + w;
    }

    bool get(int t, int c, int h, int w) const { return get_linear(linear_index(t, c, h, w)); }
    void set(int t, int c, int h, int w, bool v) { set_linear(linear_index(t, c, h, w), v); }

    bool get_linear(std::size_t i) const { return (bytes_[i >> 3] >> (i & 7)) & 1; }
    void set_linear(std::size_t i, bool v) {
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (i & 7));
        if (v)
            bytes_[i >> 3] |= mask;
        else
            bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }

    std::size_t count_ones() const;
    // Set-bit count restricted to one timestep slice.
    std::size_t count_ones_at(int t) const;
    // 1 - ones/size over one timestep slice.
    double sparsity_at(int t) const;

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

    // Seeded i.i.d. Bernoulli(1 - sparsity) fill.
    static SpikeTensor bernoulli(int t, int c, int h, int w, double sparsity,
                                 std::uint64_t seed);

    friend bool operator==(const SpikeTensor&, const SpikeTensor&) = default;

  private:
    int t_ = 0, c_ = 0, h_ = 0, w_ = 0;
    std::vector<std::uint8_t> bytes_;
};

// Signed integer weights.  Conv shape (K, C, R, S); FC shape (out, in).
class WeightTensor {
  public:
    WeightTensor() = default;
    static WeightTensor conv(int k, int c, int r, int s);
    static WeightTensor fc(int out, int in);

    static WeightTensor random_conv(int k, int c, int r, int s, const PrecisionMode& p,
                                    std::uint64_t seed);
    static WeightTensor random_fc(int out, int in, const PrecisionMode& p, std::uint64_t seed);

    bool is_conv() const { return dims_.size() == 4; }
    const std::vector<int>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    std::int8_t at(int k, int c, int r, int s) const {
        return data_[((static_cast<std::size_t>(k) * dims_[1] + c) * dims_[2] + r) * dims_[3] + s];
    }
    std::int8_t& at(int k, int c, int r, int s) {
        return data_[((static_cast<std::size_t>(k) * dims_[1] + c) * dims_[2] + r) * dims_[3] + s];
    }
    std::int8_t at(int out, int in) const {
        return data_[static_cast<std::size_t>(out) * dims_[1] + in];
    }
    std::int8_t& at(int out, int in) {
        return data_[static_cast<std::size_t>(out) * dims_[1] + in];
    }

    const std::vector<std::int8_t>& data() const { return data_; }
    std::vector<std::int8_t>& data() { return data_; }

    // Throws ValidationError when any value falls outside the weight range.
    void validate_range(const PrecisionMode& p) const;

    friend bool operator==(const WeightTensor&, const WeightTensor&) = default;

  private:
    std::vector<int> dims_;
    std::vector<std::int8_t> data_;
};

// Membrane potentials carried as signed integers; all arithmetic on them
// wraps at vmem_bits.  Shape (K, H, W) for Conv layers, (out) for FC.
class VmemTensor {
  public:
    VmemTensor() = default;
    explicit VmemTensor(std::vector<int> dims);

    const std::vector<int>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }

    std::int32_t get_linear(std::size_t i) const { return data_[i]; }
    void set_linear(std::size_t i, std::int32_t v) { data_[i] = v; }

    std::int32_t at(int k, int h, int w) const {
        return data_[(static_cast<std::size_t>(k) * dims_[1] + h) * dims_[2] + w];
    }
    std::int32_t& at(int k, int h, int w) {
        return data_[(static_cast<std::size_t>(k) * dims_[1] + h) * dims_[2] + w];
    }

    const std::vector<std::int32_t>& data() const { return data_; }
    std::vector<std::int32_t>& data() { return data_; }

    friend bool operator==(const VmemTensor&, const VmemTensor&) = default;

  private:
    std::vector<int> dims_;
    std::vector<std::int32_t> data_;
};

}  // namespace spikecim
