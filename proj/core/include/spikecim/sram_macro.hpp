// SPDX-License-Identifier: Apache-2.0
//
// Bit-accurate model of the 160x48 compute macro and 72x48 neuron macro:
// read-bitline switch column maps per precision and parity, the NOR/AND
// bitline read, the three-stage read/compute/store ripple accumulation, and
// the fixed-latency neuron pass with conditional-write reset.
//
// Column conventions (documented once, used everywhere):
//   * Bit lines are numbered 0..47 left to right; bit i of a field stored at
//     columns [lo, lo+width) lives at column lo+i (LSB at lo).
//   * Weight field j occupies columns [j*Wb, (j+1)*Wb).  The odd-parity
//     cycle drives even-indexed fields j = 0,2,...; the even-parity cycle
//     drives odd-indexed fields j = 1,3,...
//   * Field pair 2k/2k+1 shares the Vmem span [2k*Wb, 2k*Wb + Bvmem - 1];
//     parity selects the Vmem row (even -> 2X, odd -> 2X+1).
//   * A macro-local channel index c maps to weight field j = c.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spikecim/arch.hpp"

namespace spikecim {

enum class Parity : std::uint8_t { kEven = 0, kOdd = 1 };

inline Parity parity_of_channel(int channel) {
    return (channel % 2 == 0) ? Parity::kOdd : Parity::kEven;
}
inline int vmem_row_of(int x, Parity parity) {
    return 2 * x + (parity == Parity::kOdd ? 1 : 0);
}

enum class RowRole : std::uint8_t { kWeight, kVmem, kPartial, kFull, kParam };

// Binary state of one SRAM macro; each 48-bit row is held in a 64-bit word.
class SramState {
  public:
    static SramState compute_macro(const ArchParams& arch);
    static SramState neuron_macro(const ArchParams& arch);

    int rows() const { return static_cast<int>(bits_.size()); }
    int cols() const { return cols_; }
    RowRole role(int row) const { return roles_[row]; }

    bool get(int row, int col) const { return (bits_[row] >> col) & 1; }
    void set(int row, int col, bool v) {
        const std::uint64_t m = 1ULL << col;
        bits_[row] = v ? (bits_[row] | m) : (bits_[row] & ~m);
    }

    std::uint64_t read_field(int row, int col_lo, int width) const {
        return (bits_[row] >> col_lo) & ((1ULL << width) - 1);
    }
    void write_field(int row, int col_lo, int width, std::uint64_t value) {
        const std::uint64_t mask = ((1ULL << width) - 1) << col_lo;
        bits_[row] = (bits_[row] & ~mask) | ((value << col_lo) & mask);
    }
    std::int32_t read_field_signed(int row, int col_lo, int width) const {
        return wrap_to_bits(static_cast<std::int64_t>(read_field(row, col_lo, width)), width);
    }
    void write_field_signed(int row, int col_lo, int width, std::int32_t value) {
        write_field(row, col_lo, width, static_cast<std::uint64_t>(value) & ((1ULL << width) - 1));
    }

    void clear_row(int row) { bits_[row] = 0; }

    // First physical row of the compute macro's Vmem region / the neuron
    // macro's full-Vmem and parameter regions.
    int vmem_base() const { return vmem_base_; }
    int full_base() const { return full_base_; }
    int param_base() const { return param_base_; }

    // Stable textual hex dump with role annotations (48 bits, MSB first).
    std::string dump() const;

  private:
    SramState(int rows, int cols) : cols_(cols), bits_(rows, 0), roles_(rows, RowRole::kWeight) {}
    int cols_;
    int vmem_base_ = 0, full_base_ = 0, param_base_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<RowRole> roles_;
};

// One unit of in-memory accumulation work: weight row Y into the Vmem row
// selected by column X and the parity.
struct AddressTuple {
    int y = 0;
    int x = 0;
    Parity parity = Parity::kEven;

    friend bool operator==(const AddressTuple&, const AddressTuple&) = default;
};

struct SwitchGroup {
    int weight_col_lo;
    int weight_width;
    int vmem_col_lo;
    int vmem_width;
};

// Read-bitline switch configuration for one (precision, parity) pair:
// 48/(2*Wb) disjoint weight-field -> Vmem-field connections.
struct SwitchMap {
    PrecisionMode precision;
    Parity parity;
    std::vector<SwitchGroup> groups;
};

SwitchMap switch_map(const PrecisionMode& p, Parity parity);

// Read stage: senses a weight cell and a Vmem cell on the shared bitline
// pair, producing the latched NOR and AND outputs.
struct BitlineOut {
    int nor;
    int and_;
};
BitlineOut bitline_read(int weight_bit, int vmem_bit);

// Compute stage: full-adder over the latched NOR/AND outputs and carry-in.
struct AdderOut {
    int sum;
    int carry_out;
};
AdderOut column_add(int nor, int and_, int carry_in);

// Applies one accumulation: every weight field of the tuple's parity in row
// Y, sign-extended to the Vmem width, is ripple-added into its mapped field
// of Vmem row 2X+parity.  Carry never crosses a field boundary.  When
// `configured` is given and disagrees with the tuple, throws ParityMismatch.
void accumulate(SramState& state, const AddressTuple& t, const PrecisionMode& p,
                std::optional<Parity> configured = std::nullopt);

// Per-operation pipeline trace.  Operation i occupies Read at issue_cycle,
// Compute at issue_cycle+1 and Store at issue_cycle+2; consecutive
// operations overlap with exactly one cycle of offset unless separated by a
// parity switch.
struct PipelineTrace {
    struct Op {
        long issue_cycle;
        AddressTuple tuple;
    };
    struct Switch {
        long start_cycle;
        int duration;
    };
    std::vector<Op> ops;
    std::vector<Switch> switches;

    std::string to_csv() const;
};

struct OpSequenceResult {
    long cycles = 0;
    long switches = 0;
    PipelineTrace trace;
};

// Runs an ordered op sequence through the three-stage pipeline.  The
// functional result equals applying `accumulate` atomically in order; the
// cycle count is #ops + 2 (fill/drain) + parity_switch_cycles per parity
// transition, and 0 for an empty sequence.
OpSequenceResult run_op_sequence(SramState& state, std::span<const AddressTuple> ops,
                                 const PrecisionMode& p, const ArchParams& arch,
                                 bool record_trace = false);

// Writes the threshold and leak fields into the neuron macro's parameter
// rows (threshold in the first parameter row, leak in the second).
void load_neuron_params(SramState& neuron, const NeuronSpec& n, const PrecisionMode& p,
                        const ArchParams& arch);

struct NeuronPassResult {
    // Spike flags indexed [x * fields_per_row + channel].
    std::vector<std::uint8_t> spikes;
    long cycles = 0;  // always 2*32 + 2 = 66
};

// Full neuron pass: for every partial row, full += partial (minus leak once
// for LIF), compare against the threshold, emit a spike flag and apply the
// hard/soft reset via conditional write.  Latency is constant regardless of
// the data.
NeuronPassResult neuron_pass(SramState& neuron, const NeuronSpec& n, const PrecisionMode& p,
                             const ArchParams& arch);

}  // namespace spikecim
