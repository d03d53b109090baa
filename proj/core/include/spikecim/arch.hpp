// SPDX-License-Identifier: Apache-2.0
//
// Architecture description types: precision configuration, neuron model
// parameters, array geometry and per-event energy coefficients.  All types
// are immutable after validation and safe to share across threads.
#pragma once

#include <cstdint>
#include <string>

#include "spikecim/errors.hpp"

namespace spikecim {

// Core operating mode.  Mode 1 runs three parallel chains of three compute
// units plus one neuron unit each (more parallel output channels); Mode 2
// chains all nine compute units into one neuron unit (more fan-in).
enum class Mode { kMode1, kMode2 };

inline const char* mode_name(Mode m) { return m == Mode::kMode1 ? "mode1" : "mode2"; }

// Weight / membrane-potential bit widths.  The Vmem width is tied to the
// weight width: vmem_bits = 2 * weight_bits - 1, giving 4/7, 6/11 and 8/15.
struct PrecisionMode {
    int weight_bits = 4;
    int vmem_bits = 7;

    friend bool operator==(const PrecisionMode&, const PrecisionMode&) = default;
};

// Validates a weight width and derives the paired Vmem width.
// Throws UnsupportedPrecision for widths outside {4, 6, 8}.
PrecisionMode validate_precision(int weight_bits);

// Weight fields per 48-bit macro row: 48 / weight_bits (12, 8 or 6).
int weight_fields_per_row(const PrecisionMode& p);

// Output neurons held by one compute macro: (48 / weight_bits) * 16.
int neurons_per_macro(const PrecisionMode& p);

// Output channels processed in parallel by the core:
// 3 * 48/weight_bits in Mode 1, 48/weight_bits in Mode 2.
int parallel_channels(Mode mode, const PrecisionMode& p);

enum class NeuronModel { kIF, kLIF };
enum class ResetKind { kHard, kSoft };

struct NeuronSpec {
    NeuronModel model = NeuronModel::kIF;
    ResetKind reset = ResetKind::kHard;
    std::int32_t threshold = 1;
    std::int32_t leak = 0;  // applied once per timestep, LIF only

    // Threshold and leak must be representable at the Vmem width, leak must
    // be non-negative and zero for IF neurons.
    void validate(const PrecisionMode& p) const;
};

// Fixed array geometry and global timing knobs.  Defaults describe the
// fabricated core; tests may shrink some fields.
struct ArchParams {
    int n_compute_units = 9;
    int n_neuron_units = 3;

    int macro_weight_rows = 128;  // compute macro: weight storage rows
    int macro_vmem_rows = 32;     // compute macro: partial-Vmem rows
    int macro_cols = 48;

    int neuron_partial_rows = 32;
    int neuron_full_rows = 32;
    int neuron_param_rows = 8;

    int ifspad_rows = 128;
    int ifspad_cols = 16;
    int fifo_depth = 16;

    double clock_mhz = 50.0;       // supported range 50-150
    int parity_switch_cycles = 1;  // peripheral reconfiguration latency

    // Partial-Vmem block transfer: 32 rows of 48 bits, one word per cycle.
    int xfer_words_per_block = 32;

    int macro_rows() const { return macro_weight_rows + macro_vmem_rows; }
    int neuron_macro_rows() const {
        return neuron_partial_rows + neuron_full_rows + neuron_param_rows;
    }

    void validate() const;
};

// Per-event energy coefficients in pJ plus the operation-count scale used to
// translate accumulation counts into reported operations.  Values default to
// unit-scale placeholders; `calibrate` fits them to measurement targets.
struct EnergyParams {
    double e_read_cycle = 0.4;     // macro pipeline Read stage, per op
    double e_compute_cycle = 0.3;  // macro pipeline Compute stage, per op
    double e_store_cycle = 0.3;    // macro pipeline Store stage, per op
    double e_parity_switch = 1.0 * 5.0 / 9.0;  // per even/odd reconfiguration
    double e_ifspad_write = 0.2;   // per 16-bit row access
    double e_ifspad_read = 0.2;    // per 16-bit row access
    double e_fifo_op = 0.05;       // per FIFO push or pop
    double e_xfer_word = 0.5;      // per 48-bit inter-unit word
    double e_neuron_cycle = 1.0;   // per neuron-macro cycle
    double e_leakage_per_cycle = 0.0;  // static pJ per cycle per unit
    double op_count_scale = 1.0;

    double stage_sum() const { return e_read_cycle + e_compute_cycle + e_store_cycle; }

    void validate() const;

    // Text config round trip ("key = value" lines, '#' comments).
    static EnergyParams load(const std::string& path);
    void save(const std::string& path, const std::string& header_comment = "") const;
};

// Two's-complement wraparound of an arbitrary integer to `bits` width,
// returned as a signed value in [-2^(bits-1), 2^(bits-1) - 1].
std::int32_t wrap_to_bits(std::int64_t value, int bits);

// Smallest/largest signed values representable at `bits` width.
std::int32_t min_signed(int bits);
std::int32_t max_signed(int bits);

}  // namespace spikecim
