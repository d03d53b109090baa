// SPDX-License-Identifier: Apache-2.0
#include "spikecim/arch.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace spikecim {

PrecisionMode validate_precision(int weight_bits) {
    if (weight_bits != 4 && weight_bits != 6 && weight_bits != 8) {
        throw UnsupportedPrecision(weight_bits);
    }
    // 48-bit rows must split into an exact number of weight fields.
    PrecisionMode p;
    p.weight_bits = weight_bits;
    p.vmem_bits = 2 * weight_bits - 1;
    return p;
}

int weight_fields_per_row(const PrecisionMode& p) { return 48 / p.weight_bits; }

int neurons_per_macro(const PrecisionMode& p) { return weight_fields_per_row(p) * 16; }

int parallel_channels(Mode mode, const PrecisionMode& p) {
    const int per_macro = weight_fields_per_row(p);
    return mode == Mode::kMode1 ? 3 * per_macro : per_macro;
}

void NeuronSpec::validate(const PrecisionMode& p) const {
    const std::int32_t lo = min_signed(p.vmem_bits);
    const std::int32_t hi = max_signed(p.vmem_bits);
    if (threshold < lo || threshold > hi) {
        throw ValidationError("neuron threshold " + std::to_string(threshold) +
                              " not representable in " + std::to_string(p.vmem_bits) + " bits");
    }
    if (leak < 0) {
        throw ValidationError("neuron leak must be non-negative");
    }
    if (model == NeuronModel::kIF && leak != 0) {
        throw ValidationError("IF neurons take no leak (got " + std::to_string(leak) + ")");
    }
    if (leak > hi) {
        throw ValidationError("neuron leak " + std::to_string(leak) +
                              " not representable in " + std::to_string(p.vmem_bits) + " bits");
    }
}

void ArchParams::validate() const {
    if (macro_weight_rows <= 0 || macro_vmem_rows <= 0 || macro_cols != 48) {
        throw ValidationError("compute macro geometry must be N weight rows x 48 columns");
    }
    if (ifspad_cols * 2 != macro_vmem_rows) {
        throw ValidationError("IFspad columns x 2 must equal Vmem rows per macro");
    }
    if (ifspad_rows != macro_weight_rows) {
        throw ValidationError("IFspad rows must equal weight rows per macro");
    }
    if (neuron_partial_rows != macro_vmem_rows || neuron_full_rows != macro_vmem_rows) {
        throw ValidationError("neuron macro partial/full row counts must match Vmem rows");
    }
    if (fifo_depth < 1) {
        throw ValidationError("FIFO depth must be at least 1");
    }
    if (n_compute_units != 9 || n_neuron_units != 3) {
        throw ValidationError("core requires 9 compute units and 3 neuron units");
    }
    if (clock_mhz < 50.0 || clock_mhz > 150.0) {
        throw ValidationError("clock must lie in 50-150 MHz");
    }
    if (parity_switch_cycles < 0) {
        throw ValidationError("parity switch cycles must be non-negative");
    }
}

void EnergyParams::validate() const {
    const double vals[] = {e_read_cycle, e_compute_cycle, e_store_cycle, e_parity_switch,
                           e_ifspad_write, e_ifspad_read, e_fifo_op, e_xfer_word,
                           e_neuron_cycle, e_leakage_per_cycle, op_count_scale};
    for (double v : vals) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("energy parameters must be finite and non-negative");
        }
    }
}

namespace {

const std::map<std::string, double EnergyParams::*>& energy_fields() {
    static const std::map<std::string, double EnergyParams::*> fields = {
        {"e_read_cycle", &EnergyParams::e_read_cycle},
        {"e_compute_cycle", &EnergyParams::e_compute_cycle},
        {"e_store_cycle", &EnergyParams::e_store_cycle},
        {"e_parity_switch", &EnergyParams::e_parity_switch},
        {"e_ifspad_write", &EnergyParams::e_ifspad_write},
        {"e_ifspad_read", &EnergyParams::e_ifspad_read},
        {"e_fifo_op", &EnergyParams::e_fifo_op},
        {"e_xfer_word", &EnergyParams::e_xfer_word},
        {"e_neuron_cycle", &EnergyParams::e_neuron_cycle},
        {"e_leakage_per_cycle", &EnergyParams::e_leakage_per_cycle},
        {"op_count_scale", &EnergyParams::op_count_scale},
    };
    return fields;
}

}  // namespace

EnergyParams EnergyParams::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open energy config: " + path);
    }
    EnergyParams e;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, eq;
        double value;
        if (!(ls >> key)) continue;  // blank
        if (!(ls >> eq >> value) || eq != "=") {
            throw ParseError("energy config line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        }
        const auto it = energy_fields().find(key);
        if (it == energy_fields().end()) {
            throw ParseError("energy config line " + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
        }
        e.*(it->second) = value;
    }
    e.validate();
    return e;
}

void EnergyParams::save(const std::string& path, const std::string& header_comment) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write energy config: " + path);
    }
    if (!header_comment.empty()) {
        std::istringstream hc(header_comment);
        std::string line;
        while (std::getline(hc, line)) out << "# " << line << "\n";
    }
    out.precision(17);
    for (const auto& [key, member] : energy_fields()) {
        out << key << " = " << this->*member << "\n";
    }
}

std::int32_t wrap_to_bits(std::int64_t value, int bits) {
    const std::uint64_t mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
    std::uint64_t m = static_cast<std::uint64_t>(value) & mask;
    if (bits < 64 && (m & (1ULL << (bits - 1)))) {
        m |= ~mask;  // sign-extend
    }
    return static_cast<std::int32_t>(static_cast<std::int64_t>(m));
}

std::int32_t min_signed(int bits) { return -(std::int32_t{1} << (bits - 1)); }
std::int32_t max_signed(int bits) { return (std::int32_t{1} << (bits - 1)) - 1; }

}  // namespace spikecim
