// SPDX-License-Identifier: Apache-2.0
#include "spikecim/sram_macro.hpp"

#include <sstream>

namespace spikecim {

SramState SramState::compute_macro(const ArchParams& arch) {
    SramState s(arch.macro_rows(), arch.macro_cols);
    s.vmem_base_ = arch.macro_weight_rows;
    for (int r = 0; r < s.rows(); ++r) {
        s.roles_[r] = r < arch.macro_weight_rows ? RowRole::kWeight : RowRole::kVmem;
    }
    return s;
}

SramState SramState::neuron_macro(const ArchParams& arch) {
    SramState s(arch.neuron_macro_rows(), arch.macro_cols);
    s.full_base_ = arch.neuron_partial_rows;
    s.param_base_ = arch.neuron_partial_rows + arch.neuron_full_rows;
    for (int r = 0; r < s.rows(); ++r) {
        s.roles_[r] = r < s.full_base_    ? RowRole::kPartial
                      : r < s.param_base_ ? RowRole::kFull
                                          : RowRole::kParam;
    }
    return s;
}

namespace {
const char* role_tag(RowRole r) {
    switch (r) {
        case RowRole::kWeight: return "wgt ";
        case RowRole::kVmem: return "vmem";
        case RowRole::kPartial: return "part";
        case RowRole::kFull: return "full";
        case RowRole::kParam: return "parm";
    }
    return "?   ";
}
}  // namespace

std::string SramState::dump() const {
    std::ostringstream out;
    char buf[16];
    for (int r = 0; r < rows(); ++r) {
        std::snprintf(buf, sizeof(buf), "%012llx",
                      static_cast<unsigned long long>(bits_[r]));
        out << 'r' << (r < 100 ? (r < 10 ? "00" : "0") : "") << r << ' ' << role_tag(roles_[r])
            << ' ' << buf << '\n';
    }
    return out.str();
}

SwitchMap switch_map(const PrecisionMode& p, Parity parity) {
    const int wb = p.weight_bits;
    const int groups = 48 / (2 * wb);
    SwitchMap map;
    map.precision = p;
    map.parity = parity;
    map.groups.reserve(groups);
    for (int k = 0; k < groups; ++k) {
        const int field = 2 * k + (parity == Parity::kOdd ? 0 : 1);
        map.groups.push_back(SwitchGroup{
            .weight_col_lo = field * wb,
            .weight_width = wb,
            .vmem_col_lo = 2 * k * wb,
            .vmem_width = p.vmem_bits,
        });
    }
    return map;
}

BitlineOut bitline_read(int weight_bit, int vmem_bit) {
    return BitlineOut{.nor = !(weight_bit | vmem_bit), .and_ = weight_bit & vmem_bit};
}

AdderOut column_add(int nor, int and_, int carry_in) {
    const int xor_ = (!nor) & (!and_);  // exactly one operand high
    return AdderOut{.sum = xor_ ^ carry_in, .carry_out = and_ | (xor_ & carry_in)};
}

namespace {

// Ripple-adds the addend bits (sign-extended from addend_width) into the
// field at [col_lo, col_lo+width) of `row`, LSB first.  Every bit position
// goes through the bitline sense and the column adder; carry stays inside
// the field.
void ripple_add_field(SramState& s, int row, int col_lo, int width, std::uint64_t addend,
                      int addend_width) {
    const int sign = static_cast<int>((addend >> (addend_width - 1)) & 1);
    int carry = 0;
    for (int i = 0; i < width; ++i) {
        const int a = i < addend_width ? static_cast<int>((addend >> i) & 1) : sign;
        const int v = s.get(row, col_lo + i);
        const BitlineOut sensed = bitline_read(a, v);
        const AdderOut added = column_add(sensed.nor, sensed.and_, carry);
        s.set(row, col_lo + i, added.sum != 0);
        carry = added.carry_out;
    }
}

}  // namespace

void accumulate(SramState& state, const AddressTuple& t, const PrecisionMode& p,
                std::optional<Parity> configured) {
    if (configured && *configured != t.parity) {
        throw ParityMismatch("macro peripherals configured for the other parity");
    }
    if (t.y < 0 || t.y >= state.vmem_base() || t.x < 0 || t.x >= 16) {
        throw ShapeMismatch("address tuple out of macro bounds");
    }
    const SwitchMap map = switch_map(p, t.parity);
    const int vrow = state.vmem_base() + vmem_row_of(t.x, t.parity);
    for (const SwitchGroup& g : map.groups) {
        const std::uint64_t w = state.read_field(t.y, g.weight_col_lo, g.weight_width);
        ripple_add_field(state, vrow, g.vmem_col_lo, g.vmem_width, w, g.weight_width);
    }
}

OpSequenceResult run_op_sequence(SramState& state, std::span<const AddressTuple> ops,
                                 const PrecisionMode& p, const ArchParams& arch,
                                 bool record_trace) {
    OpSequenceResult res;
    if (ops.empty()) return res;

    long cycle = 1;  // first op enters the Read stage at cycle 1
    std::optional<Parity> configured;
    for (const AddressTuple& t : ops) {
        if (configured && *configured != t.parity) {
            if (record_trace) {
                res.trace.switches.push_back({cycle, arch.parity_switch_cycles});
            }
            cycle += arch.parity_switch_cycles;
            ++res.switches;
        }
        configured = t.parity;
        accumulate(state, t, p, configured);
        if (record_trace) res.trace.ops.push_back({cycle, t});
        ++cycle;
    }
    // Last op issued at cycle-1; its Store stage finishes two cycles later.
    res.cycles = (cycle - 1) + 2;
    return res;
}

std::string PipelineTrace::to_csv() const {
    std::ostringstream out;
    out << "cycle,stage,y,x,parity\n";
    std::size_t sw = 0;
    for (const Op& op : ops) {
        while (sw < switches.size() && switches[sw].start_cycle <= op.issue_cycle) {
            for (int i = 0; i < switches[sw].duration; ++i) {
                out << switches[sw].start_cycle + i << ",W,,,\n";
            }
            ++sw;
        }
        const char parity = op.tuple.parity == Parity::kEven ? 'E' : 'O';
        out << op.issue_cycle << ",R," << op.tuple.y << ',' << op.tuple.x << ',' << parity << '\n';
        out << op.issue_cycle + 1 << ",C," << op.tuple.y << ',' << op.tuple.x << ',' << parity
            << '\n';
        out << op.issue_cycle + 2 << ",S," << op.tuple.y << ',' << op.tuple.x << ',' << parity
            << '\n';
    }
    return out.str();
}

void load_neuron_params(SramState& neuron, const NeuronSpec& n, const PrecisionMode& p,
                        const ArchParams& arch) {
    (void)arch;
    const int threshold_row = neuron.param_base();
    const int leak_row = neuron.param_base() + 1;
    const std::int32_t leak = (n.model == NeuronModel::kLIF) ? n.leak : 0;
    // Vmem spans are identical for both parities; one write per field pair.
    for (const SwitchGroup& g : switch_map(p, Parity::kEven).groups) {
        neuron.write_field_signed(threshold_row, g.vmem_col_lo, g.vmem_width, n.threshold);
        neuron.write_field_signed(leak_row, g.vmem_col_lo, g.vmem_width, leak);
    }
}

NeuronPassResult neuron_pass(SramState& neuron, const NeuronSpec& n, const PrecisionMode& p,
                             const ArchParams& arch) {
    const int fields = weight_fields_per_row(p);
    const int partial_rows = arch.neuron_partial_rows;
    NeuronPassResult res;
    res.spikes.assign(static_cast<std::size_t>(arch.ifspad_cols) * fields, 0);

    const int threshold_row = neuron.param_base();
    const int leak_row = neuron.param_base() + 1;

    for (int v = 0; v < partial_rows; ++v) {
        const int x = v / 2;
        const Parity parity = (v % 2 == 0) ? Parity::kEven : Parity::kOdd;
        const int full_row = neuron.full_base() + v;
        for (const SwitchGroup& g : switch_map(p, parity).groups) {
            // Accumulate the partial Vmem into the full Vmem.
            const std::uint64_t partial = neuron.read_field(v, g.vmem_col_lo, g.vmem_width);
            ripple_add_field(neuron, full_row, g.vmem_col_lo, g.vmem_width, partial, g.vmem_width);
            if (n.model == NeuronModel::kLIF) {
                const std::uint64_t leak = neuron.read_field(leak_row, g.vmem_col_lo, g.vmem_width);
                const std::uint64_t neg =
                    (~leak + 1) & ((1ULL << g.vmem_width) - 1);  // two's complement
                ripple_add_field(neuron, full_row, g.vmem_col_lo, g.vmem_width, neg, g.vmem_width);
            }
            const std::int32_t value = neuron.read_field_signed(full_row, g.vmem_col_lo, g.vmem_width);
            const std::int32_t threshold =
                neuron.read_field_signed(threshold_row, g.vmem_col_lo, g.vmem_width);
            if (value >= threshold) {
                const int channel = 2 * (g.vmem_col_lo / (2 * p.weight_bits)) +
                                    (parity == Parity::kOdd ? 0 : 1);
                res.spikes[static_cast<std::size_t>(x) * fields + channel] = 1;
                // Conditional write: zero on hard reset, subtract the
                // threshold on soft reset.
                if (n.reset == ResetKind::kHard) {
                    neuron.write_field(full_row, g.vmem_col_lo, g.vmem_width, 0);
                } else {
                    const std::uint64_t theta =
                        neuron.read_field(threshold_row, g.vmem_col_lo, g.vmem_width);
                    const std::uint64_t neg = (~theta + 1) & ((1ULL << g.vmem_width) - 1);
                    ripple_add_field(neuron, full_row, g.vmem_col_lo, g.vmem_width, neg,
                                     g.vmem_width);
                }
            }
        }
    }
    // Two cycles per partial row plus pipeline fill/drain, data-independent.
    res.cycles = 2L * partial_rows + 2;
    return res;
}

}  // namespace spikecim
