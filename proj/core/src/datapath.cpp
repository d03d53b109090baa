// SPDX-License-Identifier: Apache-2.0
#include "spikecim/datapath.hpp"

#include <bit>
#include <deque>

namespace spikecim {

long IFspad::set_bits() const {
    long n = 0;
    for (std::uint16_t r : rows) n += std::popcount(r);
    return n;
}

IFspad im2col_load(const SpikeTensor& input, int t, const TileWindow& tile,
                   const ArchParams& arch) {
    if (tile.rf_rows > arch.ifspad_rows) {
        throw TileOverflow("receptive-field slice of " + std::to_string(tile.rf_rows) +
                           " rows exceeds the " + std::to_string(arch.ifspad_rows) +
                           "-row scratchpad");
    }
    if (static_cast<int>(tile.positions.size()) > arch.ifspad_cols) {
        throw TileOverflow("tile holds more output positions than scratchpad columns");
    }
    const LayerSpec& l = tile.layer;
    IFspad pad;
    pad.rows_used = tile.rf_rows;
    pad.rows.assign(tile.rf_rows, 0);

    if (l.kind == LayerKind::kFC) {
        // FC inputs occupy a single column; spikes walk down the rows.
        const std::size_t per_t = static_cast<std::size_t>(input.c()) * input.h() * input.w();
        const std::size_t base = static_cast<std::size_t>(t) * per_t;
        for (int r = 0; r < tile.rf_rows; ++r) {
            const std::size_t g = static_cast<std::size_t>(tile.rf_begin) + r;
            if (input.get_linear(base + g)) pad.rows[r] = 1;
        }
        return pad;
    }

    const int rs = l.kernel_h * l.kernel_w;
    for (int r = 0; r < tile.rf_rows; ++r) {
        const int g = tile.rf_begin + r;
        const int c = g / rs;
        const int kr = (g % rs) / l.kernel_w;
        const int ks = g % l.kernel_w;
        std::uint16_t bits = 0;
        for (std::size_t slot = 0; slot < tile.positions.size(); ++slot) {
            const int pos = tile.positions[slot];
            const int oh = pos / l.out_w();
            const int ow = pos % l.out_w();
            const int iy = oh * l.stride + kr - l.padding;
            const int ix = ow * l.stride + ks - l.padding;
            if (iy < 0 || iy >= l.in_h || ix < 0 || ix >= l.in_w) continue;
            if (input.get(t, c, iy, ix)) bits |= static_cast<std::uint16_t>(1u << slot);
        }
        pad.rows[r] = bits;
    }
    return pad;
}

std::vector<int> detect_spikes(std::uint16_t row_bits) {
    std::vector<int> cols;
    while (row_bits) {
        const int x = std::countr_zero(row_bits);
        cols.push_back(x);
        row_bits = static_cast<std::uint16_t>(row_bits & (row_bits - 1));
    }
    return cols;
}

namespace {

// Shared controller decision: what should the SRAM controller do this cycle
// given FIFO occupancy?  Parity changes only when the active FIFO is empty
// or the other FIFO is full.
enum class CtrlAction { kIdle, kIssue, kSwitch };

CtrlAction controller_step(Parity active, std::size_t even_size, std::size_t odd_size,
                           int fifo_depth) {
    const bool even_full = even_size >= static_cast<std::size_t>(fifo_depth);
    const bool odd_full = odd_size >= static_cast<std::size_t>(fifo_depth);
    if (active == Parity::kEven) {
        if (even_size == 0) return odd_size > 0 ? CtrlAction::kSwitch : CtrlAction::kIdle;
        if (odd_full) return CtrlAction::kSwitch;
        return CtrlAction::kIssue;
    }
    if (odd_size == 0) return even_size > 0 ? CtrlAction::kSwitch : CtrlAction::kIdle;
    if (even_full) return CtrlAction::kSwitch;
    return CtrlAction::kIssue;
}

}  // namespace

PingPongResult pingpong_run(std::span<const std::pair<int, int>> tuples, int fifo_depth) {
    PingPongResult res;
    std::deque<std::pair<int, int>> even, odd;
    std::size_t cursor = 0;
    Parity active = Parity::kEven;

    const auto refill = [&] {
        while (cursor < tuples.size() && even.size() < static_cast<std::size_t>(fifo_depth)) {
            even.push_back(tuples[cursor++]);
        }
    };

    while (true) {
        refill();
        const CtrlAction action = controller_step(active, even.size(), odd.size(), fifo_depth);
        if (action == CtrlAction::kIdle) break;  // untimed run: idle means done
        if (action == CtrlAction::kSwitch) {
            active = active == Parity::kEven ? Parity::kOdd : Parity::kEven;
            ++res.switches;
            continue;
        }
        if (active == Parity::kEven) {
            const auto [y, x] = even.front();
            even.pop_front();
            res.ops.push_back({y, x, Parity::kEven});
            odd.emplace_back(y, x);
        } else {
            const auto [y, x] = odd.front();
            odd.pop_front();
            res.ops.push_back({y, x, Parity::kOdd});
        }
    }
    return res;
}

DatapathResult run_datapath(const IFspad& pad, const ArchParams& arch) {
    DatapathResult res;
    DatapathStats& st = res.stats;
    st.il_writes = pad.rows_used;
    if (pad.rows_used == 0) return res;

    std::deque<std::pair<int, int>> even, odd;
    const std::size_t depth = static_cast<std::size_t>(arch.fifo_depth);

    // Detector state: next row to fetch and bits left in the latched row.
    int next_row = 0;
    int latched_y = 0;
    std::uint16_t latched = 0;

    Parity active = Parity::kEven;
    int switch_remaining = 0;
    long last_issue = 0;
    long last_activity = 0;
    long cycle = 0;

    const auto detector_done = [&] { return next_row == pad.rows_used && latched == 0; };

    while (true) {
        if (detector_done() && even.empty() && odd.empty() && switch_remaining == 0) break;
        ++cycle;

        // Input loader: row (cycle-1) is written during this cycle, so the
        // detector may fetch row r from cycle r+2 onwards.

        // Detector: one action per cycle (fetch a row or extract one spike).
        if (latched != 0) {
            if (even.size() < depth) {
                const int x = std::countr_zero(latched);
                latched = static_cast<std::uint16_t>(latched & (latched - 1));
                even.emplace_back(latched_y, x);
                ++st.tuples;
                ++st.fifo_ops;
            } else {
                ++st.detector_stall_cycles;
            }
            last_activity = cycle;
        } else if (next_row < pad.rows_used && cycle >= next_row + 2) {
            latched = pad.rows[next_row];
            latched_y = next_row;
            ++next_row;
            ++st.ifspad_row_reads;
            last_activity = cycle;
        }

        // SRAM controller + macro: one accumulation issue per cycle, stalled
        // by parity reconfiguration.
        if (switch_remaining > 0) {
            --switch_remaining;
            last_activity = cycle;
            continue;
        }
        for (int attempt = 0; attempt < 2; ++attempt) {
            const CtrlAction action = controller_step(active, even.size(), odd.size(),
                                                      arch.fifo_depth);
            if (action == CtrlAction::kIdle) break;
            if (action == CtrlAction::kSwitch) {
                active = active == Parity::kEven ? Parity::kOdd : Parity::kEven;
                ++st.parity_switches;
                if (arch.parity_switch_cycles > 0) {
                    switch_remaining = arch.parity_switch_cycles - 1;  // this cycle counts
                    last_activity = cycle;
                    break;
                }
                continue;  // zero-cost switch: issue in the same cycle
            }
            if (active == Parity::kEven) {
                const auto [y, x] = even.front();
                even.pop_front();
                ++st.fifo_ops;  // even pop
                res.ops.push_back({y, x, Parity::kEven});
                odd.emplace_back(y, x);
                ++st.fifo_ops;  // odd push
            } else {
                const auto [y, x] = odd.front();
                odd.pop_front();
                ++st.fifo_ops;  // odd pop
                res.ops.push_back({y, x, Parity::kOdd});
            }
            ++st.macro_ops;
            last_issue = cycle;
            last_activity = cycle;
            break;
        }
    }

    // Pipeline drain: the last issued op stores two cycles after issue.
    st.cycles = std::max(last_activity, last_issue > 0 ? last_issue + 2 : 0);
    return res;
}

DatapathResult run_tile_datapath(const SpikeTensor& input, int t, const TileWindow& tile,
                                 const ArchParams& arch) {
    const IFspad pad = im2col_load(input, t, tile, arch);
    return run_datapath(pad, arch);
}

}  // namespace spikecim
