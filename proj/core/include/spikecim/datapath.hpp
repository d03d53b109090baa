// SPDX-License-Identifier: Apache-2.0
//
// Input-side datapath of one compute unit: the hardware im2col loader that
// fills the 128x16 IFspad (padding and stride materialized in the layout),
// the trailing-zero spike detector, and the even/odd ping-pong FIFO
// controller that batches same-parity operations.  A cycle-level co-simulation
// of loader, detector and macro gives each unit's per-timestep delay.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spikecim/network.hpp"
#include "spikecim/sram_macro.hpp"
#include "spikecim/tensor.hpp"

namespace spikecim {

// What one compute unit loads for one (tile, timestep): the tile's output
// positions (at most 16; FC tiles use the single position 0) and this
// macro's slice [rf_begin, rf_begin+rf_rows) of the flattened receptive
// field.  Conv receptive fields flatten channel-major: c*(R*S) + r*S + s.
struct TileWindow {
    LayerSpec layer;
    std::vector<int> positions;  // linear output positions: oh * out_w + ow
    int rf_begin = 0;
    int rf_rows = 0;
};

// IFspad contents for one load: bit X of rows[Y] is the spike feeding weight
// row Y for output-position slot X.  Rows are written in index order, one
// per cycle; the detector may read a row the cycle after it is written.
struct IFspad {
    int rows_used = 0;
    std::vector<std::uint16_t> rows;

    long set_bits() const;
};

// Loads the IFspad for one timestep.  Zero padding appears as 0 bits and the
// stride is applied through position indexing.  Throws TileOverflow when the
// slice exceeds the scratchpad geometry.
IFspad im2col_load(const SpikeTensor& input, int t, const TileWindow& tile,
                   const ArchParams& arch);

// Trailing-zero detector: column indices of set bits, ascending (LSB first).
std::vector<int> detect_spikes(std::uint16_t row_bits);

// -- Ping-pong FIFO controller ----------------------------------------------
//
// Tuples enter the even FIFO; after an even-cycle accumulation the same
// tuple is re-enqueued into the odd FIFO and is discarded after its odd
// accumulation.  The controller changes parity only when the active FIFO is
// empty or the opposite FIFO is full.

struct PingPongResult {
    std::vector<AddressTuple> ops;  // issue order, one even and one odd per tuple
    long switches = 0;              // parity transitions in the op sequence
};

// Untimed controller run over a fully buffered tuple backlog (y, x pairs in
// scan order).
PingPongResult pingpong_run(std::span<const std::pair<int, int>> tuples, int fifo_depth);

// -- Cycle-level co-simulation ----------------------------------------------

struct DatapathStats {
    long cycles = 0;            // makespan of loader + detector + macro
    long il_writes = 0;         // IFspad row writes
    long ifspad_row_reads = 0;  // detector row fetches
    long tuples = 0;            // spikes found
    long fifo_ops = 0;          // pushes + pops across both FIFOs
    long macro_ops = 0;         // accumulation cycles issued (2 per tuple)
    long parity_switches = 0;
    long detector_stall_cycles = 0;  // detector blocked on full FIFOs
};

struct DatapathResult {
    DatapathStats stats;
    std::vector<AddressTuple> ops;  // macro issue order
};

// Runs loader, detector, FIFOs and macro issue through one shared clock.
// The detector starts on a row the cycle after the loader wrote it; the
// macro issues at most one accumulation per cycle and pays
// parity_switch_cycles per parity change.  Deterministic for fixed inputs.
DatapathResult run_datapath(const IFspad& pad, const ArchParams& arch);

// Convenience composition: im2col_load + run_datapath (the per-unit delay
// used by the pipeline simulator).
DatapathResult run_tile_datapath(const SpikeTensor& input, int t, const TileWindow& tile,
                                 const ArchParams& arch);

}  // namespace spikecim
