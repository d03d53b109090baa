// SPDX-License-Identifier: Apache-2.0
//
// Layer mapper: picks the operating mode from the fan-in, balances receptive
// field rows across the compute macros of a chain, and groups output
// channels and positions into tiles.  Tiles iterate outermost and timesteps
// innermost so full Vmems stay resident in the neuron macro for a tile
// across all timesteps.
#pragma once

#include <string>
#include <vector>

#include "spikecim/datapath.hpp"
#include "spikecim/network.hpp"

namespace spikecim {

// Mode 1 for fan-in up to 128x3, Mode 2 up to 128x9 (boundaries included in
// the smaller mode).  Throws FanInExceedsCapacity beyond that.
Mode select_mode(long fan_in);

// Balanced partition of fan_in rows over the chain's macros (3 in Mode 1,
// 9 in Mode 2); counts differ by at most one, larger counts first.
std::vector<int> distribute_rows(long fan_in, int n_macros);

struct TileSchedule {
    Mode mode = Mode::kMode1;
    PrecisionMode precision;
    LayerSpec layer;
    std::vector<std::vector<int>> channel_groups;   // each of size <= parallel_channels
    std::vector<std::vector<int>> position_groups;  // each of size <= 16; FC: one group {0}
    std::vector<int> rows_per_macro;                // per compute unit along the chain

    int tile_count() const {
        return static_cast<int>(channel_groups.size() * position_groups.size());
    }

    // Receptive-field slice handled by chain position `macro_index` for the
    // given position group.
    TileWindow window(int macro_index, int position_group) const;

    std::string to_json() const;
};

// Plans one Conv or FC layer.  MaxPool layers run host-side and are
// rejected.  Propagates FanInExceedsCapacity for oversized fan-ins.
TileSchedule tile_layer(const LayerSpec& layer, const PrecisionMode& p, const ArchParams& arch);

}  // namespace spikecim
