// SPDX-License-Identifier: Apache-2.0
#include "spikecim/mapper.hpp"

#include <numeric>

#include <json.hpp>

namespace spikecim {

Mode select_mode(long fan_in) {
    if (fan_in <= 0) throw ValidationError("fan-in must be positive");
    if (fan_in <= 128L * 3) return Mode::kMode1;
    if (fan_in <= 128L * 9) return Mode::kMode2;
    throw FanInExceedsCapacity(fan_in);
}

std::vector<int> distribute_rows(long fan_in, int n_macros) {
    std::vector<int> rows(n_macros, static_cast<int>(fan_in / n_macros));
    const int rem = static_cast<int>(fan_in % n_macros);
    for (int i = 0; i < rem; ++i) ++rows[i];
    return rows;
}

TileSchedule tile_layer(const LayerSpec& layer, const PrecisionMode& p, const ArchParams& arch) {
    if (layer.kind == LayerKind::kMaxPool) {
        throw ValidationError("maxpool layers execute host-side and are not tiled");
    }
    TileSchedule sched;
    sched.precision = p;
    sched.layer = layer;
    sched.mode = select_mode(layer.fan_in());
    sched.rows_per_macro =
        distribute_rows(layer.fan_in(), sched.mode == Mode::kMode1 ? 3 : 9);

    const int chans = parallel_channels(sched.mode, p);
    for (int base = 0; base < layer.out_channels; base += chans) {
        std::vector<int> group;
        for (int c = base; c < std::min(layer.out_channels, base + chans); ++c) {
            group.push_back(c);
        }
        sched.channel_groups.push_back(std::move(group));
    }

    if (layer.kind == LayerKind::kFC) {
        sched.position_groups.push_back({0});
    } else {
        const int positions = layer.out_h() * layer.out_w();
        for (int base = 0; base < positions; base += arch.ifspad_cols) {
            std::vector<int> group;
            for (int pos = base; pos < std::min(positions, base + arch.ifspad_cols); ++pos) {
                group.push_back(pos);
            }
            sched.position_groups.push_back(std::move(group));
        }
    }
    return sched;
}

TileWindow TileSchedule::window(int macro_index, int position_group) const {
    TileWindow w;
    w.layer = layer;
    w.positions = position_groups[position_group];
    w.rf_begin = std::accumulate(rows_per_macro.begin(), rows_per_macro.begin() + macro_index, 0);
    w.rf_rows = rows_per_macro[macro_index];
    return w;
}

std::string TileSchedule::to_json() const {
    nlohmann::json j;
    j["mode"] = mode_name(mode);
    j["precision"] = precision.weight_bits;
    j["layer"] = {{"kind", layer_kind_name(layer.kind)},
                  {"fan_in", layer.fan_in()},
                  {"out_channels", layer.out_channels},
                  {"out_h", layer.out_h()},
                  {"out_w", layer.out_w()}};
    j["rows_per_macro"] = rows_per_macro;
    j["channel_groups"] = channel_groups;
    j["position_groups"] = position_groups;
    return j.dump(2);
}

}  // namespace spikecim
