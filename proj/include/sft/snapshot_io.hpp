#pragma once

#include <filesystem>
#include <string>

#include "sft/diffusion.hpp"

namespace sft {

// JSON document:
//   {"n": N, "infected": [ids...],
//    "truth": {"source": s, "obs_time": t, "times": {"id": time, ...}}}
// "truth" is optional; the healthy set is every node not listed in "infected".
std::string snapshot_to_json(const Snapshot& s);
Snapshot snapshot_from_json(const std::string& text);

void write_snapshot(const Snapshot& s, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace sft
