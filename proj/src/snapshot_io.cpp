#include "sft/snapshot_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sft/error.hpp"

namespace sft {

using nlohmann::json;

std::string snapshot_to_json(const Snapshot& s) {
  json doc;
  doc["n"] = s.node_count;
  doc["infected"] = s.infected;
  if (s.truth) {
    json times = json::object();
    for (std::size_t i = 0; i < s.infected.size(); ++i) {
      times[std::to_string(s.infected[i])] = s.truth->infection_time.at(i);
    }
    doc["truth"] = {{"source", s.truth->source}, {"obs_time", s.truth->obs_time}, {"times", std::move(times)}};
  }
  return doc.dump(2) + "\n";
}

Snapshot snapshot_from_json(const std::string& text) {
  Snapshot s;
  try {
    const json doc = json::parse(text);
    s.node_count = doc.at("n").get<std::size_t>();
    s.infected = doc.at("infected").get<std::vector<NodeId>>();
    std::sort(s.infected.begin(), s.infected.end());
    if (std::adjacent_find(s.infected.begin(), s.infected.end()) != s.infected.end()) {
      throw Error(ErrorCode::kParseError, "snapshot lists an infected node twice");
    }
    for (NodeId v : s.infected) {
      if (v >= s.node_count) throw Error(ErrorCode::kNodeOutOfRange, "infected node " + std::to_string(v) + " >= n");
    }
    if (doc.contains("truth")) {
      const json& t = doc.at("truth");
      SnapshotTruth truth;
      truth.source = t.at("source").get<NodeId>();
      truth.obs_time = t.at("obs_time").get<std::uint32_t>();
      const json& times = t.at("times");
      truth.infection_time.assign(s.infected.size(), 0);
      for (std::size_t i = 0; i < s.infected.size(); ++i) {
        truth.infection_time[i] = times.at(std::to_string(s.infected[i])).get<std::uint32_t>();
      }
      s.truth = std::move(truth);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("snapshot JSON: ") + e.what());
  }
  return s;
}

void write_snapshot(const Snapshot& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << snapshot_to_json(s);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return snapshot_from_json(buf.str());
}

}  // namespace sft
