#pragma once

// Experiment directory: geometry.h5, signals.h5 and config.json side by side,
// with run products under output/.

#include <filesystem>

#include "prc/schema/config.hpp"
#include "prc/schema/geometry.hpp"
#include "prc/schema/signals.hpp"

namespace prc {

struct Bundle {
  Geometry geometry;
  SignalSet signals;
  SimConfig config;
};

void save_bundle(const Bundle& bundle, const std::filesystem::path& dir);
Bundle load_bundle(const std::filesystem::path& dir);

inline std::filesystem::path output_dir(const std::filesystem::path& dir) { return dir / "output"; }

}  // namespace prc
