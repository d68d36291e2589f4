#pragma once

#include <string>
#include <vector>

#include "prc/schema/config.hpp"
#include "prc/schema/geometry.hpp"
#include "prc/schema/records.hpp"
#include "prc/schema/signals.hpp"

namespace prc {

struct ValidationEntry {
  std::string location;  // e.g. "bars[3].j", "config.dt", "signals.drive"
  std::string message;
};

/// Every violated bundle invariant. Empty entries iff the bundle can be run.
struct ValidationReport {
  std::vector<ValidationEntry> entries;
  Index sample_count = 0;  // derived T_s, 0 when the timing fields are invalid

  bool ok() const { return entries.empty(); }
  bool mentions(const std::string& text) const;
  std::string summary() const;
};

ValidationReport validate_bundle(const Geometry& geometry, const SignalSet& signals, const SimConfig& config);

/// Type invariants of a stored trajectory: shared leading dimension, finite
/// strains, hinge angles inside (0, 2*pi).
std::vector<ValidationEntry> validate_record(const TrajectoryRecord& record);

}  // namespace prc
