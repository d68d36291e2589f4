#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "prc/schema/records.hpp"

namespace prc {

/// metrics.h5: one group per benchmark run, keyed by the group name.
class MetricsStore {
 public:
  explicit MetricsStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }
  bool contains(const std::string& group) const;
  std::vector<std::string> groups() const;
  /// Refuses to replace an existing group unless `overwrite`.
  void save(const MetricsRecord& record, bool overwrite = false) const;
  MetricsRecord load(const std::string& group) const;

 private:
  std::filesystem::path path_;
};

}  // namespace prc
