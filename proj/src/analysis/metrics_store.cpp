#include "prc/analysis/metrics_store.hpp"

#include "prc/error.hpp"
#include "prc/schema/storage.hpp"

namespace prc {

namespace {

void check_group_name(const std::string& group) {
  if (group.empty() || group.find('/') != std::string::npos || group == "." || group == "..")
    throw ParameterError("invalid metrics group name '" + group + "'");
}

}  // namespace

bool MetricsStore::contains(const std::string& group) const {
  if (!std::filesystem::exists(path_)) return false;
  h5::File f(path_, h5::Mode::Read);
  return f.exists("/" + group);
}

std::vector<std::string> MetricsStore::groups() const {
  if (!std::filesystem::exists(path_)) return {};
  h5::File f(path_, h5::Mode::Read);
  return f.children("/");
}

void MetricsStore::save(const MetricsRecord& record, bool overwrite) const {
  check_group_name(record.group);
  h5::File f(path_, h5::Mode::ReadWrite);
  if (f.exists("/" + record.group) && !overwrite)
    throw RefusalError("metrics group '" + record.group + "' already exists in '" + path_.string() +
                       "'; pass the overwrite flag to replace it");
  write_metrics(f, record, "/" + record.group);
}

MetricsRecord MetricsStore::load(const std::string& group) const {
  check_group_name(group);
  h5::File f(path_, h5::Mode::Read);
  return read_metrics(f, "/" + group);
}

}  // namespace prc
