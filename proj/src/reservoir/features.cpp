#include "prc/reservoir/features.hpp"

#include <cstring>
#include <set>
#include <sstream>

#include "prc/error.hpp"

namespace prc {

namespace {

const char* kAxis = "xyz";

void check_dims(const std::vector<int>& dims) {
  if (dims.empty()) throw ParameterError("extractor needs at least one dimension");
  std::set<int> seen;
  for (int d : dims) {
    if (d < 0 || d > 2) throw ParameterError("extractor dimension must be 0, 1 or 2, got " + std::to_string(d));
    if (!seen.insert(d).second) throw ParameterError("extractor dimension " + std::to_string(d) + " repeated");
  }
}

std::string dims_text(const std::vector<int>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + "]";
}

void require_rows(const TrajectoryRecord& r, const std::string& who) {
  if (r.sample_count() == 0) throw CapabilityError(who + ": record has no samples");
  if (r.positions.cols() != 3 * r.node_count) throw CapabilityError(who + ": record positions are not T x 3N");
}

const Geometry& require_geometry(const TrajectoryRecord& r, const std::string& who) {
  if (!r.geometry)
    throw CapabilityError(who + ": record carries no bar connectivity (provenance " + to_string(r.provenance) + ")");
  if (r.geometry->node_count() != r.node_count)
    throw CapabilityError(who + ": record geometry has " + std::to_string(r.geometry->node_count()) +
                          " nodes but the trajectory has " + std::to_string(r.node_count));
  return *r.geometry;
}

FeatureMatrix bar_lengths(const TrajectoryRecord& r, bool subtract_rest, const std::string& who) {
  require_rows(r, who);
  const auto& g = require_geometry(r, who);
  if (g.bars.empty()) throw CapabilityError(who + ": geometry has no bars");
  FeatureMatrix out;
  out.values.resize(r.sample_count(), g.bar_count());
  for (Index t = 0; t < r.sample_count(); ++t) {
    const auto P = r.frame(t);
    for (Index b = 0; b < g.bar_count(); ++b) {
      const auto& bar = g.bars[static_cast<std::size_t>(b)];
      const double l = (P.row(bar.j) - P.row(bar.i)).norm();
      out.values(t, b) = subtract_rest ? l - bar.rest_length : l;
    }
  }
  for (Index b = 0; b < g.bar_count(); ++b) out.labels.push_back((subtract_rest ? "ext_" : "len_") + std::to_string(b));
  out.source = who;
  out.dt = r.dt;
  return out;
}

}  // namespace

void check_features(const FeatureMatrix& f) {
  if (f.cols() == 0) throw ValidationError("feature matrix has no columns");
  if (static_cast<Index>(f.labels.size()) != f.cols())
    throw ValidationError("feature matrix has " + std::to_string(f.labels.size()) + " labels for " +
                          std::to_string(f.cols()) + " columns");
  std::set<std::string> seen;
  for (const auto& l : f.labels)
    if (!seen.insert(l).second) throw ValidationError("duplicate feature label '" + l + "'");
  for (Index c = 0; c < f.cols(); ++c)
    for (Index t = 0; t < f.rows(); ++t)
      if (!std::isfinite(f.values(t, c)))
        throw ValidationError("feature '" + f.labels[static_cast<std::size_t>(c)] + "' is not finite at sample " +
                              std::to_string(t));
}

NodePositions::NodePositions(std::vector<int> dims) : dims_(std::move(dims)) { check_dims(dims_); }

std::string NodePositions::describe() const { return "NodePositions(dims=" + dims_text(dims_) + ")"; }

FeatureMatrix NodePositions::extract(const TrajectoryRecord& r) const {
  require_rows(r, describe());
  const Index N = r.node_count, D = static_cast<Index>(dims_.size());
  FeatureMatrix out;
  out.values.resize(r.sample_count(), N * D);
  for (Index n = 0; n < N; ++n)
    for (Index k = 0; k < D; ++k) {
      out.values.col(n * D + k) = r.positions.col(3 * n + dims_[static_cast<std::size_t>(k)]);
      out.labels.push_back("n" + std::to_string(n) + "." + kAxis[dims_[static_cast<std::size_t>(k)]]);
    }
  out.source = describe();
  out.dt = r.dt;
  return out;
}

NodeDisplacements::NodeDisplacements(Index reference_node, std::vector<int> dims)
    : reference_(reference_node), dims_(std::move(dims)) {
  check_dims(dims_);
  if (reference_ < -1) throw ParameterError("reference node must be -1 or a node index");
}

std::string NodeDisplacements::describe() const {
  return "NodeDisplacements(reference_node=" + std::to_string(reference_) + ", dims=" + dims_text(dims_) + ")";
}

FeatureMatrix NodeDisplacements::extract(const TrajectoryRecord& r) const {
  require_rows(r, describe());
  const Index N = r.node_count, D = static_cast<Index>(dims_.size());
  if (reference_ >= N)
    throw ParameterError(describe() + ": reference node out of range (" + std::to_string(N) + " nodes)");
  FeatureMatrix out;
  out.values.resize(r.sample_count(), (reference_ >= 0 ? N - 1 : N) * D);
  Index col = 0;
  for (Index n = 0; n < N; ++n) {
    if (n == reference_) continue;
    for (Index k = 0; k < D; ++k, ++col) {
      const Index c = 3 * n + dims_[static_cast<std::size_t>(k)];
      auto dst = out.values.col(col);
      dst = r.positions.col(c).array() - r.positions(0, c);
      if (reference_ >= 0) {
        const Index rc = 3 * reference_ + dims_[static_cast<std::size_t>(k)];
        dst.array() -= r.positions.col(rc).array() - r.positions(0, rc);
      }
      out.labels.push_back("d" + std::to_string(n) + "." + kAxis[dims_[static_cast<std::size_t>(k)]]);
    }
  }
  if (out.values.cols() == 0) throw CapabilityError(describe() + ": no nodes left after removing the reference");
  out.source = describe();
  out.dt = r.dt;
  return out;
}

FeatureMatrix BarLengths::extract(const TrajectoryRecord& r) const { return bar_lengths(r, false, describe()); }

FeatureMatrix BarExtensions::extract(const TrajectoryRecord& r) const { return bar_lengths(r, true, describe()); }

FeatureMatrix extract_features(const TrajectoryRecord& record, const FeatureExtractor& extractor) {
  auto f = extractor.extract(record);
  check_features(f);
  return f;
}

namespace {

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  if (s.find_first_of("xyz") != std::string::npos) {
    for (char c : s) {
      if (c == ',') continue;
      const char* p = std::strchr(kAxis, c);
      if (!p || c == '\0') throw ParameterError("bad dimension '" + std::string(1, c) + "' in '" + s + "'");
      dims.push_back(static_cast<int>(p - kAxis));
    }
    return dims;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      dims.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParameterError("bad dimension '" + item + "' in '" + s + "'");
    }
  }
  return dims;
}

}  // namespace

std::unique_ptr<FeatureExtractor> parse_extractor(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw ParameterError("empty extractor spec");
  const auto& kind = parts[0];
  if (kind == "positions") {
    if (parts.size() > 2) throw ParameterError("extractor 'positions' takes at most one argument");
    return std::make_unique<NodePositions>(parts.size() > 1 ? parse_dims(parts[1]) : std::vector<int>{0, 1, 2});
  }
  if (kind == "displacements") {
    if (parts.size() > 3) throw ParameterError("extractor 'displacements' takes at most two arguments");
    Index ref = -1;
    if (parts.size() > 1) {
      try {
        ref = std::stoll(parts[1]);
      } catch (const std::logic_error&) {
        throw ParameterError("bad reference node '" + parts[1] + "'");
      }
    }
    return std::make_unique<NodeDisplacements>(ref, parts.size() > 2 ? parse_dims(parts[2]) : std::vector<int>{0, 1, 2});
  }
  if (parts.size() == 1 && kind == "bar_lengths") return std::make_unique<BarLengths>();
  if (parts.size() == 1 && kind == "bar_extensions") return std::make_unique<BarExtensions>();
  throw ParameterError("unknown extractor '" + spec +
                       "' (expected positions, displacements, bar_lengths or bar_extensions)");
}

}  // namespace prc
