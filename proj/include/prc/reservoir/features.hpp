#pragma once

#include <memory>
#include <string>
#include <vector>

#include "prc/schema/records.hpp"

namespace prc {

/// T×D design matrix with one label per column.
struct FeatureMatrix {
  RowMatrixd values;
  std::vector<std::string> labels;
  std::string source;  // extractor description, e.g. "NodePositions(dims=[2])"
  double dt = 0.0;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

/// Raises ValidationError on non-finite values, duplicate labels or D = 0.
void check_features(const FeatureMatrix& features);

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string describe() const = 0;
  virtual FeatureMatrix extract(const TrajectoryRecord& record) const = 0;
};

/// Selected coordinates of every node, node-major.
class NodePositions : public FeatureExtractor {
 public:
  explicit NodePositions(std::vector<int> dims = {0, 1, 2});
  std::string describe() const override;
  FeatureMatrix extract(const TrajectoryRecord& record) const override;

 private:
  std::vector<int> dims_;
};

/// Displacement from the first sample. With a reference node, that node's
/// displacement is subtracted from every node, removing rigid translation;
/// the reference's own columns are then identically zero and are dropped.
class NodeDisplacements : public FeatureExtractor {
 public:
  explicit NodeDisplacements(Index reference_node = -1, std::vector<int> dims = {0, 1, 2});
  std::string describe() const override;
  FeatureMatrix extract(const TrajectoryRecord& record) const override;

 private:
  Index reference_;
  std::vector<int> dims_;
};

/// Current bar lengths. Needs the record's geometry.
class BarLengths : public FeatureExtractor {
 public:
  std::string describe() const override { return "BarLengths"; }
  FeatureMatrix extract(const TrajectoryRecord& record) const override;
};

/// Bar length minus rest length. Needs the record's geometry.
class BarExtensions : public FeatureExtractor {
 public:
  std::string describe() const override { return "BarExtensions"; }
  FeatureMatrix extract(const TrajectoryRecord& record) const override;
};

FeatureMatrix extract_features(const TrajectoryRecord& record, const FeatureExtractor& extractor);

/// Parses "positions[:dims]", "displacements[:ref[:dims]]", "bar_lengths" or
/// "bar_extensions", where dims is a comma list such as "0,2" or the letters
/// "xz". A ref of -1 means no reference node.
std::unique_ptr<FeatureExtractor> parse_extractor(const std::string& spec);

}  // namespace prc
