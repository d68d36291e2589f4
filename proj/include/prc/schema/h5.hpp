#pragma once

// Thin RAII layer over the HDF5 C API. Only what the record stores need:
// hierarchical groups, N-d double/int64/uint8 datasets and scalar/string
// attributes. Paths are absolute ("/geometry/bars/indices").

#include <hdf5.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prc/schema/types.hpp"

namespace prc::h5 {

enum class Mode { Read, ReadWrite, Truncate };

template <typename T>
struct Array {
  std::vector<hsize_t> dims;
  std::vector<T> data;
};

class File {
 public:
  File(const std::filesystem::path& path, Mode mode);
  ~File();
  File(File&& other) noexcept;
  File& operator=(File&& other) noexcept;
  File(const File&) = delete;
  File& operator=(const File&) = delete;

  const std::filesystem::path& path() const { return path_; }

  bool exists(const std::string& path) const;
  void create_group(const std::string& path);
  void remove(const std::string& path);
  std::vector<std::string> children(const std::string& group) const;

  void write(const std::string& path, const double* data, const std::vector<hsize_t>& dims);
  void write(const std::string& path, const std::int64_t* data, const std::vector<hsize_t>& dims);
  void write(const std::string& path, const std::uint8_t* data, const std::vector<hsize_t>& dims);

  Array<double> read_double(const std::string& path) const;
  Array<std::int64_t> read_int(const std::string& path) const;
  Array<std::uint8_t> read_bool(const std::string& path) const;
  std::vector<hsize_t> dims(const std::string& path) const;

  // Eigen conveniences. Matrices are written as [rows, cols], vectors as [n].
  void write_matrix(const std::string& path, const RowMatrixd& m);
  void write_matrix(const std::string& path, const RowMatrixi& m);
  void write_vector(const std::string& path, const Eigen::VectorXd& v);
  RowMatrixd read_matrix(const std::string& path) const;
  RowMatrixi read_int_matrix(const std::string& path) const;
  Eigen::VectorXd read_vector(const std::string& path) const;

  void set_attr(const std::string& object, const std::string& name, double value);
  void set_attr(const std::string& object, const std::string& name, std::int64_t value);
  void set_attr(const std::string& object, const std::string& name, const std::string& value);
  bool has_attr(const std::string& object, const std::string& name) const;
  std::vector<std::string> attr_names(const std::string& object) const;
  double attr_double(const std::string& object, const std::string& name) const;
  std::int64_t attr_int(const std::string& object, const std::string& name) const;
  std::string attr_string(const std::string& object, const std::string& name) const;
  // Attribute class inspection for generic readers.
  bool attr_is_string(const std::string& object, const std::string& name) const;

 private:
  void require(const std::string& path) const;
  void ensure_parent(const std::string& path);
  void write_raw(const std::string& path, hid_t mem_type, hid_t file_type, const void* data,
                 const std::vector<hsize_t>& dims);
  template <typename T>
  Array<T> read_raw(const std::string& path, hid_t mem_type) const;
  hid_t open_object(const std::string& object) const;

  std::filesystem::path path_;
  hid_t id_ = H5I_INVALID_HID;
};

}  // namespace prc::h5
