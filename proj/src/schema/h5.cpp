#include "prc/schema/h5.hpp"

#include <numeric>
#include <sstream>

#include "prc/error.hpp"

namespace prc::h5 {
namespace {

// HDF5 prints its own error stack by default; we report through exceptions.
void silence_hdf5() {
  static const bool once = [] {
    H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr);
    return true;
  }();
  (void)once;
}

// Closes an hid_t with the matching H5*close on scope exit.
class Handle {
 public:
  using Closer = herr_t (*)(hid_t);
  Handle(hid_t id, Closer closer) : id_(id), closer_(closer) {}
  ~Handle() {
    if (id_ >= 0) closer_(id_);
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  hid_t get() const { return id_; }
  bool valid() const { return id_ >= 0; }

 private:
  hid_t id_;
  Closer closer_;
};

hsize_t element_count(const std::vector<hsize_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), hsize_t{1}, std::multiplies<>());
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string item;
  while (std::getline(ss, item, '/'))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::string parent_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  if (pos == std::string::npos || pos == 0) return "/";
  return path.substr(0, pos);
}

}  // namespace

File::File(const std::filesystem::path& path, Mode mode) : path_(path) {
  silence_hdf5();
  switch (mode) {
    case Mode::Read:
      if (!std::filesystem::exists(path)) throw IoError("cannot open '" + path.string() + "': no such file");
      id_ = H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT);
      break;
    case Mode::ReadWrite:
      if (std::filesystem::exists(path))
        id_ = H5Fopen(path.c_str(), H5F_ACC_RDWR, H5P_DEFAULT);
      else
        id_ = H5Fcreate(path.c_str(), H5F_ACC_EXCL, H5P_DEFAULT, H5P_DEFAULT);
      break;
    case Mode::Truncate:
      id_ = H5Fcreate(path.c_str(), H5F_ACC_TRUNC, H5P_DEFAULT, H5P_DEFAULT);
      break;
  }
  if (id_ < 0) throw IoError("cannot open '" + path.string() + "' as HDF5");
}

File::~File() {
  if (id_ >= 0) H5Fclose(id_);
}

File::File(File&& other) noexcept : path_(std::move(other.path_)), id_(other.id_) {
  other.id_ = H5I_INVALID_HID;
}

File& File::operator=(File&& other) noexcept {
  if (this != &other) {
    if (id_ >= 0) H5Fclose(id_);
    path_ = std::move(other.path_);
    id_ = other.id_;
    other.id_ = H5I_INVALID_HID;
  }
  return *this;
}

bool File::exists(const std::string& path) const {
  if (path == "/" || path.empty()) return true;
  std::string prefix;
  for (const auto& part : split_path(path)) {
    prefix += "/" + part;
    if (H5Lexists(id_, prefix.c_str(), H5P_DEFAULT) <= 0) return false;
  }
  return true;
}

void File::require(const std::string& path) const {
  if (!exists(path)) {
    auto name = path;
    if (!name.empty() && name.front() == '/') name.erase(0, 1);
    throw SchemaError(name, "schema violation: missing required dataset or group '" + name + "' in " +
                                path_.string());
  }
}

void File::create_group(const std::string& path) {
  std::string prefix;
  for (const auto& part : split_path(path)) {
    prefix += "/" + part;
    if (H5Lexists(id_, prefix.c_str(), H5P_DEFAULT) > 0) continue;
    Handle gcpl(H5Pcreate(H5P_GROUP_CREATE), H5Pclose);
    H5Pset_obj_track_times(gcpl.get(), false);
    Handle g(H5Gcreate2(id_, prefix.c_str(), H5P_DEFAULT, gcpl.get(), H5P_DEFAULT), H5Gclose);
    if (!g.valid()) throw IoError("cannot create group '" + prefix + "' in " + path_.string());
  }
}

void File::ensure_parent(const std::string& path) { create_group(parent_of(path)); }

void File::remove(const std::string& path) {
  if (!exists(path)) return;
  if (H5Ldelete(id_, path.c_str(), H5P_DEFAULT) < 0) throw IoError("cannot remove '" + path + "'");
}

std::vector<std::string> File::children(const std::string& group) const {
  require(group);
  std::vector<std::string> names;
  auto cb = [](hid_t, const char* name, const H5L_info_t*, void* out) -> herr_t {
    static_cast<std::vector<std::string>*>(out)->emplace_back(name);
    return 0;
  };
  H5Literate_by_name(id_, group.c_str(), H5_INDEX_NAME, H5_ITER_INC, nullptr, cb, &names, H5P_DEFAULT);
  return names;
}

void File::write_raw(const std::string& path, hid_t mem_type, hid_t file_type, const void* data,
                     const std::vector<hsize_t>& dims) {
  ensure_parent(path);
  remove(path);
  Handle space(H5Screate_simple(static_cast<int>(dims.size()), dims.data(), nullptr), H5Sclose);
  if (!space.valid()) throw IoError("cannot create dataspace for '" + path + "'");
  // Without modification times, identical content gives identical files.
  Handle dcpl(H5Pcreate(H5P_DATASET_CREATE), H5Pclose);
  H5Pset_obj_track_times(dcpl.get(), false);
  Handle set(H5Dcreate2(id_, path.c_str(), file_type, space.get(), H5P_DEFAULT, dcpl.get(), H5P_DEFAULT),
             H5Dclose);
  if (!set.valid()) throw IoError("cannot create dataset '" + path + "' in " + path_.string());
  if (element_count(dims) == 0) return;
  if (H5Dwrite(set.get(), mem_type, H5S_ALL, H5S_ALL, H5P_DEFAULT, data) < 0)
    throw IoError("cannot write dataset '" + path + "'");
}

void File::write(const std::string& path, const double* data, const std::vector<hsize_t>& dims) {
  write_raw(path, H5T_NATIVE_DOUBLE, H5T_IEEE_F64LE, data, dims);
}

void File::write(const std::string& path, const std::int64_t* data, const std::vector<hsize_t>& dims) {
  write_raw(path, H5T_NATIVE_INT64, H5T_STD_I64LE, data, dims);
}

void File::write(const std::string& path, const std::uint8_t* data, const std::vector<hsize_t>& dims) {
  write_raw(path, H5T_NATIVE_UINT8, H5T_STD_U8LE, data, dims);
}

std::vector<hsize_t> File::dims(const std::string& path) const {
  require(path);
  Handle set(H5Dopen2(id_, path.c_str(), H5P_DEFAULT), H5Dclose);
  if (!set.valid()) throw SchemaError(path, "schema violation: '" + path + "' is not a dataset");
  Handle space(H5Dget_space(set.get()), H5Sclose);
  const int rank = H5Sget_simple_extent_ndims(space.get());
  std::vector<hsize_t> d(static_cast<std::size_t>(std::max(rank, 0)));
  if (rank > 0) H5Sget_simple_extent_dims(space.get(), d.data(), nullptr);
  return d;
}

template <typename T>
Array<T> File::read_raw(const std::string& path, hid_t mem_type) const {
  Array<T> out;
  out.dims = dims(path);
  out.data.resize(element_count(out.dims));
  if (out.data.empty()) return out;
  Handle set(H5Dopen2(id_, path.c_str(), H5P_DEFAULT), H5Dclose);
  if (H5Dread(set.get(), mem_type, H5S_ALL, H5S_ALL, H5P_DEFAULT, out.data.data()) < 0)
    throw IoError("cannot read dataset '" + path + "'");
  return out;
}

Array<double> File::read_double(const std::string& path) const { return read_raw<double>(path, H5T_NATIVE_DOUBLE); }

Array<std::int64_t> File::read_int(const std::string& path) const {
  return read_raw<std::int64_t>(path, H5T_NATIVE_INT64);
}

Array<std::uint8_t> File::read_bool(const std::string& path) const {
  return read_raw<std::uint8_t>(path, H5T_NATIVE_UINT8);
}

void File::write_matrix(const std::string& path, const RowMatrixd& m) {
  write(path, m.data(), {static_cast<hsize_t>(m.rows()), static_cast<hsize_t>(m.cols())});
}

void File::write_matrix(const std::string& path, const RowMatrixi& m) {
  write(path, m.data(), {static_cast<hsize_t>(m.rows()), static_cast<hsize_t>(m.cols())});
}

void File::write_vector(const std::string& path, const Eigen::VectorXd& v) {
  write(path, v.data(), {static_cast<hsize_t>(v.size())});
}

namespace {
template <typename Matrix, typename T>
Matrix to_matrix(const std::string& path, const Array<T>& a) {
  if (a.dims.size() != 2) throw SchemaError(path, "schema violation: '" + path + "' must be two-dimensional");
  Matrix m(static_cast<Index>(a.dims[0]), static_cast<Index>(a.dims[1]));
  std::copy(a.data.begin(), a.data.end(), m.data());
  return m;
}
}  // namespace

RowMatrixd File::read_matrix(const std::string& path) const { return to_matrix<RowMatrixd>(path, read_double(path)); }

RowMatrixi File::read_int_matrix(const std::string& path) const {
  return to_matrix<RowMatrixi>(path, read_int(path));
}

Eigen::VectorXd File::read_vector(const std::string& path) const {
  auto a = read_double(path);
  if (a.dims.size() != 1) throw SchemaError(path, "schema violation: '" + path + "' must be one-dimensional");
  return Eigen::Map<const Eigen::VectorXd>(a.data.data(), static_cast<Index>(a.data.size()));
}

hid_t File::open_object(const std::string& object) const {
  require(object);
  hid_t obj = H5Oopen(id_, object.c_str(), H5P_DEFAULT);
  if (obj < 0) throw IoError("cannot open object '" + object + "'");
  return obj;
}

namespace {
void write_attr(hid_t obj, const std::string& name, hid_t type, const void* value) {
  if (H5Aexists(obj, name.c_str()) > 0) H5Adelete(obj, name.c_str());
  Handle space(H5Screate(H5S_SCALAR), H5Sclose);
  Handle attr(H5Acreate2(obj, name.c_str(), type, space.get(), H5P_DEFAULT, H5P_DEFAULT), H5Aclose);
  if (!attr.valid() || H5Awrite(attr.get(), type, value) < 0) throw IoError("cannot write attribute '" + name + "'");
}
}  // namespace

void File::set_attr(const std::string& object, const std::string& name, double value) {
  create_group(object == "/" ? "/" : object);
  Handle obj(open_object(object), H5Oclose);
  write_attr(obj.get(), name, H5T_NATIVE_DOUBLE, &value);
}

void File::set_attr(const std::string& object, const std::string& name, std::int64_t value) {
  create_group(object == "/" ? "/" : object);
  Handle obj(open_object(object), H5Oclose);
  write_attr(obj.get(), name, H5T_NATIVE_INT64, &value);
}

void File::set_attr(const std::string& object, const std::string& name, const std::string& value) {
  create_group(object == "/" ? "/" : object);
  Handle obj(open_object(object), H5Oclose);
  Handle type(H5Tcopy(H5T_C_S1), H5Tclose);
  H5Tset_size(type.get(), std::max<std::size_t>(value.size(), 1));
  H5Tset_strpad(type.get(), H5T_STR_NULLPAD);
  std::string padded = value.empty() ? std::string(1, '\0') : value;
  write_attr(obj.get(), name, type.get(), padded.data());
}

bool File::has_attr(const std::string& object, const std::string& name) const {
  if (!exists(object)) return false;
  Handle obj(open_object(object), H5Oclose);
  return H5Aexists(obj.get(), name.c_str()) > 0;
}

std::vector<std::string> File::attr_names(const std::string& object) const {
  Handle obj(open_object(object), H5Oclose);
  std::vector<std::string> names;
  auto cb = [](hid_t, const char* name, const H5A_info_t*, void* out) -> herr_t {
    static_cast<std::vector<std::string>*>(out)->emplace_back(name);
    return 0;
  };
  H5Aiterate2(obj.get(), H5_INDEX_NAME, H5_ITER_INC, nullptr, cb, &names);
  return names;
}

namespace {
Handle open_attr(hid_t obj, const std::string& object, const std::string& name) {
  if (H5Aexists(obj, name.c_str()) <= 0)
    throw SchemaError(object + "@" + name,
                      "schema violation: missing required attribute '" + name + "' on '" + object + "'");
  return Handle(H5Aopen(obj, name.c_str(), H5P_DEFAULT), H5Aclose);
}
}  // namespace

double File::attr_double(const std::string& object, const std::string& name) const {
  Handle obj(open_object(object), H5Oclose);
  auto attr = open_attr(obj.get(), object, name);
  double v = 0;
  if (H5Aread(attr.get(), H5T_NATIVE_DOUBLE, &v) < 0) throw IoError("cannot read attribute '" + name + "'");
  return v;
}

std::int64_t File::attr_int(const std::string& object, const std::string& name) const {
  Handle obj(open_object(object), H5Oclose);
  auto attr = open_attr(obj.get(), object, name);
  std::int64_t v = 0;
  if (H5Aread(attr.get(), H5T_NATIVE_INT64, &v) < 0) throw IoError("cannot read attribute '" + name + "'");
  return v;
}

std::string File::attr_string(const std::string& object, const std::string& name) const {
  Handle obj(open_object(object), H5Oclose);
  auto attr = open_attr(obj.get(), object, name);
  Handle type(H5Aget_type(attr.get()), H5Tclose);
  if (H5Tget_class(type.get()) != H5T_STRING)
    throw SchemaError(object + "@" + name, "schema violation: attribute '" + name + "' is not a string");
  const std::size_t size = H5Tget_size(type.get());
  std::string value(size, '\0');
  if (H5Aread(attr.get(), type.get(), value.data()) < 0) throw IoError("cannot read attribute '" + name + "'");
  while (!value.empty() && value.back() == '\0') value.pop_back();
  return value;
}

bool File::attr_is_string(const std::string& object, const std::string& name) const {
  Handle obj(open_object(object), H5Oclose);
  auto attr = open_attr(obj.get(), object, name);
  Handle type(H5Aget_type(attr.get()), H5Tclose);
  return H5Tget_class(type.get()) == H5T_STRING;
}

}  // namespace prc::h5
