#include "prc/schema/bundle.hpp"

#include "prc/error.hpp"
#include "prc/schema/storage.hpp"

namespace prc {

void save_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  save_geometry(bundle.geometry, dir / "geometry.h5");
  save_signals(bundle.signals, dir / "signals.h5");
  save_config(bundle.config, dir / "config.json");
}

Bundle load_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("experiment directory '" + dir.string() + "' not found");
  Bundle b;
  b.geometry = load_geometry(dir / "geometry.h5");
  b.signals = load_signals(dir / "signals.h5");
  b.config = load_config(dir / "config.json");
  return b;
}

}  // namespace prc
