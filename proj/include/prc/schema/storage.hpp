#pragma once

// HDF5 encoding of every schema record. Dataset names follow the logical
// schema: a trajectory file holds `positions` [T_s, N, 3], `velocities`,
// `bar_strains` [T_s, M], `hinge_angles` [T_s, K] and `energies` [T_s, 3] at
// its root, with optional `/geometry/*`, `/signals/*` and a `config` JSON
// attribute. Loads check every required path and raise SchemaError naming the
// first one that is missing.

#include <filesystem>
#include <string>

#include "prc/schema/h5.hpp"
#include "prc/schema/records.hpp"

namespace prc {

void write_geometry(h5::File& file, const Geometry& geometry, const std::string& root = "/geometry");
Geometry read_geometry(const h5::File& file, const std::string& root = "/geometry");

void write_signals(h5::File& file, const SignalSet& signals, const std::string& root = "/signals");
SignalSet read_signals(const h5::File& file, const std::string& root = "/signals");

void write_trajectory(h5::File& file, const TrajectoryRecord& record, const std::string& root = "/");
TrajectoryRecord read_trajectory(const h5::File& file, const std::string& root = "/");

void write_readout(h5::File& file, const ReadoutRecord& record, const std::string& root);
ReadoutRecord read_readout(const h5::File& file, const std::string& root);

void write_capacity(h5::File& file, const CapacityTable& table, const std::string& root);
CapacityTable read_capacity(const h5::File& file, const std::string& root);

void write_metrics(h5::File& file, const MetricsRecord& record, const std::string& root);
MetricsRecord read_metrics(const h5::File& file, const std::string& root);

// Whole-file conveniences.
void save_geometry(const Geometry& geometry, const std::filesystem::path& path);
Geometry load_geometry(const std::filesystem::path& path);
void save_signals(const SignalSet& signals, const std::filesystem::path& path);
SignalSet load_signals(const std::filesystem::path& path);
void store_record(const TrajectoryRecord& record, const std::filesystem::path& path);
TrajectoryRecord load_trajectory(const std::filesystem::path& path);
/// Readouts live in groups of one file, one group per task.
void store_readout(const ReadoutRecord& record, const std::filesystem::path& path);
ReadoutRecord load_readout(const std::filesystem::path& path, const std::string& task);

}  // namespace prc
