#pragma once

#include <string>

#include "fracns/dynamics.hpp"
#include "fracns/field.hpp"

namespace fracns {

struct StabilityReport;

/// Binary snapshot: fixed header (magic, n, dealias fraction, divergence-free
/// flag, norm-convention id) followed by row-major complex coefficient
/// triples, little-endian doubles.
void write_field_snapshot(const SpectralField& u, const std::string& path);
SpectralField read_field_snapshot(const std::string& path);

/// Lossless JSON debug export of the same data.
std::string field_debug_json(const SpectralField& u);

/// Trajectory outputs: CSV (t, energy, dissipation_integral, one column per
/// recorded H^s) and JSON with full metadata.
std::string trajectory_csv(const TrajectoryReport& rep);
std::string trajectory_json(const TrajectoryReport& rep);

std::string stability_csv(const StabilityReport& rep);

/// Writes via a temp file in the same directory plus rename.
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace fracns
