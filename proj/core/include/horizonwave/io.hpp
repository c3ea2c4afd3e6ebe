#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "horizonwave/asymptotic_engine.hpp"
#include "horizonwave/energy.hpp"
#include "horizonwave/evolution.hpp"
#include "horizonwave/field.hpp"

namespace horizonwave::io {

/// Shortest representation that round-trips to the same double.
std::string format_double(double x);

/// One header row, LF line endings, shortest round-trip floats.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Grid samples: columns x0.., then u (or u0, u1, .. for systems).
void write_field_csv(const std::filesystem::path& path, const Field& f);

/// Coefficient dump: little-endian f64, re/im interleaved, FFT-order modes
/// row-major (last axis fastest), components back to back. A JSON manifest
/// describing the layout is written to `<path>.json`.
void write_coefficients(const std::filesystem::path& path, const Field& f);
/// Reads a dump written by write_coefficients using its manifest.
Field read_coefficients(const std::filesystem::path& path);

/// Jets u_0..u_{N+1} concatenated in one coefficient dump plus a manifest
/// with order, obstructions and per-order residuals.
void write_jet(const std::filesystem::path& path, const AsymptoticSolution& w);

/// Columns t, ||u||_{2m}, ||u_t||_{2m} per snapshot (all nodes if none).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, int m);

/// Columns t, the five energy terms, total, companion.
void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyRow>& rows);

}  // namespace horizonwave::io
