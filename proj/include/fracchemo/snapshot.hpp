#pragma once

#include <filesystem>
#include <iosfwd>

#include "fracchemo/model.hpp"

namespace fracchemo {

inline constexpr int kSnapshotFormatVersion = 1;

/// One JSON header line {format_version, d, n, alpha, t, kinetics, field_order}
/// followed by little-endian doubles: physical values of u, then q_1..q_d, row-major.
struct Snapshot {
  State state;
  double alpha = 2.0;
  Kinetics kinetics = Kinetics::quadratic;
};

void write_snapshot(std::ostream& out, const State& s, double alpha, Kinetics kinetics);
void write_snapshot(const std::filesystem::path& path, const State& s, double alpha, Kinetics kinetics);

/// Throws std::runtime_error on a malformed header or short payload.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace fracchemo
