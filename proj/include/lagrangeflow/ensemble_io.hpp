#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "lagrangeflow/sde_engine.hpp"

namespace lagrangeflow {

// Flat binary layout, all fields little-endian:
//   "LGF1" | N u64 | M u64 | tag u64 | seed u64 | payload f64...
// Ensemble payload: positions [n][k][3] for k = 0..M, then noise [n][k][3]
// for k = 0..M-1. Process payload: values [n][k][d].
// tag is 0 for the Wiener measure and fnv1a64(case name) for P_u.

std::uint64_t measure_tag_code(const MeasureTag& tag);

void write_ensemble(std::ostream& out, const PathEnsemble& ens);
void write_ensemble(const std::string& path, const PathEnsemble& ens);
/// Throws std::runtime_error on a malformed file, UnknownName for a tag code
/// that matches no cataloged case.
PathEnsemble read_ensemble(std::istream& in);
PathEnsemble read_ensemble(const std::string& path);

void write_process(std::ostream& out, const ProcessSample& p, const MeasureTag& tag, std::uint64_t seed);

/// CSV with columns t, then either one column per path (per_path) or the
/// ensemble mean of each component.
void write_process_csv(std::ostream& out, const ProcessSample& p, bool per_path);

}  // namespace lagrangeflow
