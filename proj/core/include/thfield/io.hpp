#pragma once

#include <string>

#include "thfield/grid.hpp"
#include "thfield/params.hpp"
#include "thfield/rng.hpp"
#include "thfield/simulate.hpp"

namespace thfield::io {

/// Raw little-endian float64 grid, row-major, with a JSON sidecar carrying
/// the full provenance (params, grid, seed, method, tool version, command).
/// The sidecar sits next to the binary with extension .json.
std::string sidecar_path(const std::string& bin_path);

void write_sample_path(const std::string& bin_path, const SamplePath& path,
                       const std::string& command_line);

/// Plain field (operator results): same binary format, sidecar carries the
/// grid plus the caller-provided metadata JSON text.
void write_field(const std::string& bin_path, const Field2D& f, const std::string& meta_json,
                 const std::string& command_line);

struct LoadedField {
    Field2D field;
    std::string sidecar_json;  // full sidecar text for callers that need metadata
};
LoadedField read_field(const std::string& bin_path);

/// CSV of a sample path: t,s,z rows.
void write_csv(const std::string& path, const SamplePath& sp);

/// 8-bit PGM heatmap, min-max normalized, s increasing upward.
void write_pgm(const std::string& path, const Grid2D& grid, const std::vector<double>& values);

}
