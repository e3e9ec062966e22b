#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qfb/types.hpp"

namespace qfb::io {

/// One complex channel as CSV with header `t,re,im`, %.17g formatting.
void write_csv_channel(const std::filesystem::path& path, const ComplexTrajectory& tr);

/// Wide observable CSV with header `t,photon_number,emitter_population`.
void write_csv_wide(const std::filesystem::path& path, const ComplexTrajectory& photon,
                    const ComplexTrajectory& emitter);

/// Named complex channels as a raw dump: little-endian 64-bit float pairs
/// (re, im), row-major [channel][step]. The sidecar manifest (same path plus
/// ".manifest.json") records the layout.
void write_binary_dump(const std::filesystem::path& path,
                       const std::vector<std::string>& channel_names,
                       const std::vector<const ComplexTrajectory*>& channels);

/// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex.
[[nodiscard]] std::string file_digest(const std::filesystem::path& path);

}  // namespace qfb::io
