#pragma once

#include "mpf/simulation.hpp"

#include <string>

namespace mpf {

/// Fixed primary log header; emitters and parsers agree on it byte for byte.
extern const char* const kLogHeader;

/// Primary per-step log as CSV. Deterministic: %.17g, C locale, LF endings.
std::string emit_log_csv(const TrajectoryLog& log);

/// Frame sidecar (rotation matrices and feed-forward rates) as CSV.
std::string emit_frames_csv(const TrajectoryLog& log);

/// Run metadata (gains, certificate, cadence) as JSON.
std::string emit_meta_json(const TrajectoryLog& log);

/// Parse a primary CSV; fills rows and infers dt from the grid.
/// Throws std::runtime_error on a header or cell mismatch.
TrajectoryLog parse_log_csv(const std::string& text);

/// Parse a frame sidecar into an existing log (row counts must match).
void parse_frames_csv(const std::string& text, TrajectoryLog& log);

/// Parse a metadata JSON into an existing log.
void parse_meta_json(const std::string& text, TrajectoryLog& log);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
bool file_exists(const std::string& path);

} // namespace mpf
