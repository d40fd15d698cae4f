#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace slog {

// Every output artifact is written via temp-file-plus-rename so readers never
// observe partial content.
void atomic_write_text(const std::string& path, const std::string& content);
void atomic_write_bytes(const std::string& path, const void* data, std::size_t size);

std::string read_text(const std::string& path);

// Raw little-endian float64 payloads, column-major. Dimensions live in the
// accompanying manifest, so reads verify the byte count exactly.
void write_f64le(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_f64le(const std::string& path, Eigen::Index rows, Eigen::Index cols);

// Shortest decimal representation that round-trips (up to 17 significant digits).
std::string format_double(double v);

}  // namespace slog
