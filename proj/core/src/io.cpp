#include "slog/io.hpp"

#include <unistd.h>

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slog/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "f64le payloads assume a little-endian host");

namespace slog {

namespace fs = std::filesystem;

namespace {

void rename_into_place(const fs::path& tmp, const fs::path& final_path) {
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("rename " + tmp.string() + " -> " + final_path.string() + ": " +
                  ec.message());
  }
}

fs::path temp_sibling(const fs::path& final_path) {
  return final_path.parent_path() /
         (final_path.filename().string() + ".tmp" + std::to_string(::getpid()));
}

}  // namespace

void atomic_write_bytes(const std::string& path, const void* data, std::size_t size) {
  const fs::path final_path(path);
  if (final_path.has_parent_path()) fs::create_directories(final_path.parent_path());
  const fs::path tmp = temp_sibling(final_path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  rename_into_place(tmp, final_path);
}

void atomic_write_text(const std::string& path, const std::string& content) {
  atomic_write_bytes(path, content.data(), content.size());
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_f64le(const std::string& path, const Eigen::MatrixXd& m) {
  atomic_write_bytes(path, m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
}

Eigen::MatrixXd read_f64le(const std::string& path, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const std::size_t expected = sizeof(double) * static_cast<std::size_t>(rows * cols);
  const std::size_t actual = fs::file_size(path);
  if (actual != expected) {
    throw CorruptPayload(path + ": expected " + std::to_string(expected) +
                         " bytes, found " + std::to_string(actual));
  }
  Eigen::MatrixXd m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(expected));
  if (!in) throw CorruptPayload(path + ": short read");
  return m;
}

std::string format_double(double v) {
  // Print with increasing precision until the value round-trips exactly.
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace slog
