#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ssikit {

// %.6g with negative zero folded to "0". All numeric file output goes through
// this so identical runs diff clean byte for byte.
std::string fmt_num(double v);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& line, char delim);

// key=value file; '#' comments, blank lines and [section] markers are skipped.
std::map<std::string, std::string> read_kv(const std::filesystem::path& path);
std::map<std::string, std::string> parse_kv(const std::string& text);

std::string read_file(const std::filesystem::path& path);

// Temp file in the target directory + rename, so readers never observe
// partial output and failed runs leave nothing behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

uint64_t fnv1a64(const void* data, std::size_t len);

// "fnv1a:<16 hex digits>" over the raw file bytes.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace ssikit
