#ifndef QIMPACT_IO_HPP
#define QIMPACT_IO_HPP

#include <string>
#include <vector>

#include "qimpact/errors.hpp"

namespace qimpact {

/// 17-significant-digit decimal rendering; round-trips any double exactly.
std::string format_float(double v);

/// Writes a CSV with a single header line naming the columns. All values are
/// serialized with format_float, so identical data yields identical bytes.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// FNV-1a 64-bit digest as a 16-character lowercase hex string.
std::string checksum_bytes(const std::string& bytes);
std::string checksum_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace qimpact

#endif
