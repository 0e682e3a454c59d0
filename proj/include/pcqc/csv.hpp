#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace pcqc {

/// Fixed 12-significant-digit formatting for golden-file stability.
std::string format_number(double value);

/// '#'-prefixed provenance comment followed by the header row.
void write_csv_preamble(std::ostream& os, std::uint64_t cfg_hash,
                        const std::string& header);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pcqc
