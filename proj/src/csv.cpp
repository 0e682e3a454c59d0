#include "pcqc/csv.hpp"

#include <cstdio>

namespace pcqc {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

void write_csv_preamble(std::ostream& os, std::uint64_t cfg_hash,
                        const std::string& header) {
    char hash_buf[24];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(cfg_hash));
    os << "# pcqc " << kVersion << " config_hash=" << hash_buf << '\n'
       << header << '\n';
}

}  // namespace pcqc
