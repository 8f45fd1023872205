#include "hermcalc/csv.hpp"

#include <charconv>
#include <cstdio>

#include "hermcalc/errors.hpp"

namespace hermcalc {

std::string csv_num(double v) {
    char buf[40];
    // shortest round-trip representation; deterministic across runs
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double csv_parse_num(const std::string& tok) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc()) throw ConfigError("csv: cannot parse number '" + tok + "'");
    return v;
}

}  // namespace hermcalc
