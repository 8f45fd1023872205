#pragma once

#include <string>

namespace hermcalc {

// Doubles are serialized with round-trip precision and a fixed format so that
// identical runs produce byte-identical files on any platform.
std::string csv_num(double v);
double csv_parse_num(const std::string& tok);

}  // namespace hermcalc
