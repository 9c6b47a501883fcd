#pragma once

#include <string>

namespace arpsim {

/// Shortest decimal representation that round-trips to the same double.
/// Locale independent, '.' decimal separator.
std::string format_double(double v);

}  // namespace arpsim
