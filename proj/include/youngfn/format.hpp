#pragma once

#include <string>
#include <string_view>

namespace youngfn {

/// Shortest decimal string that round-trips to the same double; "inf"/"-inf"/"nan"
/// for non-finite values. Locale independent.
std::string format_double(double v);

/// Inverse of format_double. Throws ValidationError on malformed input.
double parse_double(std::string_view s);

}  // namespace youngfn
