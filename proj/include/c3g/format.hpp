#pragma once

#include <string>

namespace c3g {

/// Shortest round-trip decimal form, locale independent ("nan", "inf" for
/// non-finite values).
std::string format_double(double v);

/// Scientific notation with 3 significant digits, lowercase e, no exponent
/// padding or plus sign: 8.57e-18, 5.00e-2, 0.00e0.
std::string format_sci3(double v);

}  // namespace c3g
