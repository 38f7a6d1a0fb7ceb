#pragma once

#include <string>

#include "qng/types.hpp"

namespace qng {

/// 17 significant digits, locale-independent.
std::string format_real(Real x);

}  // namespace qng
