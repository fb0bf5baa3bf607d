#pragma once
#include "rational.hpp"

namespace curvembed {

}  // namespace curvembed
