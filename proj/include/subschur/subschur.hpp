#pragma once

// Umbrella header for the library. The CLI layer under subschur/cli is separate.

#include "subschur/capacity.hpp"
#include "subschur/core.hpp"
#include "subschur/error.hpp"
#include "subschur/gallery.hpp"
#include "subschur/lp.hpp"
#include "subschur/norms.hpp"
#include "subschur/principles.hpp"
#include "subschur/sublinear.hpp"
#include "subschur/theorem_report.hpp"
#include "subschur/weak_type.hpp"
