#pragma once

// Umbrella header for the whiplash adaptive-damping optimization library.

#include "whiplash/cost_function.hpp"
#include "whiplash/csv.hpp"
#include "whiplash/config.hpp"
#include "whiplash/damping.hpp"
#include "whiplash/errors.hpp"
#include "whiplash/format.hpp"
#include "whiplash/harness.hpp"
#include "whiplash/integrators.hpp"
#include "whiplash/matrix.hpp"
#include "whiplash/optimizers.hpp"
#include "whiplash/spectral.hpp"
#include "whiplash/vec.hpp"
