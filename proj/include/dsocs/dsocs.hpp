#pragma once

// Umbrella header for the whole library.

#include "dsocs/catalog.hpp"
#include "dsocs/config.hpp"
#include "dsocs/continuous.hpp"
#include "dsocs/csv.hpp"
#include "dsocs/diagnostics.hpp"
#include "dsocs/errors.hpp"
#include "dsocs/fit.hpp"
#include "dsocs/linalg.hpp"
#include "dsocs/nonholonomic.hpp"
#include "dsocs/particle.hpp"
#include "dsocs/pendulum.hpp"
#include "dsocs/reference.hpp"
#include "dsocs/roots.hpp"
#include "dsocs/stepping.hpp"
#include "dsocs/system.hpp"
