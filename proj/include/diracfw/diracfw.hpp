// Umbrella header.
#pragma once

#include "diracfw/analysis.hpp"
#include "diracfw/config.hpp"
#include "diracfw/core.hpp"
#include "diracfw/dirac1d.hpp"
#include "diracfw/extensions.hpp"
#include "diracfw/observables.hpp"
#include "diracfw/optical.hpp"
#include "diracfw/runner.hpp"
