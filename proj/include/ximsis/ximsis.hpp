#pragma once

// XIM-SIS: model-free feature screening for ultra-high dimensional
// right-censored data via the symmetrized revised Chatterjee rank
// correlation, plus the benchmark simulation harness around it.

#include "ximsis/config.hpp"
#include "ximsis/csv.hpp"
#include "ximsis/experiment.hpp"
#include "ximsis/matrix.hpp"
#include "ximsis/metrics.hpp"
#include "ximsis/parallel.hpp"
#include "ximsis/rank.hpp"
#include "ximsis/rng.hpp"
#include "ximsis/screening.hpp"
#include "ximsis/simulate.hpp"
#include "ximsis/survival.hpp"
#include "ximsis/xi.hpp"
