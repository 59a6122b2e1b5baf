#pragma once

// Spin-bath decoherence laboratory: closed-form coherence factors, an exact
// small-system propagator for cross-checking, many-to-one coupling reduction,
// Gaussian bath analytics, and the config-driven scenario runner.

#include "bath.hpp"
#include "closed_form.hpp"
#include "coupling.hpp"
#include "jacobi.hpp"
#include "matrix.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "sampling.hpp"
#include "scenario.hpp"
#include "spin.hpp"
