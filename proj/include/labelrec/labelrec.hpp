#pragma once

// Umbrella header.

#include "labelrec/bounds.hpp"
#include "labelrec/graph.hpp"
#include "labelrec/harness.hpp"
#include "labelrec/io.hpp"
#include "labelrec/observe.hpp"
#include "labelrec/rng.hpp"
#include "labelrec/solve.hpp"
#include "labelrec/spectral.hpp"
