#pragma once

#include "moat/csv.hpp"
#include "moat/errors.hpp"
#include "moat/evolve.hpp"
#include "moat/grid.hpp"
#include "moat/harness.hpp"
#include "moat/objective.hpp"
#include "moat/pareto.hpp"
#include "moat/problems.hpp"
#include "moat/rng.hpp"
#include "moat/scalarize.hpp"
