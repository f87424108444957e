#pragma once

#include "riplab/adversarial.hpp"
#include "riplab/bounds.hpp"
#include "riplab/core.hpp"
#include "riplab/errors.hpp"
#include "riplab/experiment.hpp"
#include "riplab/io.hpp"
#include "riplab/lp.hpp"
#include "riplab/polytope.hpp"
#include "riplab/ric.hpp"
#include "riplab/rng.hpp"
#include "riplab/solvers.hpp"
