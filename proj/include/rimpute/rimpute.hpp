#pragma once

#include "rimpute/density.hpp"
#include "rimpute/error.hpp"
#include "rimpute/imputation.hpp"
#include "rimpute/mechanism.hpp"
#include "rimpute/pooling.hpp"
#include "rimpute/regression.hpp"
#include "rimpute/rng.hpp"
#include "rimpute/samplers.hpp"
#include "rimpute/simharness.hpp"
