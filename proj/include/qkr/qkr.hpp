#pragma once

#include "qkr/analysis.hpp"
#include "qkr/bessel.hpp"
#include "qkr/errors.hpp"
#include "qkr/extract.hpp"
#include "qkr/prep.hpp"
#include "qkr/propagator.hpp"
#include "qkr/search.hpp"
#include "qkr/state.hpp"
