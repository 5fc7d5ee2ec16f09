#pragma once

#include "dsbn/bitset.hpp"
#include "dsbn/dependence.hpp"
#include "dsbn/errors.hpp"
#include "dsbn/frames.hpp"
#include "dsbn/learners.hpp"
#include "dsbn/mass.hpp"
#include "dsbn/network.hpp"
#include "dsbn/population.hpp"
#include "dsbn/rng.hpp"
