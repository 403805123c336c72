#pragma once

#include "grale/bitset.hpp"
#include "grale/error.hpp"
#include "grale/evaluation.hpp"
#include "grale/granule.hpp"
#include "grale/io.hpp"
#include "grale/mmer.hpp"
#include "grale/random.hpp"
#include "grale/recommender.hpp"
#include "grale/rules.hpp"
