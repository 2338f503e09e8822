#pragma once

// Everything at once.

#include "clsp/adaptive.hpp"
#include "clsp/bench.hpp"
#include "clsp/errors.hpp"
#include "clsp/generator.hpp"
#include "clsp/indices.hpp"
#include "clsp/io.hpp"
#include "clsp/lot_elimination.hpp"
#include "clsp/matrix.hpp"
#include "clsp/model.hpp"
#include "clsp/pbp.hpp"
#include "clsp/rng.hpp"
#include "clsp/tabu.hpp"
#include "clsp/transship.hpp"
