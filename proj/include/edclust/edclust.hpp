#pragma once

// Umbrella header.

#include "cluster.hpp"
#include "cost_model.hpp"
#include "datagen.hpp"
#include "edit_distance.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "format.hpp"
#include "io.hpp"
#include "rng.hpp"
#include "sequence.hpp"
