#pragma once

// Umbrella header.

#include "beurlab/beurling.hpp"
#include "beurlab/calculus.hpp"
#include "beurlab/commutator.hpp"
#include "beurlab/crw.hpp"
#include "beurlab/dyadic.hpp"
#include "beurlab/errors.hpp"
#include "beurlab/experiments.hpp"
#include "beurlab/exponents.hpp"
#include "beurlab/field.hpp"
#include "beurlab/field_io.hpp"
#include "beurlab/grid.hpp"
#include "beurlab/jacobian.hpp"
#include "beurlab/kernel.hpp"
#include "beurlab/opnorm.hpp"
#include "beurlab/oscillation.hpp"
#include "beurlab/pipeline.hpp"
#include "beurlab/random_fields.hpp"
#include "beurlab/random_signs.hpp"
#include "beurlab/rng.hpp"
#include "beurlab/symbols.hpp"
