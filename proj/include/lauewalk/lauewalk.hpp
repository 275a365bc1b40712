#pragma once

#include "lauewalk/beam_state.hpp"
#include "lauewalk/crystal.hpp"
#include "lauewalk/dd_reference.hpp"
#include "lauewalk/errors.hpp"
#include "lauewalk/interferometer.hpp"
#include "lauewalk/lattice.hpp"
#include "lauewalk/splitter.hpp"
