#pragma once

// Umbrella header.
#include "perception/accuracy.hpp"
#include "perception/attention.hpp"
#include "perception/constructions.hpp"
#include "perception/cost.hpp"
#include "perception/distribution.hpp"
#include "perception/efficiency.hpp"
#include "perception/errors.hpp"
#include "perception/grid.hpp"
#include "perception/hype.hpp"
#include "perception/mechanism.hpp"
#include "perception/monotone.hpp"
#include "perception/pgp.hpp"
#include "perception/screening.hpp"
