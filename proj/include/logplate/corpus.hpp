#pragma once

#include "logplate/discretization.hpp"
#include "logplate/rng.hpp"

namespace logplate {

// A smooth positive bump A (1 - r^2/R^2)^2 exp(-(r / (w R))^2) with
// amplitude and width drawn from rng.
RadialFunction random_bump(GridPtr grid, Rng& rng);

// Smooth clamped profile (1 - r^2/R^2)^2 times a short random cosine series,
// possibly sign-changing, with amplitude spread over four decades.
RadialFunction random_profile(GridPtr grid, Rng& rng);

}  // namespace logplate
