#pragma once

#include "analysis.hpp"
#include "channel.hpp"
#include "distance_distributions.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "tle.hpp"
#include "units.hpp"

namespace geosat
{
inline constexpr char const version[] = "1.0.0";
}
