#pragma once

// Umbrella header: semimetric spaces, control moduli, quasisymmetry checks,
// diameter distortion, coefficient preservation, four-point additivity,
// instance generators, and the JSON formats tying them together.

#include "metricforge/additive.hpp"
#include "metricforge/distortion.hpp"
#include "metricforge/errors.hpp"
#include "metricforge/generator.hpp"
#include "metricforge/io.hpp"
#include "metricforge/modulus.hpp"
#include "metricforge/parallel.hpp"
#include "metricforge/preservation.hpp"
#include "metricforge/quasisym.hpp"
#include "metricforge/report.hpp"
#include "metricforge/rng.hpp"
#include "metricforge/space.hpp"
#include "metricforge/tolerance.hpp"
