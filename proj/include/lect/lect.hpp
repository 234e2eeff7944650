#ifndef LECT_LECT_HPP
#define LECT_LECT_HPP

#include "analysis.hpp"
#include "cf_calculus.hpp"
#include "complex.hpp"
#include "field.hpp"
#include "generators.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "moduli.hpp"
#include "parallel.hpp"
#include "pipeline.hpp"
#include "stats.hpp"
#include "transforms.hpp"

#endif  // LECT_LECT_HPP
