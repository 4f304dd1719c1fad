#pragma once

#include "errors.hpp"
#include "numerics.hpp"
#include "sphere_grid.hpp"
#include "star_body.hpp"
#include "quermass.hpp"
#include "moment.hpp"
#include "measure.hpp"
#include "synth.hpp"
#include "polynomial.hpp"
#include "steiner.hpp"
#include "root_cone.hpp"
#include "json_io.hpp"
#include "config.hpp"
