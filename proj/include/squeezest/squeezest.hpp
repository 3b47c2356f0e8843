#pragma once

#include "squeezest/costs.hpp"
#include "squeezest/errors.hpp"
#include "squeezest/estimators.hpp"
#include "squeezest/grid.hpp"
#include "squeezest/io.hpp"
#include "squeezest/scaling.hpp"
#include "squeezest/spectral.hpp"
#include "squeezest/states.hpp"
