#pragma once

#include "bessel.hpp"
#include "csv.hpp"
#include "curve.hpp"
#include "diffusion.hpp"
#include "grids.hpp"
#include "metrics.hpp"
#include "noise.hpp"
#include "observer.hpp"
#include "params.hpp"
#include "plant.hpp"
#include "quadrature.hpp"
#include "scenario.hpp"
#include "stepper.hpp"
