#pragma once

#include "gfc/contour.hpp"
#include "gfc/errors.hpp"
#include "gfc/invert.hpp"
#include "gfc/kernel.hpp"
#include "gfc/kernel_io.hpp"
#include "gfc/measure.hpp"
#include "gfc/mlf.hpp"
#include "gfc/quadrature.hpp"
#include "gfc/rootfind.hpp"
#include "gfc/special.hpp"
#include "gfc/subordination.hpp"
#include "gfc/timestep.hpp"
