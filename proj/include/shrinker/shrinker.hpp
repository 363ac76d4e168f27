#pragma once

#include "errors.hpp"
#include "finite_difference.hpp"
#include "gaussian_space.hpp"
#include "io.hpp"
#include "model_surface.hpp"
#include "ode.hpp"
#include "polyline.hpp"
#include "profile_curve.hpp"
#include "profile_ode.hpp"
#include "quadrature.hpp"
#include "stability.hpp"
#include "sweep.hpp"
#include "test_surfaces.hpp"
