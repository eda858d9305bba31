#pragma once

#include "finslerlab/algebra.hpp"
#include "finslerlab/curvature.hpp"
#include "finslerlab/errors.hpp"
#include "finslerlab/finite_difference.hpp"
#include "finslerlab/jet.hpp"
#include "finslerlab/linalg.hpp"
#include "finslerlab/phi.hpp"
#include "finslerlab/quadrature.hpp"
#include "finslerlab/sampling.hpp"
#include "finslerlab/volume.hpp"
