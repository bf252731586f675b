#pragma once

#include "so3ft/analysis.hpp"
#include "so3ft/core_types.hpp"
#include "so3ft/experiments.hpp"
#include "so3ft/fourier.hpp"
#include "so3ft/io.hpp"
#include "so3ft/nsoft.hpp"
#include "so3ft/quadrature.hpp"
#include "so3ft/special_functions.hpp"
#include "so3ft/symmetry.hpp"
#include "so3ft/threading.hpp"
#include "so3ft/wigner_transform.hpp"
