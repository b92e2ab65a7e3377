#pragma once

#include "henonlab/csv.hpp"
#include "henonlab/dynamics.hpp"
#include "henonlab/errors.hpp"
#include "henonlab/integrate.hpp"
#include "henonlab/lyapunov.hpp"
#include "henonlab/render.hpp"
#include "henonlab/scenario.hpp"
#include "henonlab/section.hpp"
#include "henonlab/state.hpp"
#include "henonlab/validation.hpp"
