#pragma once

#include "abm.hpp"
#include "analysis.hpp"
#include "cases.hpp"
#include "empirical.hpp"
#include "equilibrium.hpp"
#include "fem.hpp"
#include "field.hpp"
#include "io.hpp"
#include "params.hpp"
#include "pde_solver.hpp"
#include "policing.hpp"
#include "stability.hpp"
#include "timeseries.hpp"
#include "version.hpp"
