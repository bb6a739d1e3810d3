#pragma once

#include "ocone/continuous_bridge.hpp"
#include "ocone/counterexamples.hpp"
#include "ocone/hit_time.hpp"
#include "ocone/lattice_path.hpp"
#include "ocone/mc_harness.hpp"
#include "ocone/parallel.hpp"
#include "ocone/path.hpp"
#include "ocone/path_io.hpp"
#include "ocone/path_law.hpp"
#include "ocone/reflection_solver.hpp"
#include "ocone/report_io.hpp"
#include "ocone/rng.hpp"
#include "ocone/samplers.hpp"
#include "ocone/stat_tests.hpp"
