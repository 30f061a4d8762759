#pragma once

#include "langspin/error.hpp"
#include "langspin/graph.hpp"
#include "langspin/spin.hpp"
#include "langspin/hamiltonian.hpp"
#include "langspin/rng.hpp"
#include "langspin/stats.hpp"
#include "langspin/dynamics.hpp"
#include "langspin/oracle.hpp"
#include "langspin/ingest.hpp"
#include "langspin/report_io.hpp"
