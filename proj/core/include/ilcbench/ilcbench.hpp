#pragma once

#include "ilcbench/config.hpp"
#include "ilcbench/error.hpp"
#include "ilcbench/experiment.hpp"
#include "ilcbench/frf.hpp"
#include "ilcbench/ilc_basis.hpp"
#include "ilcbench/ilc_frequency.hpp"
#include "ilcbench/ilc_mimo.hpp"
#include "ilcbench/lifted.hpp"
#include "ilcbench/modal.hpp"
#include "ilcbench/noncausal_filter.hpp"
#include "ilcbench/plant_lab.hpp"
#include "ilcbench/polynomial.hpp"
#include "ilcbench/repro_analysis.hpp"
#include "ilcbench/signal.hpp"
#include "ilcbench/trajectory.hpp"
#include "ilcbench/transfer_function.hpp"
