#pragma once

// Umbrella header for the federated submodular maximization library.

#include "fedsub/attacks.hpp"
#include "fedsub/continuous_greedy.hpp"
#include "fedsub/csv.hpp"
#include "fedsub/distance.hpp"
#include "fedsub/experiment.hpp"
#include "fedsub/federation.hpp"
#include "fedsub/greedy.hpp"
#include "fedsub/ground_set.hpp"
#include "fedsub/matroid.hpp"
#include "fedsub/multilinear.hpp"
#include "fedsub/objective.hpp"
#include "fedsub/rng.hpp"
#include "fedsub/robust_agg.hpp"
#include "fedsub/synthetic.hpp"
