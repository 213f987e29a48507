// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "neuronscope/activation_store.hpp"
#include "neuronscope/ap_ranking.hpp"
#include "neuronscope/dump_format.hpp"
#include "neuronscope/error.hpp"
#include "neuronscope/intervention.hpp"
#include "neuronscope/labeling.hpp"
#include "neuronscope/magnitude.hpp"
#include "neuronscope/metrics.hpp"
#include "neuronscope/parallel.hpp"
#include "neuronscope/random.hpp"
#include "neuronscope/schema.hpp"
#include "neuronscope/serialization.hpp"
#include "neuronscope/structure.hpp"
#include "neuronscope/synthetic.hpp"
#include "neuronscope/types.hpp"
