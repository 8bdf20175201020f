#pragma once

#include "graphimpute/config.hpp"
#include "graphimpute/error.hpp"
#include "graphimpute/eval.hpp"
#include "graphimpute/features.hpp"
#include "graphimpute/imputers.hpp"
#include "graphimpute/interactions.hpp"
#include "graphimpute/io.hpp"
#include "graphimpute/item_graph.hpp"
#include "graphimpute/operators.hpp"
#include "graphimpute/report.hpp"
