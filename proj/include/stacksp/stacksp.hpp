#pragma once

#include "stacksp/consumer.hpp"
#include "stacksp/errors.hpp"
#include "stacksp/experiment.hpp"
#include "stacksp/instance.hpp"
#include "stacksp/islands.hpp"
#include "stacksp/labelcover.hpp"
#include "stacksp/random.hpp"
#include "stacksp/rational.hpp"
#include "stacksp/reduction.hpp"
#include "stacksp/solvers.hpp"
