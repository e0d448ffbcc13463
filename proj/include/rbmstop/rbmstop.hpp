#pragma once

#include "rbmstop/config.hpp"
#include "rbmstop/criteria.hpp"
#include "rbmstop/dataset.hpp"
#include "rbmstop/experiment.hpp"
#include "rbmstop/io.hpp"
#include "rbmstop/numeric.hpp"
#include "rbmstop/random.hpp"
#include "rbmstop/rbm.hpp"
#include "rbmstop/training.hpp"
