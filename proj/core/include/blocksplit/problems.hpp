#pragma once

#include "blocksplit/archive.hpp"
#include "blocksplit/libsvm.hpp"
#include "blocksplit/logistic.hpp"
#include "blocksplit/quadratic.hpp"
#include "blocksplit/regularize.hpp"
