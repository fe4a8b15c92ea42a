#pragma once

#include "blocksplit/bam.hpp"
#include "blocksplit/baselines.hpp"
#include "blocksplit/inner.hpp"
#include "blocksplit/oracle.hpp"
#include "blocksplit/problems.hpp"
#include "blocksplit/trace.hpp"
