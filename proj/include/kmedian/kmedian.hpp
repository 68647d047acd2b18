#pragma once

#include "kmedian/clusterings.hpp"
#include "kmedian/core.hpp"
#include "kmedian/datagen.hpp"
#include "kmedian/euclidean.hpp"
#include "kmedian/eval.hpp"
#include "kmedian/kernel_space.hpp"
#include "kmedian/kernels.hpp"
#include "kmedian/pipeline.hpp"
#include "kmedian/random.hpp"
#include "kmedian/rankings.hpp"
#include "kmedian/reconstruct.hpp"
#include "kmedian/strings.hpp"
#include "kmedian/weiszfeld.hpp"
