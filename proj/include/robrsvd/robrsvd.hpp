#pragma once

// Robust regularized SVD for two-way functional data.

#include "robrsvd/common.hpp"
#include "robrsvd/observed_matrix.hpp"
#include "robrsvd/huber.hpp"
#include "robrsvd/penalty.hpp"
#include "robrsvd/conditional.hpp"
#include "robrsvd/gcv.hpp"
#include "robrsvd/svd.hpp"
#include "robrsvd/rank_one.hpp"
#include "robrsvd/missing.hpp"
#include "robrsvd/decomposition.hpp"
#include "robrsvd/spline.hpp"
