// Copyright 2026 the batchlp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BATCHLP_BATCHLP_HPP_
#define BATCHLP_BATCHLP_HPP_

#include "batchlp/batch_solver.hpp"
#include "batchlp/bounds.hpp"
#include "batchlp/generators.hpp"
#include "batchlp/mps.hpp"
#include "batchlp/obbt.hpp"
#include "batchlp/oracle.hpp"
#include "batchlp/problem.hpp"
#include "batchlp/report.hpp"
#include "batchlp/solver.hpp"
#include "batchlp/sparse.hpp"
#include "batchlp/strong_branching.hpp"
#include "batchlp/tuner.hpp"

#endif  // BATCHLP_BATCHLP_HPP_
