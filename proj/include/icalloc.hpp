/*
 * Copyright 2026 The icalloc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ICALLOC_ICALLOC_HPP
#define ICALLOC_ICALLOC_HPP

#include "icalloc/baselines.hpp"
#include "icalloc/combinatorics.hpp"
#include "icalloc/counting.hpp"
#include "icalloc/design.hpp"
#include "icalloc/error.hpp"
#include "icalloc/harness.hpp"
#include "icalloc/io.hpp"
#include "icalloc/metrics.hpp"
#include "icalloc/oracle.hpp"
#include "icalloc/params.hpp"
#include "icalloc/partition.hpp"
#include "icalloc/random.hpp"
#include "icalloc/task_set.hpp"

#endif  // ICALLOC_ICALLOC_HPP
