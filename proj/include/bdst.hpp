// Copyright 2026 The bdst Authors
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

#pragma once

#include "bdst/common.hpp"
#include "bdst/constructions.hpp"
#include "bdst/edge_list.hpp"
#include "bdst/estimation.hpp"
#include "bdst/exact_count.hpp"
#include "bdst/forest.hpp"
#include "bdst/forest_repair.hpp"
#include "bdst/graph.hpp"
#include "bdst/nibble.hpp"
#include "bdst/orientation.hpp"
#include "bdst/pipeline.hpp"
#include "bdst/random.hpp"
#include "bdst/union_find.hpp"
