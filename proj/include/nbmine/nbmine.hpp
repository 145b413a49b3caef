// Copyright 2026 The nbmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "nbmine/baselines.hpp"
#include "nbmine/error.hpp"
#include "nbmine/evaluation.hpp"
#include "nbmine/itemset.hpp"
#include "nbmine/itemset_io.hpp"
#include "nbmine/nb_mining.hpp"
#include "nbmine/nb_model.hpp"
#include "nbmine/synthgen.hpp"
#include "nbmine/transactions.hpp"

namespace nbmine {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nbmine
