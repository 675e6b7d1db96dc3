// Copyright 2026 The worrywords-engine Authors
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

#include "worrywords/analysis.hpp"
#include "worrywords/annotation.hpp"
#include "worrywords/arcs.hpp"
#include "worrywords/errors.hpp"
#include "worrywords/lexicon.hpp"
#include "worrywords/random.hpp"
#include "worrywords/reliability.hpp"
#include "worrywords/sampler.hpp"
#include "worrywords/stats.hpp"
#include "worrywords/text.hpp"

namespace worrywords {
inline constexpr const char* kVersion = "0.1.0";
}
