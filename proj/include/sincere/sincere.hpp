// Copyright 2026 The Sincere Authors.
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

#ifndef SINCERE_SINCERE_HPP_
#define SINCERE_SINCERE_HPP_

#include "sincere/audit.hpp"
#include "sincere/core_model.hpp"
#include "sincere/ingest.hpp"
#include "sincere/perturb.hpp"
#include "sincere/scoring.hpp"
#include "sincere/stats.hpp"

#endif  // SINCERE_SINCERE_HPP_
