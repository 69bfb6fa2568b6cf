// Copyright 2026 The edgeshare Authors.
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

#ifndef EDGESHARE_EDGESHARE_HPP_
#define EDGESHARE_EDGESHARE_HPP_

#include "edgeshare/analysis.hpp"
#include "edgeshare/engine.hpp"
#include "edgeshare/model.hpp"
#include "edgeshare/solver.hpp"
#include "edgeshare/transport.hpp"
#include "edgeshare/utility.hpp"

#endif  // EDGESHARE_EDGESHARE_HPP_
