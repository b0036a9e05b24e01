// Copyright 2026 The Authors.
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

#ifndef COALITION_COALITION_HPP
#define COALITION_COALITION_HPP

#include "coalition/agent_set.hpp"
#include "coalition/auction.hpp"
#include "coalition/blackbox.hpp"
#include "coalition/class_solvers.hpp"
#include "coalition/errors.hpp"
#include "coalition/generators.hpp"
#include "coalition/json_io.hpp"
#include "coalition/matching.hpp"
#include "coalition/model.hpp"
#include "coalition/simplex.hpp"
#include "coalition/valuation.hpp"
#include "coalition/verify.hpp"
#include "coalition/welfare.hpp"

#endif  // COALITION_COALITION_HPP
