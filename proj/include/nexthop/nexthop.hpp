// Copyright 2026 The nexthop Authors
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

#ifndef NEXTHOP_NEXTHOP_HPP
#define NEXTHOP_NEXTHOP_HPP

#include "nexthop/analysis.hpp"
#include "nexthop/dot.hpp"
#include "nexthop/engine.hpp"
#include "nexthop/gadgets.hpp"
#include "nexthop/instance_io.hpp"
#include "nexthop/model.hpp"
#include "nexthop/schedulers.hpp"

#endif  // NEXTHOP_NEXTHOP_HPP
