// Copyright 2026 dpreg contributors
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

#ifndef DPREG_DPREG_HPP_
#define DPREG_DPREG_HPP_

#include "dpreg/common.hpp"
#include "dpreg/dataset_io.hpp"
#include "dpreg/harness.hpp"
#include "dpreg/linalg.hpp"
#include "dpreg/links.hpp"
#include "dpreg/multivariate.hpp"
#include "dpreg/oracle.hpp"
#include "dpreg/privacy.hpp"
#include "dpreg/regression.hpp"
#include "dpreg/synthetic.hpp"
#include "dpreg/univariate_mean.hpp"

#endif  // DPREG_DPREG_HPP_
