// SPDX-License-Identifier: Apache-2.0
//
// beamtrain - near-field beam training and sparse channel reconstruction
// Copyright (C) 2026 beamtrain project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "beamtrain/geometry.hpp"
#include "beamtrain/rng.hpp"
#include "beamtrain/codebook.hpp"
#include "beamtrain/channel.hpp"
#include "beamtrain/sweep.hpp"
#include "beamtrain/lasso.hpp"
#include "beamtrain/reconstruct.hpp"
#include "beamtrain/refine.hpp"
#include "beamtrain/metrics.hpp"
#include "beamtrain/io.hpp"
#include "beamtrain/config.hpp"
#include "beamtrain/experiment.hpp"
