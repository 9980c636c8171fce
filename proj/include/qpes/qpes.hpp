/*
 * Copyright (c) 2026, the qpes contributors.
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

#pragma once

#include "qpes/amplitude_amplification.hpp"
#include "qpes/classical_baselines.hpp"
#include "qpes/complexity_models.hpp"
#include "qpes/eig_oracle.hpp"
#include "qpes/grid_synthesis.hpp"
#include "qpes/phase_map.hpp"
#include "qpes/quantum_state.hpp"
#include "qpes/result_csv.hpp"
#include "qpes/sampling_estimator.hpp"
#include "qpes/sparse_hermitian.hpp"
#include "qpes/spectral_unitary.hpp"
#include "qpes/spectrum.hpp"
#include "qpes/window_filter.hpp"
