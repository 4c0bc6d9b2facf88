// SPDX-License-Identifier: Apache-2.0
//
// seldkit: spatial sound scene synthesis and SELD evaluation toolkit
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

#ifndef SELDKIT_SELDKIT_HPP
#define SELDKIT_SELDKIT_HPP

// Umbrella header pulling in the whole library.

#include "seldkit/array_model.hpp"
#include "seldkit/common.hpp"
#include "seldkit/event_bank.hpp"
#include "seldkit/features.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/metrics.hpp"
#include "seldkit/mls.hpp"
#include "seldkit/music.hpp"
#include "seldkit/pipeline.hpp"
#include "seldkit/rir.hpp"
#include "seldkit/rir_extraction.hpp"
#include "seldkit/rng.hpp"
#include "seldkit/room_sim.hpp"
#include "seldkit/scene.hpp"
#include "seldkit/seld_frame.hpp"
#include "seldkit/special_functions.hpp"
#include "seldkit/tvconv.hpp"
#include "seldkit/wav.hpp"

#endif  // SELDKIT_SELDKIT_HPP
