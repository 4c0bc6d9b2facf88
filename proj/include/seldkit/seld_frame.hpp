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

#ifndef SELDKIT_SELD_FRAME_HPP
#define SELDKIT_SELD_FRAME_HPP

#include <vector>

#include "seldkit/geometry.hpp"

namespace seldkit {

// One sound event instance localized in one label frame.
struct SeldEvent {
  int class_id = 0;
  int track_id = 0;  // stable per event instance across frames
  Direction direction;
};

// All events active within one 100 ms label frame.
struct SeldFrame {
  std::vector<SeldEvent> events;
};

}  // namespace seldkit

#endif  // SELDKIT_SELD_FRAME_HPP
