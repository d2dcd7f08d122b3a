/*
 * Copyright 2026 The LaPLACE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LAPLACE_ALARM_H_
#define LAPLACE_ALARM_H_

#include <string_view>

namespace laplace::bn {

// The ALARM patient-monitoring network (37 nodes, 46 arcs) in the JSON
// network format.
std::string_view AlarmNetworkJson();

}  // namespace laplace::bn

#endif  // LAPLACE_ALARM_H_
