// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPAUDIT_SVG_CHART_H_
#define DPAUDIT_SVG_CHART_H_

#include <span>
#include <string>

#include "dpaudit/bounds.h"

namespace dpaudit {

// Log-log SVG 1.1 chart of a privacy region: sigma on the x axis, the lower
// and upper epsilon curves, and the band between them shaded. Zero or
// non-finite epsilons are drawn at the bottom or top edge of the plot.
std::string RegionSvg(std::span<const PrivacyRegionPoint> points);

}  // namespace dpaudit

#endif  // DPAUDIT_SVG_CHART_H_
