// mcsc - mixed-criticality superposition coding for RIS-assisted THz links
// Copyright (C) 2026 The mcsc authors
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


#ifndef MCSC_TEXT_HPP
#define MCSC_TEXT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mcsc {

/// Shortest text that parses back to the same double ('.' decimal point).
/// Non-finite values print as nan, inf and -inf.
std::string format_double(double value);

/// Whole-string parse; nullopt on trailing garbage or an empty string.
std::optional<double> parse_double(std::string_view text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

} // namespace mcsc

#endif
