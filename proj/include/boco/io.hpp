// Copyright 2026 The BOCO Authors
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

#ifndef BOCO_IO_HPP_
#define BOCO_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace boco {

// Shortest round-trip-safe form: printf "%.17g".
std::string format_double(double value);

// Splits one CSV line on commas. No quoting support; none of our files need it.
std::vector<std::string> split_csv_line(std::string_view line);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace boco

#endif  // BOCO_IO_HPP_
