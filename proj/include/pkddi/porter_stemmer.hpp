// Copyright 2026 The pkddi Authors.
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

#pragma once

#include <string>
#include <string_view>

namespace pkddi {

// Classic Porter (1980) stemmer, matching the author's reference C
// implementation and its published vocabulary/output test files. Input is
// expected to be a lowercase ASCII word; words of length <= 2 are returned
// unchanged.
std::string porter_stem(std::string_view word);

}  // namespace pkddi
